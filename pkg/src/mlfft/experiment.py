"""Sweep driver shared by the command line and the demo scripts.

Each sweep point (scheme, dimension, shape, refinement) gets its own seed
derived from the base seed and a stable hash of the point key, so points can
run in any order or in parallel without changing the output.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .analysis import ErrorRecord, relative_errors
from .construct import ConstructionParams, NotCovered, build_multiple_lattice, build_single_lattice_cbc
from .index_sets import FrequencyIndexSet, filter_even, generate_dyadic, generate_hc, max_cardinality
from .lattice import MultipleLattice
from .testfuncs import NAMES, TensorTestFunction
from .transform import approximate

log = logging.getLogger(__name__)

CSV_COLUMNS = ("scheme", "d", "T", "N", "card", "M", "L", "rel_err_A", "rel_err_L2", "seed")
SCHEMES = ("single", "multiple")


class SpecParseError(ValueError):
    """Malformed index-set specification string."""


# ---------------------------------------------------------------------------
# index-set specifications

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def _parse_real(text: str, what: str) -> float:
    if text.strip().lower() in ("-inf", "-infinity"):
        return -math.inf
    if not re.fullmatch(_NUM, text.strip()):
        raise SpecParseError(f"{what} must be a number, got {text!r}")
    return float(text)


def _parse_int(text: str, what: str) -> int:
    if not re.fullmatch(r"[-+]?\d+", text.strip()):
        raise SpecParseError(f"{what} must be an integer, got {text!r}")
    return int(text)


def parse_set_spec(spec: str, cap: int | None = None) -> FrequencyIndexSet:
    """Build the index set described by ``spec``.

    Grammar::

        hc:d=<int>,N=<real>,T=<real|-inf>[,even]
        dyadic:d=<int>,n=<int>[,even]
        file:<path>[,even]
    """
    family, sep, rest = spec.partition(":")
    if not sep:
        raise SpecParseError(f"missing family prefix in {spec!r}")
    family = family.strip()
    if family == "file":
        even = rest.endswith(",even")
        path = rest[: -len(",even")] if even else rest
        if not path:
            raise SpecParseError("file: needs a path")
        try:
            I = FrequencyIndexSet.read(path)
        except (OSError, ValueError) as exc:
            raise SpecParseError(f"cannot read index set {path!r}: {exc}") from exc
        return filter_even(I) if even else I
    parts = [p.strip() for p in rest.split(",") if p.strip()]
    even = False
    fields: dict[str, str] = {}
    for part in parts:
        if part == "even":
            even = True
            continue
        key, eq, value = part.partition("=")
        if not eq or not value:
            raise SpecParseError(f"expected key=value, got {part!r}")
        if key in fields:
            raise SpecParseError(f"duplicate key {key!r}")
        fields[key] = value
    if family == "hc":
        if set(fields) != {"d", "N", "T"}:
            raise SpecParseError("hc needs exactly d, N and T")
        d = _parse_int(fields["d"], "d")
        N = _parse_real(fields["N"], "N")
        T = _parse_real(fields["T"], "T")
        if d < 1 or not N >= 1 or not T < 1:
            raise SpecParseError("hc needs d >= 1, N >= 1 and T < 1")
        return generate_hc(d, N, T, cap=cap, even_only=even)
    elif family == "dyadic":
        if set(fields) != {"d", "n"}:
            raise SpecParseError("dyadic needs exactly d and n")
        d = _parse_int(fields["d"], "d")
        n = _parse_int(fields["n"], "n")
        if d < 1 or n < 0:
            raise SpecParseError("dyadic needs d >= 1 and n >= 0")
        I = generate_dyadic(d, n, cap=cap)
    else:
        raise SpecParseError(f"unknown index-set family {family!r}")
    return filter_even(I) if even else I


# ---------------------------------------------------------------------------
# seeds


def derive_seed(base: int, *key) -> int:
    """``base XOR H(key)`` with ``H`` the first 8 bytes of a SHA-256 digest."""
    text = "|".join(str(k) for k in key).encode("utf-8")
    h = int.from_bytes(hashlib.sha256(text).digest()[:8], "big")
    return (int(base) ^ h) & (2**64 - 1)


def build_with_retries(I: FrequencyIndexSet, c: float, delta: float, seed: int, retries: int):
    """Run the randomized construction, retrying with derived seeds on failure."""
    last = None
    for attempt in range(retries + 1):
        s = seed if attempt == 0 else derive_seed(seed, "retry", attempt)
        try:
            return build_multiple_lattice(I, ConstructionParams(c=c, delta=delta, seed=s))
        except NotCovered as exc:
            last = exc
            log.info("construction attempt %d with seed %d left %d uncovered", attempt, s, len(exc.report.uncovered))
    raise last


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    function: str = "g34"
    dims: list[int] = field(default_factory=lambda: [2])
    family: str = "hc"
    T: float = 0.0
    refinements: list[float] = field(default_factory=lambda: [1, 2, 4, 8, 16])
    even: bool = False
    scheme: str = "multiple"
    c: float = 2.0
    delta: float = 0.5
    seed: int = 0
    retries: int = 3
    max_card: int | None = None
    max_M: int | None = None

    def validate(self) -> None:
        if self.function not in NAMES:
            raise ValueError(f"unknown function {self.function!r}")
        if not self.dims:
            raise ValueError("dims must not be empty")
        if any(d < 1 for d in self.dims):
            raise ValueError("dims must be positive")
        if self.family not in ("hc", "dyadic"):
            raise ValueError(f"unknown family {self.family!r}")
        if not self.refinements:
            raise ValueError("refinements must not be empty")
        if self.scheme not in ("single", "multiple", "both"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        ConstructionParams(c=self.c, delta=self.delta)

    def schemes(self) -> list[str]:
        return list(SCHEMES) if self.scheme == "both" else [self.scheme]

    def points(self) -> list[tuple[str, int, float, float]]:
        return [(s, d, self.T, n) for s in self.schemes() for d in self.dims for n in self.refinements]

    def to_json(self) -> str:
        data = asdict(self)
        data["T"] = _fmt_T(self.T)
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "T" in data and isinstance(data["T"], str):
            data["T"] = _parse_real(data["T"], "T")
        return cls(**data)


def _fmt_T(T: float) -> str:
    return "-inf" if T == -math.inf else f"{T:g}"


def point_index_set(cfg: ExperimentConfig, d: int, refinement: float) -> FrequencyIndexSet:
    cap = cfg.max_card if cfg.max_card is not None else max_cardinality()
    if cfg.family == "hc":
        return generate_hc(d, refinement, cfg.T, cap=cap, even_only=cfg.even)
    I = generate_dyadic(d, int(refinement), cap=cap)
    return filter_even(I) if cfg.even else I


def run_point(cfg: ExperimentConfig, point) -> ErrorRecord:
    scheme, d, T, refinement = point
    seed = derive_seed(cfg.seed, scheme, d, _fmt_T(T), f"{refinement:g}", cfg.family, cfg.even, cfg.function)
    I = point_index_set(cfg, d, refinement)
    if scheme == "multiple":
        ml, _ = build_with_retries(I, cfg.c, cfg.delta, seed, cfg.retries)
    else:
        ml = MultipleLattice([build_single_lattice_cbc(I, seed)])
    if cfg.max_M is not None and ml.total_size > cfg.max_M:
        raise ValueError(f"sample count {ml.total_size} exceeds max_M={cfg.max_M}")
    fn = TensorTestFunction(cfg.function, d)
    approx = approximate(fn, I, ml)
    rel_a, rel_l2 = relative_errors(fn, I, approx)
    return ErrorRecord(
        d=d, cardinality=len(I), M=ml.total_size, L=ml.L, rel_err_A=rel_a,
        rel_err_L2=rel_l2, seed=seed, scheme=scheme, T=T, N=refinement,
    )


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> list[ErrorRecord]:
    """All sweep points, in key order; failed points are logged and skipped."""
    cfg.validate()
    points = cfg.points()

    def safe(point):
        try:
            return run_point(cfg, point)
        except Exception as exc:  # a failing point must not abort the sweep
            log.error("point %s failed: %s", point, exc)
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(safe, points))
    else:
        results = [safe(p) for p in points]
    records = [r for r in results if r is not None]
    records.sort(key=lambda r: (r.scheme, r.d, r.T, r.N))
    return records


def _sci(x: float) -> str:
    return f"{x:.5e}"


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [r.scheme, r.d, _fmt_T(r.T), f"{r.N:g}", r.cardinality, r.M, r.L,
             _sci(r.rel_err_A), _sci(r.rel_err_L2), r.seed]
        )
    return buf.getvalue()


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_run(cfg: ExperimentConfig, records, out_dir, threads: int = 1) -> Path:
    """Write ``results.csv``, ``config.json`` and the ``meta.json`` sidecar into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_bytes(records_to_csv(records).encode("utf-8"))
    (out / "config.json").write_text(cfg.to_json() + "\n")
    meta = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "threads": threads,
        "rows": len(records),
        "points": len(cfg.points()),
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    return out / "results.csv"
