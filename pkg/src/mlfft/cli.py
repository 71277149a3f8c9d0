"""Command line front end: ``build``, ``experiment`` and ``verify``.

Exit codes
----------
0   success (``verify``: lattice covers the index set)
1   ``verify``: lattice does not cover the index set
2   construction failed after all retries
64  malformed arguments or index-set specification
65  cardinality cap exceeded
66  lattice was built for a different index set
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from .construct import NotCovered
from .experiment import (
    ExperimentConfig,
    SpecParseError,
    build_with_retries,
    parse_set_spec,
    records_to_csv,
    run_experiment,
    write_run,
    _parse_real,
)
from .index_sets import CardinalityCapExceeded, FrequencyIndexSet
from .lattice import MultipleLattice, coverage_counts

EXIT_OK = 0
EXIT_UNCOVERED = 1
EXIT_NOT_COVERED = 2
EXIT_USAGE = 64
EXIT_CAP = 65
EXIT_MISMATCH = 66


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _real_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _shape(text: str) -> float:
    try:
        return _parse_real(text, "T")
    except SpecParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlfft", description="Multiple rank-1 lattice sampling and reconstruction.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="construct a reconstructing multiple rank-1 lattice")
    b.add_argument("--set", required=True, dest="set_spec", help="index-set spec, e.g. hc:d=3,N=8,T=0")
    b.add_argument("--c", type=float, default=2.0)
    b.add_argument("--delta", type=float, default=0.5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--retries", type=int, default=3)
    b.add_argument("--out", default="lattice.json", help="lattice JSON path; the report and index set are written next to it")

    e = sub.add_parser("experiment", help="run an error sweep and write a CSV")
    e.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    e.add_argument("--function", choices=("g34", "g3", "kink"))
    e.add_argument("--dims", type=_int_list)
    e.add_argument("--family", choices=("hc", "dyadic"))
    e.add_argument("--T", type=_shape, dest="T")
    e.add_argument("--refinements", type=_real_list, help="N values (hc) or levels n (dyadic)")
    e.add_argument("--even", action="store_true", default=None)
    e.add_argument("--scheme", choices=("single", "multiple", "both"))
    e.add_argument("--c", type=float)
    e.add_argument("--delta", type=float)
    e.add_argument("--seed", type=int)
    e.add_argument("--retries", type=int)
    e.add_argument("--max-card", type=int, dest="max_card")
    e.add_argument("--max-M", type=int, dest="max_M")
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--out", required=True, help="run directory")

    v = sub.add_parser("verify", help="check a lattice against an index set")
    v.add_argument("lattice")
    v.add_argument("indexset")
    v.add_argument("--show", type=int, default=20, help="uncovered frequencies to list")
    return parser


def _stem(path: Path) -> Path:
    return path.with_suffix("") if path.suffix == ".json" else path


def cmd_build(args) -> int:
    try:
        I = parse_set_spec(args.set_spec)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ml, report = build_with_retries(I, args.c, args.delta, args.seed, args.retries)
    except NotCovered as exc:
        out = Path(args.out)
        Path(f"{_stem(out)}.report.json").write_text(json.dumps(exc.report.to_dict(), indent=2) + "\n")
        print(f"not covered: {len(exc.report.uncovered)} frequencies left after {args.retries + 1} attempts", file=sys.stderr)
        return EXIT_NOT_COVERED
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    ml.write(out)
    Path(f"{_stem(out)}.report.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    I.write(f"{_stem(out)}.indexset.txt")
    print(f"|I|={len(I)} L={ml.L} M={ml.total_size} M/|I|={ml.total_size / len(I):.3f} -> {out}")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def _experiment_config(args) -> ExperimentConfig:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
    for key in ("function", "dims", "family", "T", "refinements", "even", "scheme", "c", "delta",
                "seed", "retries", "max_card", "max_M"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    return ExperimentConfig.from_dict(data)


def cmd_experiment(args) -> int:
    try:
        cfg = _experiment_config(args)
        cfg.validate()
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = run_experiment(cfg, threads=max(1, args.threads))
    path = write_run(cfg, records, args.out, threads=args.threads)
    print(f"{len(records)}/{len(cfg.points())} points -> {path}")
    if args.verbose:
        sys.stdout.write(records_to_csv(records))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        ml = MultipleLattice.read(args.lattice)
        I = FrequencyIndexSet.read(args.indexset)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    expected = ml.meta.get("index_set_hash")
    if expected is not None and expected != I.digest():
        print("error: lattice was built for a different index set (hash mismatch)", file=sys.stderr)
        return EXIT_MISMATCH
    if ml.dim != I.dim:
        print("error: dimension mismatch", file=sys.stderr)
        return EXIT_MISMATCH
    counts, masks = coverage_counts(I, ml)
    covered = bool(np.all(counts > 0))
    print(f"index set: d={I.dim} |I|={len(I)}")
    print(f"lattice: L={ml.L} M={ml.total_size}")
    for i, (comp, mask) in enumerate(zip(ml.components, masks), 1):
        print(f"  component {i}: M={comp.M} |I_l|={int(mask.sum())}")
    hist = Counter(int(c) for c in counts)
    print("counter histogram: " + ", ".join(f"{k}:{hist[k]}" for k in sorted(hist)))
    if covered:
        print("verdict: covered")
        return EXIT_OK
    missing = I.frequencies[counts == 0]
    print(f"verdict: NOT covered ({missing.shape[0]} frequencies)")
    for row in missing[: args.show]:
        print("  " + " ".join(str(int(v)) for v in row))
    return EXIT_UNCOVERED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"build": cmd_build, "experiment": cmd_experiment, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except CardinalityCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
