"""Randomized construction of reconstructing multiple rank-1 lattices.

The main entry point is :func:`build_multiple_lattice`.  It draws lattice
sizes from the smallest admissible primes above ``lambda = c(|I| - 1)`` and
generating vectors uniformly at random, keeping a component only if it makes
at least one new frequency alias-free.  A component-by-component builder for
single rank-1 lattices is provided for comparison runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sympy import nextprime as next_prime

from .index_sets import FrequencyIndexSet, expansion
from .lattice import MultipleLattice, RankOneLattice, aliasing_free_mask, is_reconstructing_single, residue


class SearchCeilingExceeded(RuntimeError):
    """A prime or lattice-size search ran past its configured ceiling."""


class NotCovered(RuntimeError):
    """Construction stopped at ``L_max`` components without covering ``I``."""

    def __init__(self, report: "ConstructionReport"):
        super().__init__(
            f"{len(report.uncovered)} frequencies uncovered after {report.L} components"
        )
        self.report = report


@dataclass(frozen=True)
class ConstructionParams:
    c: float = 2.0
    delta: float = 0.5
    seed: int = 0
    l_max_override: int | None = None
    max_useless_draws: int = 1000

    def __post_init__(self):
        if not self.c > 1:
            raise ValueError("oversampling factor c must exceed 1")
        if not 0 < self.delta < 1:
            raise ValueError("failure bound delta must lie in (0, 1)")
        if self.l_max_override is not None and self.l_max_override < 1:
            raise ValueError("l_max_override must be positive")


@dataclass
class ConstructionReport:
    L: int
    L_max: int
    lambda_: float
    primes_tried: list[int]
    rejected_components: int
    covered: bool
    uncovered: FrequencyIndexSet
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "L_max": self.L_max,
            "lambda": self.lambda_,
            "primes_tried": list(self.primes_tried),
            "rejected_components": self.rejected_components,
            "covered": self.covered,
            "uncovered": [list(k) for k in self.uncovered],
            "warnings": list(self.warnings),
        }


def l_max(card: int, c: float, delta: float) -> int:
    """Component cap ``ceil((c/(c-1))^2 (ln|I| - ln delta) / 2)``."""
    return max(1, math.ceil((c / (c - 1)) ** 2 * (math.log(card) - math.log(delta)) / 2))


def _residues_distinct(freqs: np.ndarray, p: int) -> bool:
    red = freqs % p
    d = red.shape[1]
    if d * math.log2(p) < 62:
        # mixed-radix key fits in int64
        key = np.zeros(red.shape[0], dtype=np.int64)
        for s in range(d):
            key = key * p + red[:, s]
        return np.unique(key).size == key.size
    return np.unique(red, axis=0).shape[0] == red.shape[0]


def is_eligible_prime(I: FrequencyIndexSet, p: int, ext: int | None = None) -> bool:
    """Whether ``k -> k mod p`` (componentwise) is injective on ``I``."""
    if ext is None:
        ext = expansion(I)
    if p > ext:
        return True
    return _residues_distinct(I.frequencies, p)


def eligible_primes(I: FrequencyIndexSet, lambda_: float, count: int, ceiling: int | None = None) -> list[int]:
    """The ``count`` smallest primes ``p > lambda_`` on which ``I`` reduces injectively.

    Parameters
    ----------
    ceiling : int, optional
        Abort with :class:`SearchCeilingExceeded` once candidates pass this
        value.  Defaults to ``max(2*lambda, expansion) + 10**6``; every prime
        above the expansion is eligible, so the default is never binding in
        practice.
    """
    if len(I) == 0:
        raise ValueError("index set must be nonempty")
    ext = expansion(I)
    if ceiling is None:
        ceiling = int(max(2 * lambda_, ext)) + 10**6
    out: list[int] = []
    p = next_prime(int(math.floor(lambda_)))
    while len(out) < count:
        if p > ceiling:
            raise SearchCeilingExceeded(f"no further eligible prime below {ceiling}")
        if is_eligible_prime(I, p, ext):
            out.append(p)
        p = next_prime(p)
    return out


def build_multiple_lattice(
    I: FrequencyIndexSet, params: ConstructionParams | None = None
) -> tuple[MultipleLattice, ConstructionReport]:
    """Randomized reconstructing multiple rank-1 lattice for ``I``.

    Component ``L`` uses the ``L``-th admissible prime and a uniformly
    random ``z``.  A component that adds no new alias-free frequency is
    discarded and the same prime is retried with a fresh ``z``.

    Raises
    ------
    NotCovered
        When ``L_max`` components were accepted without full coverage, or
        ``params.max_useless_draws`` consecutive draws were all discarded.
        The exception carries the report.
    """
    params = params or ConstructionParams()
    n = len(I)
    if n == 0:
        raise ValueError("index set must be nonempty")
    d = I.dim
    cap = params.l_max_override or l_max(n, params.c, params.delta)
    lam = params.c * (n - 1)
    warnings = []
    ext = expansion(I)
    if lam < ext:
        warnings.append(
            f"lambda={lam:g} is below the expansion {ext}; construction stays correct but may be slow"
        )
    primes = eligible_primes(I, lam, cap)
    rng = np.random.default_rng(params.seed)
    freqs = I.frequencies

    covered = np.zeros(n, dtype=bool)
    components: list[RankOneLattice] = []
    rejected = 0
    useless_streak = 0
    while not covered.all() and len(components) < cap:
        M = primes[len(components)]
        z = tuple(int(v) for v in rng.integers(0, M, size=d))
        mask = aliasing_free_mask(freqs, z, M)
        if np.any(mask & ~covered):
            covered |= mask
            components.append(RankOneLattice(z, M))
            useless_streak = 0
        else:
            rejected += 1
            useless_streak += 1
            if useless_streak >= params.max_useless_draws:
                warnings.append(f"gave up after {useless_streak} consecutive useless draws")
                break

    report = ConstructionReport(
        L=len(components),
        L_max=cap,
        lambda_=lam,
        primes_tried=primes[: len(components) + (1 if not covered.all() and len(components) < cap else 0)],
        rejected_components=rejected,
        covered=bool(covered.all()),
        uncovered=I.subset(~covered),
        warnings=warnings,
    )
    meta = {"index_set_hash": I.digest(), "seed": params.seed, "c": params.c, "delta": params.delta}
    ml = MultipleLattice(components, meta)
    if not report.covered:
        raise NotCovered(report)
    return ml, report


# ---------------------------------------------------------------------------
# single rank-1 lattices, component by component


def _collision_free_counts(res: np.ndarray) -> np.ndarray:
    """For each column of residues, the number of rows with a unique residue."""
    srt = np.sort(res, axis=0)
    dup = np.zeros(srt.shape, dtype=bool)
    eq = srt[1:] == srt[:-1]
    dup[1:] |= eq
    dup[:-1] |= eq
    return srt.shape[0] - dup.sum(axis=0)


def _cbc_for_size(proj: list[np.ndarray], M: int, rng, max_candidates: int, chunk_entries: int):
    d = len(proj)
    z = [1 % M]
    for s in range(1, d):
        P = proj[s]
        # residues of the projection on the first s coordinates with the chosen prefix
        base = residue(P[:, :s], z, M)
        last = P[:, s] % M
        n = P.shape[0]
        order = rng.permutation(M)[:max_candidates]
        best_z, best_count = None, -1
        step = max(1, chunk_entries // max(n, 1))
        for start in range(0, order.size, step):
            cand = order[start : start + step].astype(np.int64)
            res = (base[:, None] + last[:, None] * cand[None, :]) % M
            counts = _collision_free_counts(res)
            j = int(np.argmax(counts))
            if counts[j] > best_count:
                best_count, best_z = int(counts[j]), int(cand[j])
            if best_count == n:
                break
        z.append(best_z)
    return tuple(z)


def build_single_lattice_cbc(
    I: FrequencyIndexSet,
    seed: int = 0,
    growth: float = 1.1,
    max_candidates: int = 4096,
    ceiling: int | None = None,
) -> RankOneLattice:
    """Reconstructing single rank-1 lattice by a randomized component-by-component search.

    Candidate sizes are primes from ``|I|`` upwards (growing geometrically);
    for each size the generating vector is built one coordinate at a time,
    choosing ``z_s`` among random candidates so that the projection of ``I``
    onto the first ``s`` coordinates stays as collision-free as possible.
    This is a simple randomized variant of CBC, so the sizes are larger
    than the best known ones.

    Raises
    ------
    SearchCeilingExceeded
        If no reconstructing lattice with ``M <= ceiling`` was found.
    """
    n = len(I)
    d = I.dim
    if n == 0:
        raise ValueError("index set must be nonempty")
    if n == 1:
        return RankOneLattice((0,) * d, 1)
    freqs = I.frequencies
    spans = freqs.max(axis=0) - freqs.min(axis=0) + 1
    box = int(np.prod(spans.astype(object)))
    if ceiling is None:
        ceiling = max(box, 2 * n) * 2
    proj = [np.unique(freqs[:, : s + 1], axis=0) for s in range(d)]
    rng = np.random.default_rng(seed)
    M = next_prime(n - 1)
    while M <= ceiling:
        if M >= box:
            # mixed-radix generating vector is injective on the bounding box
            z, radix = [], 1
            for s in range(d):
                z.append(radix % M)
                radix *= int(spans[s])
            lat = RankOneLattice(tuple(z), M)
            if is_reconstructing_single(I, lat.z, lat.M):
                return lat
        z = _cbc_for_size(proj, M, rng, max_candidates, chunk_entries=4_000_000)
        if is_reconstructing_single(I, z, M):
            return RankOneLattice(z, M)
        M = next_prime(max(M, int(M * growth)))
    raise SearchCeilingExceeded(f"no reconstructing single lattice with M <= {ceiling}")


__all__ = [
    "ConstructionParams",
    "ConstructionReport",
    "NotCovered",
    "SearchCeilingExceeded",
    "build_multiple_lattice",
    "build_single_lattice_cbc",
    "eligible_primes",
    "is_eligible_prime",
    "l_max",
]
