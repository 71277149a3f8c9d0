"""Error measurement, an exact aliasing oracle and reference rate curves."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

import numpy as np

from .index_sets import FrequencyIndexSet
from .lattice import MultipleLattice, coverage_counts, residue
from .testfuncs import TensorTestFunction, tail_a_sum, tail_l2_sq, tensor_coeff
from .transform import CoefficientVector

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# aliasing oracle


def _exterior_arrays(exterior, dim: int) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(exterior, Mapping):
        keys = list(exterior.keys())
        freqs = np.array(keys, dtype=np.int64).reshape(-1, dim)
        vals = np.array([exterior[k] for k in keys], dtype=np.complex128)
        return freqs, vals
    freqs, vals = exterior
    return np.asarray(freqs, dtype=np.int64).reshape(-1, dim), np.asarray(vals, dtype=np.complex128)


def aliasing_error_exact(ml: MultipleLattice, exterior, I: FrequencyIndexSet) -> CoefficientVector:
    """Difference between the truncated series and the lattice reconstruction on ``I``.

    For each ``k`` in ``I`` this is minus the average, over the components on
    which ``k`` is alias-free, of all exterior coefficients ``f_{k+h}`` with
    ``h`` a nonzero dual-lattice vector of that component.  Dual membership is
    tested pair by pair, ``(k' - k) . z = 0 mod M``, with no residue bucketing.

    Parameters
    ----------
    exterior : mapping or (freqs, values)
        Fourier coefficients supported outside ``I``.
    """
    freqs, vals = _exterior_arrays(exterior, I.dim)
    if freqs.shape[0] and np.any(I.positions(freqs) >= 0):
        raise ValueError("exterior support must be disjoint from the index set")
    counts, masks = coverage_counts(I, ml)
    out = np.zeros(len(I), dtype=np.complex128)
    if freqs.shape[0] == 0:
        return CoefficientVector(I, out)
    kin = I.frequencies
    diff = (freqs[None, :, :] - kin[:, None, :]).reshape(-1, I.dim)
    for comp, mask in zip(ml.components, masks):
        hit = (residue(diff, comp.z, comp.M) == 0).reshape(len(I), freqs.shape[0])
        out[mask] += hit[mask].astype(np.complex128) @ vals
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(counts > 0, -out / np.maximum(counts, 1), 0)
    return CoefficientVector(I, out)


# ---------------------------------------------------------------------------
# error measurement


def relative_errors(fn: TensorTestFunction, I: FrequencyIndexSet, approx: CoefficientVector) -> tuple[float, float]:
    """Relative Wiener-algebra and L2 errors of an approximation supported on ``I``.

    The error splits into the exact truncation tail outside ``I`` and the
    coefficient error inside ``I``.
    """
    if approx.index_set is not I and approx.index_set != I:
        raise ValueError("approximation is not aligned with the index set")
    exact = tensor_coeff(fn, I.frequencies) if len(I) else np.zeros(0, dtype=np.complex128)
    err = np.abs(exact - approx.values)
    tail_a = tail_a_sum(fn, I)
    tail_l2 = tail_l2_sq(fn, I)
    for label, value in (("A", tail_a), ("L2", tail_l2)):
        if value < -1e-12:
            log.warning("negative %s tail %.3e clamped to zero", label, value)
    tail_a = max(tail_a, 0.0)
    tail_l2 = max(tail_l2, 0.0)
    abs_a = tail_a + math.fsum(err)
    abs_l2 = math.sqrt(tail_l2 + math.fsum(err * err))
    return abs_a / fn.a_norm, abs_l2 / fn.l2_norm


@dataclass
class ErrorRecord:
    d: int
    cardinality: int
    M: int
    L: int
    rel_err_A: float
    rel_err_L2: float
    seed: int
    scheme: str
    T: float | None = None
    N: float | None = None

    def __post_init__(self):
        if self.rel_err_A < 0 or self.rel_err_L2 < 0:
            raise ValueError("errors must be nonnegative")

    def as_dict(self) -> dict:
        return asdict(self)


class InsufficientRecords(ValueError):
    pass


def fit_rate(records: Sequence[ErrorRecord], tail_count: int, metric: str = "rel_err_L2") -> float:
    """Least-squares slope of ``log(error)`` against ``log(M)`` over the largest ``tail_count`` records."""
    if len(records) < 3:
        raise InsufficientRecords("at least three records are needed")
    if tail_count < 2:
        raise InsufficientRecords("tail_count must be at least two")
    recs = sorted(records, key=lambda r: r.M)
    Ms = [r.M for r in recs]
    if any(b <= a for a, b in zip(Ms, Ms[1:])):
        raise ValueError("sample counts must be strictly increasing")
    recs = recs[-tail_count:]
    x = np.log(np.array([r.M for r in recs], dtype=np.float64))
    y = np.log(np.array([getattr(r, metric) for r in recs], dtype=np.float64))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# reference curves


@dataclass(frozen=True)
class BoundParams:
    """Smoothness and shape parameters for the reference curves.

    ``alpha``/``beta`` describe the source space, ``r``/``t`` the target
    space, ``lambda_`` the embedding offset (> 1/2), ``T`` the index-set shape
    and ``epsilon`` a nonnegative rate offset.  ``scale`` is a free prefactor,
    usually fitted to the first measured point.
    """

    d: int
    alpha: float = 0.0
    beta: float = 0.0
    r: float = 0.0
    t: float = 0.0
    lambda_: float = 0.5
    T: float = 0.0
    epsilon: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.alpha <= -self.beta and not (self.alpha == 0 and self.beta == 0):
            raise ValueError("alpha must exceed -beta")
        if not self.T < 1:
            raise ValueError("T must be < 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.scale <= 0:
            raise ValueError("scale must be positive")


def _mr1l(p, L, M):
    return (L**p.d / M) ** (p.beta - p.r - p.t - 0.5 - p.epsilon) * L


def _mr1l_energy(p, L, M):
    return (L / M) ** (p.alpha - p.r + p.beta - p.t - 0.5 - p.epsilon) * L


def _mr1l_a_linf(p, L, M):
    if p.alpha > 0:
        return L * (L / M) ** (p.alpha / p.d + p.beta)
    if p.alpha == 0:
        return L * (L**p.d / M) ** p.beta
    return L * (L / M) ** (p.alpha + p.beta)


def _mr1l_hrt(p, L, M):
    e = p.alpha - p.r + p.beta - p.t - p.lambda_
    if p.T == -math.inf:
        return L * (L / M) ** ((p.alpha - p.r + p.beta - p.lambda_) / p.d)
    if p.T < 0:
        return L * (L / M) ** ((p.T / p.d - 1) / (p.T - 1) * e)
    if p.T == 0:
        return L * (L**p.d / M) ** e
    return L * (L / M) ** e


def _single(p, L, M, exponent):
    return (L ** (p.d - 2) / M) ** exponent * L ** ((p.d - 1) / 2)


_KINDS = {
    "mr1l_l2": _mr1l,
    "mr1l_linf": _mr1l,
    "mr1l_hr": _mr1l,
    "mr1l_hmix": _mr1l,
    "mr1l_energy": _mr1l_energy,
    "mr1l_a_linf": _mr1l_a_linf,
    "mr1l_hrt": _mr1l_hrt,
    "single_l2": lambda p, L, M: _single(p, L, M, p.beta / 2),
    "single_linf": lambda p, L, M: _single(p, L, M, p.beta / 2 - 0.25),
    "single_hr": lambda p, L, M: _single(p, L, M, (p.beta - p.r) / 2),
    "single_hmix": lambda p, L, M: _single(p, L, M, (p.beta - p.t) / 2),
    "linear_l2": lambda p, L, M: (L ** (p.d - 1) / M) ** p.beta * L ** ((p.d - 1) / 2),
    "linear_linf": lambda p, L, M: (L ** (p.d - 1) / M) ** p.beta * M**0.5,
    "linear_hr": lambda p, L, M: M ** (-(p.beta - p.r)),
    "linear_hmix": lambda p, L, M: (L ** (p.d - 1) / M) ** (p.beta - p.t),
    "sparse_grid_l2": lambda p, L, M: M ** (-p.beta) * L ** ((p.d - 1) * (p.beta + 0.5)),
}

BOUND_KINDS = tuple(_KINDS)


def bound_curve(params: BoundParams, kind: str, M) -> np.ndarray | float:
    """Evaluate a reference rate curve ``scale * g(M)`` (natural logarithms).

    Kinds prefixed ``mr1l`` are the multiple-lattice bounds, ``single`` and
    ``linear`` the single-lattice and best-linear comparisons, and
    ``sparse_grid_l2`` the sparse-grid L2 rate.  The target smoothness ``r``
    and ``t`` enter the exponent; set them to zero for the L2 rows.
    """
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown bound kind {kind!r}; choose from {BOUND_KINDS}") from None
    Marr = np.asarray(M, dtype=np.float64)
    if np.any(Marr < 3):
        raise ValueError("bound curves need M >= 3")
    out = params.scale * fn(params, np.log(Marr), Marr)
    return float(out) if np.ndim(out) == 0 else out


def fit_scale(params: BoundParams, kind: str, M: float, value: float) -> BoundParams:
    """Copy of ``params`` whose curve passes through ``(M, value)``."""
    unit = bound_curve(BoundParams(**{**asdict(params), "scale": 1.0}), kind, M)
    return BoundParams(**{**asdict(params), "scale": value / unit})
