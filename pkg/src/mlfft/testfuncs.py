"""Tensor-product test functions with exact Fourier coefficients.

Three univariate factors are provided, each normalized to unit L2 norm:

``g34``
    ``C (4 + sgn(x - 1/2) (sin^3 + sin^4)(2 pi x))``, coefficients decaying
    like ``|k|^-4`` (even ``k``) and ``|k|^-5`` (odd ``k``).
``g3``
    ``C3 (2 + sgn(x - 1/2) sin^3(2 pi x))``, zero on odd frequencies.
``kink``
    ``A max(25/121 - (x - 1/2)^2, 0)``, a truncated parabola with
    coefficients decaying like ``|k|^-2``.

The coefficients have closed forms.  Multiplying a trigonometric
polynomial by ``sgn(x - 1/2)`` convolves its coefficients with
``2 / (pi i n)`` on odd ``n``, and the resulting partial fractions collapse
to the rational expressions used below.  The kink is a piecewise quadratic,
integrated directly.

Norm and tail sums are evaluated without subtractive cancellation.
Per-factor suffix sums are built from the far end, with an analytic
Hurwitz-zeta remainder beyond the stored range, and multivariate tails are
accumulated over the prefix tree of the (lexicographically sorted) index
set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import zeta

from .index_sets import FrequencyIndexSet

C34 = 8.0 * math.sqrt(6.0 * math.pi / (6369.0 * math.pi - 4096.0))
C3 = 4.0 * math.sqrt(3.0 * math.pi / (207.0 * math.pi - 256.0))
KINK_A = 121.0 * math.sqrt(33.0) / 100.0
KINK_HALF_WIDTH = 5.0 / 11.0

NAMES = ("g34", "g3", "kink")
DEFAULT_COEFF_CAP = 2**40
_STORE = 2**16


class CoefficientCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# univariate factors


def eval_1d(name: str, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if name == "g34":
        s = np.sin(2 * np.pi * x)
        return C34 * (4.0 + np.sign(x - 0.5) * (s**3 + s**4))
    if name == "g3":
        s = np.sin(2 * np.pi * x)
        return C3 * (2.0 + np.sign(x - 0.5) * s**3)
    if name == "kink":
        u = x - 0.5
        return KINK_A * np.maximum(25.0 / 121.0 - u * u, 0.0)
    raise ValueError(f"unknown test function {name!r}")


def _sgn_sin3_even(k: np.ndarray) -> np.ndarray:
    # coefficient of sgn(x - 1/2) sin^3(2 pi x) at even k
    k2 = k * k
    return -12.0 / (np.pi * (k2 - 1.0) * (k2 - 9.0))


def _sgn_sin4_odd(k: np.ndarray) -> np.ndarray:
    # coefficient of sgn(x - 1/2) sin^4(2 pi x) at odd k (purely imaginary)
    k2 = k * k
    return 48j / (np.pi * k * (k2 - 4.0) * (k2 - 16.0))


def coeff_1d(name: str, k, cap: int = DEFAULT_COEFF_CAP) -> np.ndarray | complex:
    """Fourier coefficient(s) ``int_0^1 g(x) exp(-2 pi i k x) dx`` of a univariate factor."""
    scalar = np.ndim(k) == 0
    ki = np.atleast_1d(np.asarray(k, dtype=np.int64))
    if ki.size and np.max(np.abs(ki)) > cap:
        raise CoefficientCapExceeded(f"|k| exceeds the coefficient cap {cap}")
    kf = ki.astype(np.float64)
    out = np.zeros(ki.shape, dtype=np.complex128)
    zero = ki == 0
    even = (ki % 2 == 0) & ~zero
    odd = ki % 2 != 0
    if name == "g34":
        out[zero] = C34 * (4.0 - 4.0 / (3.0 * np.pi))
        out[even] = C34 * _sgn_sin3_even(kf[even])
        out[odd] = C34 * _sgn_sin4_odd(kf[odd])
    elif name == "g3":
        out[zero] = C3 * (2.0 - 4.0 / (3.0 * np.pi))
        out[even] = C3 * _sgn_sin3_even(kf[even])
    elif name == "kink":
        a = KINK_HALF_WIDTH
        out[zero] = KINK_A * 4.0 * a**3 / 3.0
        nz = ~zero
        w = 2.0 * np.pi * kf[nz]
        # reduce the phase 10 pi k / 11 exactly before taking sin/cos
        phase = np.pi * ((10 * ki[nz]) % 22) / 11.0
        sign = np.where(ki[nz] % 2 == 0, 1.0, -1.0)
        out[nz] = KINK_A * sign * 4.0 * (np.sin(phase) - a * w * np.cos(phase)) / w**3
    else:
        raise ValueError(f"unknown test function {name!r}")
    return complex(out[0]) if scalar else out


def coeff_fft_oracle(name: str, n: int = 2**20) -> np.ndarray:
    """Coefficients from an ``n``-point equispaced FFT; entry ``k mod n`` holds ``k``."""
    x = np.arange(n) / n
    return np.fft.fft(eval_1d(name, x)) / n


# ---------------------------------------------------------------------------
# suffix tables


def _class_zeta(period: int, residue: int, p: float, K: int) -> float:
    """``sum_{k > K, k = residue mod period} k^-p``."""
    k0 = K + 1 + ((residue - (K + 1)) % period)
    return float(period ** (-p) * zeta(p, k0 / period))


def _beyond(name: str, power: int, K: int) -> float:
    """Analytic ``sum_{k > K} |c_k|^power``."""
    if name in ("g34", "g3"):
        C = C34 if name == "g34" else C3
        total = (12.0 * C / np.pi) ** power * _class_zeta(2, 0, 4 * power, K)
        if name == "g34":
            total += (48.0 * C / np.pi) ** power * _class_zeta(2, 1, 5 * power, K)
        return total
    a = KINK_HALF_WIDTH
    total = 0.0
    for r in range(11):
        phase = np.pi * ((10 * r) % 22) / 11.0
        s, c = math.sin(phase), math.cos(phase)
        if power == 1:
            # for large k the cosine term dominates, so the sign is that of -c
            total += 4 * KINK_A * (
                a * abs(c) / (2 * np.pi) ** 2 * _class_zeta(11, r, 2, K)
                - math.copysign(1.0, c) * s / (2 * np.pi) ** 3 * _class_zeta(11, r, 3, K)
            )
        else:
            total += 16 * KINK_A**2 * (
                s * s / (2 * np.pi) ** 6 * _class_zeta(11, r, 6, K)
                - 2 * a * s * c / (2 * np.pi) ** 5 * _class_zeta(11, r, 5, K)
                + a * a * c * c / (2 * np.pi) ** 4 * _class_zeta(11, r, 4, K)
            )
    return total


@dataclass(frozen=True)
class _Table:
    w: np.ndarray  # |c_k|^p for k = 0..K
    R: np.ndarray  # R[j] = sum_{k >= j} w_k, j = 0..K+1 (R[K+1] analytic)
    total: float  # sum over all integers

    @property
    def K(self) -> int:
        return self.w.shape[0] - 1

    def weight(self, k: np.ndarray) -> np.ndarray:
        return self.w[np.abs(k)]

    def upper(self, m: np.ndarray) -> np.ndarray:
        """``sum_{j > m} w_|j|``."""
        m = np.asarray(m, dtype=np.int64)
        out = np.empty(m.shape, dtype=np.float64)
        pos = m >= 0
        out[pos] = self.R[m[pos] + 1]
        neg = ~pos
        # sum_{j>m} = sum_{i=1}^{-m-1} w_i + R[0]
        out[neg] = self.R[0] + (self.R[1] - self.R[-m[neg]])
        return out

    def lower(self, m: np.ndarray) -> np.ndarray:
        """``sum_{j < m} w_|j|``."""
        return self.upper(-np.asarray(m, dtype=np.int64))

    def between(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """``sum_{lo < j < hi} w_|j|`` for ``lo < hi``."""
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        out = np.zeros(lo.shape, dtype=np.float64)
        gap = hi - lo
        one = gap == 2
        out[one] = self.w[np.abs(lo[one] + 1)]
        wide = gap > 2
        if np.any(wide):
            out[wide] = _interior_sum(self, lo[wide], hi[wide])
        return out


def _interior_sum(t: _Table, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # wide gaps are rare (only for sparse, non-convex sets); sum them exactly
    out = np.zeros(a.shape, dtype=np.float64)
    for i in range(a.size):
        lo, hi = int(a[i]) + 1, int(b[i]) - 1
        ks = np.abs(np.arange(lo, hi + 1))
        out[i] = math.fsum(t.w[ks])
    return out


@lru_cache(maxsize=None)
def _table(name: str, power: int, K: int = _STORE) -> _Table:
    k = np.arange(K + 1, dtype=np.int64)
    w = np.abs(coeff_1d(name, k)) ** power
    beyond = _beyond(name, power, K)
    R = np.empty(K + 2, dtype=np.float64)
    R[K + 1] = beyond
    R[: K + 1] = np.cumsum(w[::-1])[::-1] + beyond
    total = w[0] + 2.0 * R[1]
    w.setflags(write=False)
    R.setflags(write=False)
    return _Table(w, R, float(total))


def _table_for(name: str, power: int, kmax: int) -> _Table:
    K = _STORE
    while K < kmax:
        K *= 2
    return _table(name, power, K)


def a_norm_1d(name: str) -> float:
    return _table(name, 1).total


def l2_norm_1d(name: str) -> float:
    return math.sqrt(_table(name, 2).total)


# ---------------------------------------------------------------------------
# tensor products


@dataclass(frozen=True)
class TensorTestFunction:
    """``f(x) = prod_s g(x_s)`` for one of the univariate factors in :data:`NAMES`."""

    name: str
    dim: int

    def __post_init__(self):
        if self.name not in NAMES:
            raise ValueError(f"unknown test function {self.name!r}; choose from {NAMES}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def __call__(self, x) -> np.ndarray:
        return self.eval(x)

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[1] != self.dim:
            raise ValueError(f"points must have {self.dim} coordinates")
        out = np.prod(eval_1d(self.name, x), axis=1)
        return out[0] if single else out

    def coeff_1d(self, k):
        return coeff_1d(self.name, k)

    def tensor_coeff(self, k) -> np.ndarray | complex:
        return tensor_coeff(self, k)

    @property
    def a_norm_1d(self) -> float:
        return a_norm_1d(self.name)

    @property
    def l2_norm_1d(self) -> float:
        return l2_norm_1d(self.name)

    @property
    def a_norm(self) -> float:
        return self.a_norm_1d**self.dim

    @property
    def l2_norm(self) -> float:
        return self.l2_norm_1d**self.dim


def eval(fn: TensorTestFunction, x) -> np.ndarray:  # noqa: A001 - mirrors the operation name
    return fn.eval(x)


def tensor_coeff(fn: TensorTestFunction, k) -> np.ndarray | complex:
    """``prod_s c_{k_s}`` for one frequency or an ``(n, d)`` array of them."""
    arr = np.asarray(k, dtype=np.int64)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[1] != fn.dim:
        raise ValueError("frequency dimension mismatch")
    c = coeff_1d(fn.name, arr.reshape(-1)).reshape(arr.shape)
    out = np.prod(c, axis=1)
    return complex(out[0]) if single else out


def _tail(table: _Table, freqs: np.ndarray) -> float:
    """``sum_{k not in I} prod_s w(k_s)`` accumulated over the prefix tree of ``I``.

    ``freqs`` must be lexicographically sorted and unique.  For every prefix
    ``P`` the value is the weight of all completions of ``P`` missing from
    ``I``, which is a sum of nonnegative terms, so nothing cancels.
    """
    n, d = freqs.shape
    W = table.total
    if n == 0:
        return W**d
    # value of each distinct full row: no missing completions
    child_val = np.zeros(n, dtype=np.float64)
    child_rows = np.arange(n)  # first row of each child prefix
    for length in range(d, 0, -1):
        # parents are prefixes of length - 1; children (length) are sorted, parents contiguous
        if length - 1 == 0:
            parent_start = np.array([0])
        else:
            pk = freqs[child_rows, : length - 1]
            change = np.any(pk[1:] != pk[:-1], axis=1)
            parent_start = np.concatenate([[0], np.flatnonzero(change) + 1])
        last = freqs[child_rows, length - 1]
        contrib = table.weight(last) * child_val
        inner = np.add.reduceat(contrib, parent_start)
        parent_end = np.concatenate([parent_start[1:], [last.size]]) - 1
        vmin = last[parent_start]
        vmax = last[parent_end]
        comp = table.lower(vmin) + table.upper(vmax)
        # gaps between consecutive children of the same parent
        same = np.ones(last.size, dtype=bool)
        same[parent_start] = False
        idx = np.flatnonzero(same)
        if idx.size:
            gaps = table.between(last[idx - 1], last[idx])
            owner = np.searchsorted(parent_start, idx, side="right") - 1
            comp = comp + np.bincount(owner, weights=gaps, minlength=parent_start.size)
        child_val = inner + comp * W ** (d - length)
        child_rows = child_rows[parent_start]
    return float(child_val[0])


def tail_a_sum(fn: TensorTestFunction, I: FrequencyIndexSet) -> float:
    """``||f||_A - sum_{k in I} |f_k|``, computed as the exterior sum itself."""
    kmax = int(np.max(np.abs(I.frequencies))) if len(I) else 0
    return _tail(_table_for(fn.name, 1, kmax), I.frequencies)


def tail_l2_sq(fn: TensorTestFunction, I: FrequencyIndexSet) -> float:
    """``||f||_2^2 - sum_{k in I} |f_k|^2``, computed as the exterior sum itself."""
    kmax = int(np.max(np.abs(I.frequencies))) if len(I) else 0
    return _tail(_table_for(fn.name, 2, kmax), I.frequencies)


def make(name: str, dim: int) -> TensorTestFunction:
    return TensorTestFunction(name, dim)
