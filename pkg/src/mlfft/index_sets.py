"""Frequency index sets: hyperbolic crosses, l1-balls and dyadic crosses.

All sets are stored as a lexicographically sorted, duplicate-free integer
array of shape ``(n, d)``.  Generation enumerates absolute values coordinate
by coordinate with a per-row bound derived from the remaining weight budget,
then expands signs, so the work is proportional to the output size rather
than to a bounding box.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

DEFAULT_MAX_CARD = 5_000_000


class CardinalityCapExceeded(ValueError):
    """Raised when a generated set would exceed the configured size cap."""


def max_cardinality() -> int:
    """Cardinality cap, overridable through ``MLFFT_MAX_CARD``."""
    value = os.environ.get("MLFFT_MAX_CARD")
    if value is None:
        return DEFAULT_MAX_CARD
    return int(value)


@dataclass(frozen=True)
class WeightParams:
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.alpha < -self.beta:
            raise ValueError("alpha must be >= -beta")


def weight(k, params: WeightParams | tuple[float, float]) -> np.ndarray | float:
    """Mixed/isotropic smoothness weight ``max(1,|k|_1)^a * prod max(1,|k_s|)^b``.

    ``k`` may be a single frequency or an array of shape ``(n, d)``.
    """
    if not isinstance(params, WeightParams):
        params = WeightParams(*params)
    arr = np.asarray(k, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] == 0:
        raise ValueError("frequency must be nonempty")
    absk = np.abs(arr)
    l1 = np.maximum(1.0, absk.sum(axis=-1))
    prod = np.prod(np.maximum(1.0, absk) ** params.beta, axis=-1)
    out = l1**params.alpha * prod
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class FrequencyIndexSet:
    """Ordered, duplicate-free set of ``d``-dimensional integer frequencies.

    Use :meth:`from_array` to build one from arbitrary rows; the constructor
    assumes ``frequencies`` is already canonical (sorted, unique, int64).
    """

    dim: int
    frequencies: np.ndarray
    spec: str = "explicit"
    _lookup: dict = field(default=None, repr=False, compare=False)

    @classmethod
    def from_array(cls, rows, dim: int | None = None, spec: str = "explicit") -> "FrequencyIndexSet":
        arr = np.asarray(rows, dtype=np.int64)
        if arr.size == 0:
            if dim is None:
                dim = arr.shape[1] if arr.ndim == 2 else 0
            if dim < 1:
                raise ValueError("dimension must be positive")
            arr = np.zeros((0, dim), dtype=np.int64)
        else:
            if arr.ndim == 1:
                arr = arr[None, :]
            if dim is not None and arr.shape[1] != dim:
                raise ValueError(f"frequencies have length {arr.shape[1]}, expected {dim}")
            dim = arr.shape[1]
            # np.unique(axis=0) sorts rows lexicographically
            arr = np.unique(arr, axis=0)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        return cls(dim=int(dim), frequencies=arr, spec=spec)

    def __len__(self) -> int:
        return self.frequencies.shape[0]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.frequencies:
            yield tuple(int(v) for v in row)

    def _table(self) -> dict:
        if self._lookup is None:
            object.__setattr__(
                self, "_lookup", {row.tobytes(): i for i, row in enumerate(self.frequencies)}
            )
        return self._lookup

    def __contains__(self, k) -> bool:
        key = np.asarray(k, dtype=np.int64).reshape(-1)
        if key.shape[0] != self.dim:
            return False
        return key.tobytes() in self._table()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyIndexSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.frequencies, other.frequencies)

    def __hash__(self):
        return hash((self.dim, self.frequencies.tobytes()))

    def __repr__(self) -> str:
        return f"FrequencyIndexSet(dim={self.dim}, card={len(self)}, spec={self.spec!r})"

    def positions(self, rows) -> np.ndarray:
        """Index of each row in this set, ``-1`` where absent."""
        rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int64).reshape(-1, self.dim))
        table = self._table()
        return np.array([table.get(r.tobytes(), -1) for r in rows], dtype=np.int64)

    def issubset(self, other: "FrequencyIndexSet") -> bool:
        return bool(np.all(other.positions(self.frequencies) >= 0))

    def subset(self, mask, spec: str | None = None) -> "FrequencyIndexSet":
        """Rows selected by a boolean mask; order is preserved, so no re-sort."""
        arr = np.ascontiguousarray(self.frequencies[np.asarray(mask)])
        arr.setflags(write=False)
        return FrequencyIndexSet(self.dim, arr, spec if spec is not None else self.spec)

    # text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"d {self.dim} count {len(self)}"]
        lines.extend(" ".join(str(int(v)) for v in row) for row in self.frequencies)
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """SHA-256 of the canonical text encoding."""
        return hashlib.sha256(self.to_text().encode("ascii")).hexdigest()

    def write(self, path) -> None:
        Path(path).write_bytes(self.to_text().encode("ascii"))

    @classmethod
    def parse(cls, text: str, spec: str = "explicit") -> "FrequencyIndexSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty index-set file")
        head = lines[0].split()
        if len(head) != 4 or head[0] != "d" or head[2] != "count":
            raise ValueError(f"bad header: {lines[0]!r}")
        dim, count = int(head[1]), int(head[3])
        if dim < 1 or count < 0:
            raise ValueError(f"bad header: {lines[0]!r}")
        body = lines[1:]
        if len(body) != count:
            raise ValueError(f"header announces {count} frequencies, found {len(body)}")
        rows = [[int(v) for v in ln.split()] for ln in body]
        if any(len(r) != dim for r in rows):
            raise ValueError("frequency of wrong length")
        out = cls.from_array(np.array(rows, dtype=np.int64).reshape(-1, dim), dim=dim, spec=spec)
        if len(out) != count:
            raise ValueError("duplicate frequencies in file")
        return out

    @classmethod
    def read(cls, path) -> "FrequencyIndexSet":
        return cls.parse(Path(path).read_text(encoding="ascii"), spec=f"file:{path}")


# ---------------------------------------------------------------------------
# hyperbolic crosses


def _check_cap(n: int, cap: int | None) -> None:
    cap = max_cardinality() if cap is None else cap
    if n > cap:
        raise CardinalityCapExceeded(f"index set would hold {n} frequencies (cap {cap})")


def _simple_fraction(x: float, max_den: int) -> Fraction | None:
    f = Fraction(x).limit_denominator(max_den)
    return f if float(f) == x else None


class _HcMembership:
    """Exact membership test for ``max(1,|k|_1)^(-T) prod max(1,|k_s|) <= N^(1-T)``."""

    def __init__(self, N: float, T: float):
        self.N = N
        self.T = T
        self.T_frac = _simple_fraction(T, 10_000) if math.isfinite(T) else None
        self.N_frac = _simple_fraction(N, 1_000_000)

    def __call__(self, l1: np.ndarray, prod: np.ndarray) -> np.ndarray:
        N, T = self.N, self.T
        l1 = np.maximum(1, l1)
        if T == -math.inf:
            return l1 <= math.floor(N)
        if T == 0:
            return prod <= math.floor(N)
        lhs = np.log(prod.astype(np.float64)) - T * np.log(l1.astype(np.float64))
        rhs = (1.0 - T) * math.log(N)
        diff = rhs - lhs
        tol = 1e-12 * max(1.0, abs(rhs))
        inside = diff > tol
        border = np.flatnonzero(np.abs(diff) <= tol)
        if border.size:
            if self.T_frac is None or self.N_frac is None:
                inside[border] = True
            else:
                for i in border:
                    inside[i] = self._exact(int(l1[i]), int(prod[i]))
        return inside

    def _exact(self, l1: int, prod: int) -> bool:
        a, b = self.T_frac.numerator, self.T_frac.denominator
        p, q = self.N_frac.numerator, self.N_frac.denominator
        e = b - a  # > 0 because T < 1
        # l1^(-a) prod^b <= (p/q)^e, all sides raised to the power b
        left = prod**b * q**e
        right = p**e
        if a < 0:
            left *= l1 ** (-a)
        else:
            right *= l1**a
        return left <= right


def _max_step(feasible, l1, prod, hi: int) -> np.ndarray:
    """Largest ``m`` in ``[0, hi]`` with ``feasible(l1 + m, prod * max(1, m))``.

    Feasibility must be monotone (nonincreasing) in ``m`` for ``m >= 1``.
    """
    lo = np.zeros(l1.shape, dtype=np.int64)
    top = np.full(l1.shape, hi, dtype=np.int64)
    ok1 = feasible(l1 + 1, prod)
    lo[ok1] = 1
    top[~ok1] = 0
    while True:
        active = lo < top
        if not active.any():
            return lo
        mid = np.maximum((lo + top + 1) // 2, 1)
        good = feasible(l1 + mid, prod * mid) & active
        lo = np.where(good, mid, lo)
        top = np.where(active & ~good, mid - 1, top)


def _expand(rows, l1, prod, mmax, step: int = 1):
    counts = mmax // step + 1
    total = int(counts.sum())
    idx = np.repeat(np.arange(rows.shape[0]), counts)
    starts = np.cumsum(counts) - counts
    m = step * (np.arange(total, dtype=np.int64) - np.repeat(starts, counts))
    new_rows = np.concatenate([rows[idx], m[:, None]], axis=1)
    return new_rows, l1[idx] + m, prod[idx] * np.maximum(1, m)


def _expand_signs(mags: np.ndarray, cap: int | None) -> np.ndarray:
    nnz = np.count_nonzero(mags, axis=1)
    _check_cap(int(np.sum(np.left_shift(1, nnz.astype(np.int64)))), cap)
    out = mags
    for s in range(mags.shape[1]):
        flipped = out[out[:, s] != 0].copy()
        flipped[:, s] *= -1
        out = np.concatenate([out, flipped], axis=0)
    return out


def generate_hc(
    d: int, N: float, T: float = 0.0, cap: int | None = None, even_only: bool = False
) -> FrequencyIndexSet:
    """Hyperbolic cross ``I_N^{d,T}``; ``T = -inf`` gives the l1-ball of radius ``N``.

    Parameters
    ----------
    d : int
        Dimension, ``d >= 1``.
    N : float
        Refinement, ``N >= 1``.
    T : float
        Shape parameter in ``[-inf, 1)``.
    cap : int, optional
        Maximum cardinality; defaults to :func:`max_cardinality`.
    even_only : bool
        Enumerate only the frequencies with all components even.  The result
        equals ``filter_even(generate_hc(d, N, T))`` without materializing
        the full cross, and the cap applies to the filtered set.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if not N >= 1:
        raise ValueError("refinement N must be >= 1")
    if not T < 1 or math.isnan(T):
        raise ValueError("shape parameter T must be < 1")
    member = _HcMembership(float(N), float(T))
    if T == -math.inf:
        hi = int(math.floor(N))
    elif T <= 0:
        hi = int(math.floor(float(N) ** (1 - T)))
    else:
        hi = int(math.floor(d ** (T / (1 - T)) * N * (1 + 1e-9)))

    if T <= 0:
        # weight is monotone in every |k_s|, so the zero completion is exact pruning
        feasible = member
    else:
        bound = d ** (T / (1 - T)) * float(N) * (1 + 1e-9)

        def feasible(l1, prod):
            return prod <= bound

    cap_value = max_cardinality() if cap is None else cap
    rows = np.zeros((1, 0), dtype=np.int64)
    l1 = np.zeros(1, dtype=np.int64)
    prod = np.ones(1, dtype=np.int64)
    step = 2 if even_only else 1
    for _ in range(d):
        mmax = _max_step(feasible, l1, prod, hi)
        _check_cap(int((mmax // step + 1).sum()), cap_value)
        rows, l1, prod = _expand(rows, l1, prod, mmax, step)
    rows = rows[member(l1, prod)]
    full = _expand_signs(rows, cap_value)
    tag = f"hc(N={N:g},T={'-inf' if T == -math.inf else f'{T:g}'})"
    if even_only:
        tag += ",even"
    return FrequencyIndexSet.from_array(full, dim=d, spec=tag)


def generate_l1ball(d: int, N: float, cap: int | None = None) -> FrequencyIndexSet:
    out = generate_hc(d, N, -math.inf, cap=cap)
    return FrequencyIndexSet(out.dim, out.frequencies, f"l1ball({N:g})")


def in_hc(k, N: float, T: float) -> np.ndarray:
    """Vectorised membership test for ``I_N^{d,T}`` (used by brute-force checks)."""
    arr = np.abs(np.atleast_2d(np.asarray(k, dtype=np.int64)))
    return _HcMembership(float(N), float(T))(arr.sum(axis=1), np.prod(np.maximum(1, arr), axis=1))


# ---------------------------------------------------------------------------
# dyadic crosses


def dyadic_level(k) -> np.ndarray:
    """Smallest ``j`` with ``k`` in ``Q_j`` where ``Q_0 = {0}``, ``Q_j = {1-2^(j-1),...,2^(j-1)}``."""
    k = np.asarray(k, dtype=np.int64)
    out = np.zeros(k.shape, dtype=np.int64)
    pos = k > 0
    neg = k < 0
    # ceil(log2(v)) for v >= 1 via bit length of v - 1
    out[pos] = 1 + _bit_length(k[pos] - 1)
    out[neg] = 1 + _bit_length(-k[neg])
    return out


def _bit_length(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    out = np.zeros(v.shape, dtype=np.int64)
    nz = v > 0
    out[nz] = np.floor(np.log2(v[nz])).astype(np.int64) + 1
    # float log2 may be off by one near powers of two
    too_small = nz & (np.left_shift(1, out) <= v)
    out[too_small] += 1
    too_big = nz & (np.left_shift(1, np.maximum(out - 1, 0)) > v)
    out[too_big] -= 1
    return out


def _level_values(level: int) -> np.ndarray:
    if level == 0:
        return np.array([0], dtype=np.int64)
    if level == 1:
        return np.array([1], dtype=np.int64)
    lo = np.arange(1 - 2 ** (level - 1), -(2 ** (level - 2)) + 1, dtype=np.int64)
    hi = np.arange(2 ** (level - 2) + 1, 2 ** (level - 1) + 1, dtype=np.int64)
    return np.concatenate([lo, hi])


def generate_dyadic(d: int, n: int, cap: int | None = None) -> FrequencyIndexSet:
    """Dyadic hyperbolic cross ``H_n^d``, the union of boxes ``Q_j`` with ``|j|_1 = n``.

    The boxes are nested in every coordinate, so ``k`` belongs to the union
    exactly when the per-coordinate levels sum to at most ``n``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if n < 0:
        raise ValueError("n must be nonnegative")
    cap_value = max_cardinality() if cap is None else cap
    rows = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros(1, dtype=np.int64)
    values = [_level_values(lv) for lv in range(n + 1)]
    for _ in range(d):
        parts_rows, parts_used = [], []
        for lv in range(n + 1):
            sel = np.flatnonzero(used + lv <= n)
            if sel.size == 0:
                continue
            vals = values[lv]
            _check_cap(sel.size * vals.size, cap_value)
            idx = np.repeat(sel, vals.size)
            parts_rows.append(np.concatenate([rows[idx], np.tile(vals, sel.size)[:, None]], axis=1))
            parts_used.append(used[idx] + lv)
        rows = np.concatenate(parts_rows, axis=0)
        used = np.concatenate(parts_used)
        _check_cap(rows.shape[0], cap_value)
    return FrequencyIndexSet.from_array(rows, dim=d, spec=f"dyadic(n={n})")


# ---------------------------------------------------------------------------
# filters and measures


def filter_even(I: FrequencyIndexSet) -> FrequencyIndexSet:
    """Frequencies of ``I`` whose components are all even."""
    mask = np.all(I.frequencies % 2 == 0, axis=1)
    return I.subset(mask, spec=f"{I.spec},even")


def expansion(I: FrequencyIndexSet) -> int:
    """Largest per-coordinate spread ``max_k k_j - min_l l_j``."""
    if len(I) == 0:
        raise ValueError("expansion of an empty index set is undefined")
    f = I.frequencies
    return int(np.max(f.max(axis=0) - f.min(axis=0)))


def explicit(rows: Sequence[Sequence[int]], dim: int | None = None) -> FrequencyIndexSet:
    return FrequencyIndexSet.from_array(rows, dim=dim, spec="explicit")
