"""Sampling and reconstruction on single and multiple rank-1 lattices.

On a rank-1 lattice every frequency ``k`` collapses onto the residue
``k . z mod M``, so evaluating a trigonometric polynomial is a bucket sum
followed by one inverse 1D FFT, and the adjoint is one forward 1D FFT
followed by a lookup.  Reconstruction from a multiple lattice averages the
single-lattice estimates over the components on which a frequency is
alias-free.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fft import FORWARD, INVERSE, fft_1d
from .index_sets import FrequencyIndexSet
from .lattice import MultipleLattice, RankOneLattice, coverage_counts, residue

_COMPENSATED_THRESHOLD = 1_000_000


class CoverageViolation(ValueError):
    """Some frequency is alias-free on none of the components."""


@dataclass
class CoefficientVector:
    index_set: FrequencyIndexSet
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (len(self.index_set),):
            raise ValueError("coefficient vector length does not match the index set")

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass
class SampleVector:
    lattice: RankOneLattice
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.lattice.M,):
            raise ValueError("sample vector length does not match the lattice size")


def _bucket_sum(res: np.ndarray, vals: np.ndarray, M: int) -> np.ndarray:
    if vals.shape[0] > _COMPENSATED_THRESHOLD:
        # extended-precision accumulation keeps rounding independent of |I|
        re = np.zeros(M, dtype=np.longdouble)
        im = np.zeros(M, dtype=np.longdouble)
        np.add.at(re, res, vals.real.astype(np.longdouble))
        np.add.at(im, res, vals.imag.astype(np.longdouble))
        return re.astype(np.float64) + 1j * im.astype(np.float64)
    return np.bincount(res, weights=vals.real, minlength=M) + 1j * np.bincount(
        res, weights=vals.imag, minlength=M
    )


def evaluate_on_lattice(coeffs: CoefficientVector, lat: RankOneLattice) -> SampleVector:
    """Samples ``p(x_j) = sum_k c_k exp(2 pi i j (k.z mod M) / M)`` for ``j < M``."""
    I = coeffs.index_set
    if I.dim != lat.dim:
        raise ValueError("dimension mismatch between coefficients and lattice")
    res = residue(I.frequencies, lat.z, lat.M)
    buckets = _bucket_sum(res, coeffs.values, lat.M)
    return SampleVector(lat, fft_1d(buckets, INVERSE))


def _single_estimates(s: SampleVector, freqs: np.ndarray) -> np.ndarray:
    lat = s.lattice
    h = fft_1d(s.values, FORWARD)
    return h[residue(freqs, lat.z, lat.M)] / lat.M


def adjoint_single(s: SampleVector, I: FrequencyIndexSet) -> CoefficientVector:
    """Lattice estimate ``h_{k.z mod M} / M`` of every coefficient in ``I``."""
    if I.dim != s.lattice.dim:
        raise ValueError("dimension mismatch between samples and index set")
    return CoefficientVector(I, _single_estimates(s, I.frequencies))


def reconstruct_multiple(
    ml: MultipleLattice,
    samples: Sequence[SampleVector],
    I: FrequencyIndexSet,
    workers: int = 1,
) -> CoefficientVector:
    """Average of the single-lattice estimates over the alias-free components.

    Parameters
    ----------
    workers : int
        Number of threads for the per-component FFTs.  The averaging sum is
        always reduced in component order, so the result does not depend on
        this value.

    Raises
    ------
    CoverageViolation
        If some ``k`` in ``I`` is alias-free on no component.
    """
    if len(samples) != ml.L:
        raise ValueError(f"expected {ml.L} sample vectors, got {len(samples)}")
    for comp, s in zip(ml.components, samples):
        if s.lattice != comp:
            raise ValueError("sample vectors are not in component order")
    counts, masks = coverage_counts(I, ml)
    if np.any(counts == 0):
        raise CoverageViolation(f"{int(np.sum(counts == 0))} frequencies are not covered")
    freqs = I.frequencies

    def one(idx: int) -> tuple[np.ndarray, np.ndarray]:
        mask = masks[idx]
        return mask, _single_estimates(samples[idx], freqs[mask])

    if workers > 1 and ml.L > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(ml.L)))
    else:
        parts = [one(i) for i in range(ml.L)]
    acc = np.zeros(len(I), dtype=np.complex128)
    for mask, est in parts:
        acc[mask] += est
    return CoefficientVector(I, acc / counts)


def sample_function(f: Callable[[np.ndarray], np.ndarray], lat: RankOneLattice) -> SampleVector:
    """Evaluate a vectorised point function ``f(x)`` (``x`` of shape ``(M, d)``) on the nodes."""
    vals = np.asarray(f(lat.nodes()), dtype=np.complex128).reshape(-1)
    return SampleVector(lat, vals)


def approximate(
    f: Callable[[np.ndarray], np.ndarray], I: FrequencyIndexSet, ml: MultipleLattice, workers: int = 1
) -> CoefficientVector:
    """Approximate Fourier coefficients of ``f`` on ``I`` from samples on ``ml``.

    The number of samples used is ``ml.total_size``; the origin is sampled
    once per component.
    """
    samples = [sample_function(f, comp) for comp in ml.components]
    return reconstruct_multiple(ml, samples, I, workers=workers)
