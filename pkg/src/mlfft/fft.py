"""Unnormalized one-dimensional DFT of arbitrary length.

The lattice sizes produced by the construction are primes, so the transform
must stay O(M log M) at prime lengths.  ``scipy.fft`` (pocketfft) already
does this: lengths with large prime factors go through Bluestein's chirp-z
convolution internally.  This module only fixes the sign and scaling
conventions and provides a direct O(M^2) reference.
"""

from __future__ import annotations

import numpy as np
import scipy.fft

FORWARD = "forward"
INVERSE = "inverse"


def fft_1d(v, direction: str = FORWARD) -> np.ndarray:
    """Unnormalized DFT; ``forward`` uses the kernel ``exp(-2 pi i j l / M)``.

    ``fft_1d(fft_1d(v), "inverse") == M * v`` up to rounding.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("fft_1d expects a nonempty one-dimensional vector")
    if direction == FORWARD:
        return scipy.fft.fft(v)
    if direction == INVERSE:
        return scipy.fft.ifft(v, norm="forward")
    raise ValueError(f"unknown direction {direction!r}")


def dft_direct(v, direction: str = FORWARD) -> np.ndarray:
    """O(M^2) reference DFT with exactly reduced phases, evaluated in row blocks."""
    v = np.asarray(v, dtype=np.complex128)
    M = v.shape[0]
    j = np.arange(M, dtype=np.int64)
    sign = -1.0 if direction == FORWARD else 1.0
    out = np.empty(M, dtype=np.complex128)
    rows = max(1, 2**22 // M)
    for start in range(0, M, rows):
        phase = np.outer(j[start : start + rows], j) % M
        out[start : start + rows] = np.exp(sign * 2j * np.pi * phase / M) @ v
    return out
