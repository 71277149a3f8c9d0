import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlfft.fft import FORWARD, INVERSE, dft_direct, fft_1d


def _vec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.mark.parametrize("M", [1, 2, 3, 11, 12, 97, 243, 1009, 1021, 2310])
@pytest.mark.parametrize("direction", [FORWARD, INVERSE])
def test_matches_direct_dft(rng, M, direction):
    v = _vec(rng, M)
    ref = dft_direct(v, direction)
    assert np.linalg.norm(fft_1d(v, direction) - ref) <= 1e-12 * max(1.0, np.linalg.norm(ref))


def test_direct_dft_convention():
    # forward kernel exp(-2 pi i j l / M): a unit impulse at 1 gives the conjugate roots of unity
    M = 5
    e1 = np.zeros(M)
    e1[1] = 1
    assert np.allclose(dft_direct(e1), np.exp(-2j * np.pi * np.arange(M) / M))
    assert np.allclose(dft_direct(e1, INVERSE), np.exp(2j * np.pi * np.arange(M) / M))
    assert np.allclose(dft_direct(_vec(np.random.default_rng(0), 12)), np.fft.fft(_vec(np.random.default_rng(0), 12)))


@given(st.integers(1, 600), st.integers(0, 2**31))
def test_round_trip(M, seed):
    v = _vec(np.random.default_rng(seed), M)
    back = fft_1d(fft_1d(v, FORWARD), INVERSE)
    assert np.linalg.norm(back - M * v) <= 1e-12 * M * np.linalg.norm(v)


@given(st.integers(2, 400), st.integers(0, 2**31))
def test_linearity_and_parseval(M, seed):
    rng = np.random.default_rng(seed)
    a, b = _vec(rng, M), _vec(rng, M)
    fa, fb = fft_1d(a), fft_1d(b)
    assert np.allclose(fft_1d(2 * a - 3j * b), 2 * fa - 3j * fb, atol=1e-10 * M)
    assert np.isclose(np.vdot(fa, fa).real, M * np.vdot(a, a).real, rtol=1e-10)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        fft_1d(np.zeros(0))
    with pytest.raises(ValueError):
        fft_1d(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        fft_1d(np.zeros(3), "sideways")


def test_large_prime_length_accuracy(rng):
    # spot-check a few output entries of a prime length far beyond the direct oracle
    M = 1_000_003
    v = _vec(rng, M)
    out = fft_1d(v)
    j = np.arange(M, dtype=np.int64)
    for l in (0, 1, 777_777, M - 1):
        ref = np.sum(v * np.exp(-2j * np.pi * ((j * l) % M) / M))
        assert abs(out[l] - ref) <= 1e-9 * np.linalg.norm(v) * np.sqrt(M)
