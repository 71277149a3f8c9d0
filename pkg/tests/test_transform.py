import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlfft.construct import ConstructionParams, build_multiple_lattice
from mlfft.index_sets import explicit, generate_dyadic, generate_hc
from mlfft.lattice import MultipleLattice, RankOneLattice
from mlfft.transform import (
    CoefficientVector,
    CoverageViolation,
    SampleVector,
    adjoint_single,
    approximate,
    evaluate_on_lattice,
    reconstruct_multiple,
    sample_function,
)


def _random_coeffs(rng, I):
    return CoefficientVector(I, rng.standard_normal(len(I)) + 1j * rng.standard_normal(len(I)))


def _direct_eval(coeffs, x):
    return np.exp(2j * np.pi * x @ coeffs.index_set.frequencies.T.astype(float)) @ coeffs.values


def test_evaluate_matches_direct_sum(rng):
    I = generate_hc(3, 6, 0.0)
    c = _random_coeffs(rng, I)
    lat = RankOneLattice((1, 17, 290), 401)
    s = evaluate_on_lattice(c, lat)
    assert np.allclose(s.values, _direct_eval(c, lat.nodes()), atol=1e-11)


def test_adjoint_is_scaled_transpose(rng):
    # <A c, s> = M <c, A^H s / M>: the single adjoint estimate is A^H s / M
    I = generate_hc(2, 8, 0.0)
    lat = RankOneLattice((1, 33), 307)
    c = _random_coeffs(rng, I)
    s = SampleVector(lat, rng.standard_normal(lat.M) + 1j * rng.standard_normal(lat.M))
    lhs = np.vdot(s.values, evaluate_on_lattice(c, lat).values)
    rhs = lat.M * np.vdot(adjoint_single(s, I).values, c.values)
    assert np.isclose(lhs, rhs, rtol=1e-12)


def test_single_reconstructing_lattice_is_exact(rng):
    n = 9
    I = explicit([(a, b) for a in range(-4, 5) for b in range(-4, 5)])
    lat = RankOneLattice((1, n), n * n)
    c = _random_coeffs(rng, I)
    back = adjoint_single(evaluate_on_lattice(c, lat), I)
    assert np.allclose(back.values, c.values, atol=1e-13)


@given(st.integers(2, 5), st.integers(0, 2**31), st.sampled_from([-math.inf, 0.0, 0.5]))
def test_multiple_round_trip(d, seed, T):
    rng = np.random.default_rng(seed)
    I = generate_hc(d, 4 if d > 3 else 8, T)
    ml, _ = build_multiple_lattice(I, ConstructionParams(seed=seed))
    c = _random_coeffs(rng, I)
    samples = [evaluate_on_lattice(c, comp) for comp in ml.components]
    back = reconstruct_multiple(ml, samples, I)
    assert np.max(np.abs(back.values - c.values)) <= 1e-10 * np.max(np.abs(c.values))


def test_workers_do_not_change_the_result(rng):
    I = generate_dyadic(3, 6)
    ml, _ = build_multiple_lattice(I, ConstructionParams(seed=5))
    c = _random_coeffs(rng, I)
    samples = [evaluate_on_lattice(c, comp) for comp in ml.components]
    a = reconstruct_multiple(ml, samples, I, workers=1)
    b = reconstruct_multiple(ml, samples, I, workers=6)
    assert np.array_equal(a.values, b.values)


def test_coverage_violation_and_order_checks(rng):
    I = generate_hc(2, 8, 0.0)
    tiny = MultipleLattice([RankOneLattice((1, 1), 5)])
    c = _random_coeffs(rng, I)
    with pytest.raises(CoverageViolation):
        reconstruct_multiple(tiny, [evaluate_on_lattice(c, tiny.components[0])], I)
    ml, _ = build_multiple_lattice(I, ConstructionParams(seed=0, c=1.2))
    samples = [evaluate_on_lattice(c, comp) for comp in ml.components]
    with pytest.raises(ValueError):
        reconstruct_multiple(ml, samples[:-1], I)
    if ml.L > 1:
        with pytest.raises(ValueError):
            reconstruct_multiple(ml, samples[::-1], I)


def test_vector_shape_validation():
    I = generate_hc(2, 2, 0.0)
    with pytest.raises(ValueError):
        CoefficientVector(I, np.zeros(len(I) + 1))
    with pytest.raises(ValueError):
        SampleVector(RankOneLattice((1, 2), 7), np.zeros(6))


def test_approximate_recovers_polynomial_from_point_function(rng):
    I = generate_hc(3, 8, 0.0)
    ml, _ = build_multiple_lattice(I, ConstructionParams(seed=11))
    c = _random_coeffs(rng, I)

    def f(x):
        return _direct_eval(c, x)

    approx = approximate(f, I, ml)
    assert np.allclose(approx.values, c.values, atol=1e-10)
    s = sample_function(f, ml.components[0])
    assert s.values.shape == (ml.components[0].M,)
