import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlfft.index_sets import (
    CardinalityCapExceeded,
    FrequencyIndexSet,
    WeightParams,
    dyadic_level,
    expansion,
    explicit,
    filter_even,
    generate_dyadic,
    generate_hc,
    generate_l1ball,
    in_hc,
    weight,
)


def _hc_oracle(d, N, T):
    """Box enumeration with integer-exact membership for the shapes used here."""
    hi = int(N) * (d if T > 0 else 1) + 2
    out = []
    for k in itertools.product(range(-hi, hi + 1), repeat=d):
        l1 = sum(abs(v) for v in k)
        prod = math.prod(max(1, abs(v)) for v in k)
        if T == -math.inf:
            ok = l1 <= N
        elif T == 0:
            ok = prod <= N
        elif T == 0.5:
            # max(1,l1)^(-1/2) prod <= N^(1/2)  <=>  prod^2 <= N max(1,l1)
            ok = prod * prod <= N * max(1, l1)
        elif T == -1:
            # max(1,l1) prod <= N^2
            ok = max(1, l1) * prod <= N * N
        else:
            raise AssertionError
        if ok:
            out.append(k)
    return sorted(out)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("T", [-math.inf, -1.0, 0.0, 0.5])
@pytest.mark.parametrize("N", [1, 2, 5, 8])
def test_hc_matches_box_enumeration(d, T, N):
    I = generate_hc(d, N, T)
    assert [tuple(r) for r in I.frequencies.tolist()] == _hc_oracle(d, N, T)


def test_hc_cardinality_prefixes():
    d2 = [len(generate_hc(2, 2**j, 0.0)) for j in range(8)]
    assert d2 == [9, 21, 49, 113, 265, 605, 1377, 3093]
    d3 = [len(generate_hc(3, 2**j, 0.0)) for j in range(6)]
    assert d3 == [27, 81, 225, 593, 1577, 4021]


def test_even_filter_cardinalities_and_fast_path():
    for j in range(1, 6):
        full = filter_even(generate_hc(2, 2**j, 0.0))
        fast = generate_hc(2, 2**j, 0.0, even_only=True)
        assert full == fast
    assert [len(generate_hc(2, 2**j, 0.0, even_only=True)) for j in range(1, 6)] == [5, 13, 29, 65, 145]


@pytest.mark.parametrize("T", [-math.inf, -0.5, 0.0, 0.25, 0.5])
def test_even_fast_path_other_shapes(T):
    assert generate_hc(3, 12, T, even_only=True) == filter_even(generate_hc(3, 12, T))


def test_l1ball_is_minus_infinity_shape():
    assert generate_l1ball(3, 4) == generate_hc(3, 4, -math.inf)
    # closed form for the l1 ball in 2D: 2N^2 + 2N + 1
    assert len(generate_l1ball(2, 7)) == 2 * 49 + 14 + 1


def test_hc_axis_reach():
    # on the coordinate axes the weight reduces to |k|^(1-T), so the cross reaches exactly N
    for T in (-math.inf, -0.5, 0.0, 0.5):
        I = generate_hc(3, 16, T)
        assert (16, 0, 0) in I and (0, 0, -16) in I
        if T <= 0:
            assert (17, 0, 0) not in I


@given(st.integers(1, 3), st.integers(1, 24), st.sampled_from([-math.inf, 0.0, 0.5]))
def test_hc_properties(d, N, T):
    I = generate_hc(d, N, T)
    f = I.frequencies
    assert np.all(in_hc(f, N, T))
    # symmetric under sign flips and coordinate permutations
    assert FrequencyIndexSet.from_array(-f, d) == I
    assert FrequencyIndexSet.from_array(f[:, ::-1], d) == I
    # canonical: sorted and unique
    assert len({tuple(r) for r in f.tolist()}) == len(I)
    assert np.all(np.diff(np.unique(f, axis=0), axis=0).any(axis=1))
    assert (0,) * d in I
    # monotone in N
    assert I.issubset(generate_hc(d, N + 1, T))


def test_hc_argument_validation():
    with pytest.raises(ValueError):
        generate_hc(0, 4)
    with pytest.raises(ValueError):
        generate_hc(2, 0.5)
    with pytest.raises(ValueError):
        generate_hc(2, 4, 1.0)


def test_cap_and_environment_override(monkeypatch):
    with pytest.raises(CardinalityCapExceeded):
        generate_hc(3, 64, 0.0, cap=100)
    monkeypatch.setenv("MLFFT_MAX_CARD", "50")
    with pytest.raises(CardinalityCapExceeded):
        generate_hc(3, 64, 0.0)
    with pytest.raises(CardinalityCapExceeded):
        generate_dyadic(3, 6)


def _dyadic_oracle(d, n):
    def Q(j):
        return {0} if j == 0 else set(range(1 - 2 ** (j - 1), 2 ** (j - 1) + 1))

    out = set()
    for j in itertools.product(range(n + 1), repeat=d):
        if sum(j) == n:
            out |= set(itertools.product(*(Q(js) for js in j)))
    return sorted(out)


@pytest.mark.parametrize("d,n", [(1, 0), (1, 4), (2, 3), (2, 5), (3, 4), (4, 3)])
def test_dyadic_matches_union_of_boxes(d, n):
    I = generate_dyadic(d, n)
    assert [tuple(r) for r in I.frequencies.tolist()] == _dyadic_oracle(d, n)


def test_dyadic_one_dimensional_size():
    for n in range(8):
        assert len(generate_dyadic(1, n)) == 2**n


def test_dyadic_level():
    k = np.array([0, 1, -1, 2, 3, 4, -3, 5, 8, -8, 9, 2**40])
    expected = [0, 1, 2, 2, 3, 3, 3, 4, 4, 5, 5, 41]
    assert dyadic_level(k).tolist() == expected


def test_weight():
    assert weight((0, 0), (1.0, 2.0)) == 1.0
    # max(1,|k|_1)^a prod max(1,|k_s|)^b
    assert weight((3, -2), (1.0, 2.0)) == pytest.approx(5 * 9 * 4)
    assert np.allclose(weight(np.array([[1, 0], [2, 2]]), WeightParams(0.5, 1.0)), [1.0, 2.0 * 4])
    with pytest.raises(ValueError):
        WeightParams(-3.0, 1.0)
    with pytest.raises(ValueError):
        WeightParams(0.0, -1.0)


def test_index_set_container_protocol(tmp_path):
    I = explicit([(2, 1), (0, 0), (-1, 3), (0, 0)])
    assert len(I) == 3
    assert (0, 0) in I and (5, 5) not in I
    assert list(I)[0] == (-1, 3)
    assert I.positions(np.array([[2, 1], [9, 9]])).tolist() == [2, -1]
    assert not I.frequencies.flags.writeable
    path = tmp_path / "set.txt"
    I.write(path)
    J = FrequencyIndexSet.read(path)
    assert J == I and J.digest() == I.digest()
    assert expansion(I) == 3


@pytest.mark.parametrize(
    "text",
    ["", "d 2 count 1\n0\n", "d 2 count 2\n0 0\n", "d 2 count 2\n0 0\n0 0\n", "x 2 count 1\n0 0\n"],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        FrequencyIndexSet.parse(text)


def test_expansion_of_empty_set():
    with pytest.raises(ValueError):
        expansion(FrequencyIndexSet.from_array(np.zeros((0, 2), dtype=np.int64), 2))
