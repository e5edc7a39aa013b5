from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pullback.errors import DegenerateInput
from pullback.moebius import (CUSPS, INF, IDENTITY, Moebius, apply, chordal, compose,
                              connecting_map, from_three_points, inverse)


def cross_ratio(x, p, q, r):
    """Value at x of the map sending p, q, r to 0, 1, inf (finite inputs)."""
    return (x - p) * (q - r) / ((x - r) * (q - p))


def test_from_three_points_examples():
    assert from_three_points(0, 1, INF) == IDENTITY
    assert from_three_points(1, 0, INF) == Moebius(-1, 1, 0, 1)
    assert from_three_points(INF, 1, 0) == Moebius(0, 1, 1, 0)
    assert from_three_points(1, 0, INF).formula() == "1 - z"
    assert from_three_points(INF, 1, 0).formula() == "1/z"


@pytest.mark.parametrize("pts", [(0, 0, 1), (1, INF, INF), (INF, 2, INF), (3, 5, 3)])
def test_from_three_points_degenerate(pts):
    with pytest.raises(DegenerateInput):
        from_three_points(*pts)


def test_singular_matrix_rejected():
    with pytest.raises(DegenerateInput):
        Moebius(1, 2, 2, 4)


def test_apply_projective_conventions():
    inv = Moebius(0, 1, 1, 0)
    assert apply(inv, INF) == 0
    assert apply(inv, 0) is INF
    assert apply(Moebius(2, 1, 0, 1), INF) is INF
    assert apply(Moebius(1, 0, 1, -1), INF) == 1
    assert apply(connecting_map(4, 4), 0.3 + 0.2j) == 0.3 + 0.2j


KNOWN_FORMULAS = {
    (4, 1): "1/z", (4, 2): "(z - 1)/z", (4, 3): "1 - z", (4, 4): "z",
    (1, 2): "z/(z - 1)", (3, 2): "1/z", (2, 1): "z/(z - 1)",
}


@pytest.mark.parametrize("ij,formula", sorted(KNOWN_FORMULAS.items()))
def test_connecting_map_formulas(ij, formula):
    assert connecting_map(*ij).formula() == formula


def test_connecting_map_exact_rational_functions():
    assert connecting_map(4, 1) == Moebius(0, 1, 1, 0)
    assert connecting_map(4, 2) == Moebius(1, -1, 1, 0)
    assert connecting_map(4, 3) == Moebius(-1, 1, 0, 1)
    assert connecting_map(1, 2) == Moebius(1, 0, 1, -1)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_connecting_map_permutes_cusps(i, j):
    m = connecting_map(i, j)
    assert m.permutes_cusps()
    if i == j:
        assert m == IDENTITY


@pytest.mark.parametrize("i", [1, 2, 3, 4])
@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_connecting_map_matches_cross_ratio_oracle(i, j):
    # independent oracle: random configurations of four finite points
    rng = np.random.default_rng(10 * i + j)
    m = connecting_map(i, j)
    for _ in range(20):
        x = dict(zip((1, 2, 3, 4), rng.normal(size=4) + 1j * rng.normal(size=4)))
        oj = [k for k in (1, 2, 3, 4) if k != j]
        oi = [k for k in (1, 2, 3, 4) if k != i]
        y = cross_ratio(x[j], *(x[k] for k in oj))
        target = cross_ratio(x[i], *(x[k] for k in oi))
        assert abs(m(y) - target) <= 1e-9 * max(1, abs(target))


def test_connecting_map_inverse_relation():
    for i in range(1, 5):
        for j in range(1, 5):
            assert connecting_map(i, j).inverse() == connecting_map(j, i)


def test_bad_index():
    with pytest.raises(ValueError):
        connecting_map(0, 2)


ints = st.integers(-9, 9)
matrices = st.tuples(ints, ints, ints, ints).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0)


@given(matrices, matrices, matrices)
def test_group_axioms(a, b, c):
    A, B, C = Moebius(*a), Moebius(*b), Moebius(*c)
    assert compose(A, compose(B, C)) == compose(compose(A, B), C)
    assert compose(A, inverse(A)) == IDENTITY
    assert compose(inverse(A), A) == IDENTITY
    assert compose(A, IDENTITY) == A


@given(st.lists(st.one_of(st.fractions(min_value=-20, max_value=20, max_denominator=20),
                          st.just(INF)), min_size=3, max_size=3, unique_by=lambda z: repr(z)))
def test_from_three_points_reproduces_cusps_exactly(pts):
    p, q, r = pts
    m = from_three_points(p, q, r)
    assert m(p) == 0
    assert m(q) == 1
    assert m(r) is INF


@given(matrices, st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_apply_inverse_roundtrip(a, z):
    A = Moebius(*a)
    w = A(z)
    back = A.inverse()(w)
    if back is INF:
        return
    assert abs(back - z) <= 1e-8 * (1 + abs(z)) or chordal(back, z) < 1e-8


def test_isclose_and_equality_are_projective():
    A = Moebius(1, 2, 3, 5)
    assert A == Moebius(2, 4, 6, 10)
    assert A == Moebius(Fraction(1, 3), Fraction(2, 3), 1, Fraction(5, 3))
    assert A.isclose(Moebius(1j, 2j, 3j, 5j))
    assert not A.isclose(Moebius(1, 2, 3, 7))


def test_chordal():
    assert chordal(INF, INF) == 0
    assert chordal(0, INF) == 2
    assert abs(chordal(1, -1) - 2) < 1e-15
    assert abs(chordal(1, INF) - chordal(1, 0)) < 1e-15
    assert all(c in CUSPS for c in (0, 1, INF))
