import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from foldbase.lattice_core import (
    IntegralAffineMap,
    PrimitiveVector,
    Slope,
    angle_key,
    angle_less,
    apply_affine,
    direction_vector,
    lattice_det,
    mat_det,
    mat_mul,
    mat_vec,
    reduce_slope,
)

INF = reduce_slope(1, 0)


def slopes_up_to(bound):
    out = {INF}
    for p in range(-bound, bound + 1):
        for q in range(1, bound + 1):
            if math.gcd(abs(p), q) == 1:
                out.add(reduce_slope(p, q))
    return sorted(out)


def atan_angle(s):
    return math.pi / 2 if s.den == 0 else math.atan2(s.num, s.den) % math.pi


def test_reduce_slope_examples():
    assert reduce_slope(2, 4) == Slope(1, 2)
    assert reduce_slope(-2, 4) == Slope(-1, 2)
    assert reduce_slope(2, -4) == Slope(-1, 2)
    assert reduce_slope(1, 0) == INF
    assert reduce_slope(-5, 0) == INF


def test_reduce_slope_both_zero():
    with pytest.raises(ValueError, match="undefined slope"):
        reduce_slope(0, 0)


def test_slope_normal_form_enforced():
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope(1, -2)


def test_direction_vector_examples():
    assert tuple(direction_vector(reduce_slope(0, 1))) == (1, 0)
    assert tuple(direction_vector(INF)) == (0, 1)
    assert tuple(direction_vector(reduce_slope(-1, 2))) == (2, -1)


def test_primitive_vector_rejects_multiples():
    with pytest.raises(ValueError):
        PrimitiveVector(2, 4)


def test_lattice_det_examples():
    assert lattice_det((1, 0), (0, 1)) == 1
    assert lattice_det((1, 0), (1, 1)) == 1
    assert lattice_det((1, -1), (1, -2)) == -1


def test_apply_affine_examples():
    f = IntegralAffineMap(((1, 1), (0, 1)))
    assert apply_affine(f, (0, 1)) == (1, 1)
    ident = IntegralAffineMap(((1, 0), (0, 1)))
    assert apply_affine(ident, (3, -2)) == (3, -2)
    swap = IntegralAffineMap(((0, 1), (1, 0)), (1, 0))
    assert apply_affine(swap, (0, 0)) == (1, 0)
    assert apply_affine(swap, (0, 0), as_vector=True) == (0, 0)


def test_affine_map_rejects_non_unimodular():
    with pytest.raises(ValueError):
        IntegralAffineMap(((2, 0), (0, 1)))


def test_angle_less_examples():
    assert angle_less(reduce_slope(0, 1), INF)
    assert angle_less(INF, reduce_slope(-2, 1))
    assert angle_less(reduce_slope(-2, 1), reduce_slope(-1, 1))


def test_angle_less_matches_float_oracle():
    # oracle: atan-based line angles in [0, pi) over |num|, |den| <= 10
    ss = slopes_up_to(10)
    for a in ss:
        for b in ss:
            assert angle_less(a, b) == (atan_angle(a) < atan_angle(b) - 1e-12)


def test_angle_less_strict_total_order_and_transitive():
    ss = slopes_up_to(6)
    for a in ss:
        assert not angle_less(a, a)
        for b in ss:
            if a != b:
                assert angle_less(a, b) != angle_less(b, a)
    small = slopes_up_to(3)
    for a in small:
        for b in small:
            for c in small:
                if angle_less(a, b) and angle_less(b, c):
                    assert angle_less(a, c)


def test_angle_key_realizes_angle_less():
    ss = slopes_up_to(5)
    for a in ss:
        for b in ss:
            assert (angle_key(a) < angle_key(b)) == angle_less(a, b)



def _slope(p, q):
    return reduce_slope(p, q)


nonzero_pair = st.tuples(st.integers(-20, 20), st.integers(0, 20)).filter(lambda t: t != (0, 0))
GL2Z_GENS = (((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, -1), (1, 0)), ((1, -1), (0, 1)))


def _product(idx):
    m = ((1, 0), (0, 1))
    for i in idx:
        m = mat_mul(m, GL2Z_GENS[i])
    return (m[0][0], m[0][1], m[1][0], m[1][1])


# words in generators of GL(2, Z)
unimodular = st.lists(st.integers(0, len(GL2Z_GENS) - 1), max_size=8).map(_product)
rational = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


@given(nonzero_pair, nonzero_pair)
def test_unimodular_pairs_are_distinct(a, b):
    s, t = _slope(*a), _slope(*b)
    if abs(lattice_det(direction_vector(s), direction_vector(t))) == 1:
        assert s != t


@given(unimodular, rational, rational, rational, rational)
def test_affine_inverse_round_trip(m, bx, by, px, py):
    f = IntegralAffineMap(((m[0], m[1]), (m[2], m[3])), (bx, by))
    p = (px, py)
    assert apply_affine(f, apply_affine(f.inverse(), p)) == p
    assert apply_affine(f.inverse(), apply_affine(f, p)) == p


@given(st.tuples(*[st.integers(-9, 9)] * 4), st.tuples(st.integers(-9, 9), st.integers(-9, 9)),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_det_is_multiplicative(m, v, w):
    a = ((m[0], m[1]), (m[2], m[3]))
    assert lattice_det(mat_vec(a, v), mat_vec(a, w)) == mat_det(a) * lattice_det(v, w)


@given(unimodular, unimodular, rational, rational)
def test_compose_matches_sequential_application(m1, m2, px, py):
    f = IntegralAffineMap(((m1[0], m1[1]), (m1[2], m1[3])), (Fraction(1, 3), -2))
    g = IntegralAffineMap(((m2[0], m2[1]), (m2[2], m2[3])), (5, Fraction(-1, 2)))
    assert f.compose(g)((px, py)) == f(g((px, py)))
