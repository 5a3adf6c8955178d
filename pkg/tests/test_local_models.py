import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from foldbase.local_models import (
    BASIS,
    LocalModelPoint,
    dpdq_residual,
    fiber_transition_valid,
    fold_chart,
    from_matrix,
    hodge_star,
    moment_coords,
    omega1,
    omega1_suite,
    to_matrix,
    verify_models,
    wedge_square,
)

coord = st.floats(min_value=-3, max_value=3, allow_nan=False)
angle = st.floats(min_value=0, max_value=2 * math.pi, allow_nan=False)


def test_basis_order_is_fixed():
    assert BASIS == ((0, 1), (2, 3), (0, 3), (2, 1), (0, 2), (3, 1))


def test_omega1_examples():
    assert omega1_suite(LocalModelPoint(1.3, 0, 0, 0)).components == (0.0,) * 6
    assert omega1_suite(LocalModelPoint(0, 0, 0, 1)).components == (2, 2, 0, 0, 0, 0)


def test_hodge_star_on_basis():
    # *(dz^da) = dx^dy, *(dz^dy) = -dx^da, *(dz^dx) = dy^da for this orientation
    for i, j, sign in ((0, 1, 1), (2, 3, -1), (4, 5, 1)):
        e = np.zeros(6)
        e[i] = 1
        star = hodge_star(e)
        assert star[j] == sign and np.count_nonzero(star) == 1
    for c in np.eye(6):
        assert np.allclose(hodge_star(hodge_star(c)), c)


def test_matrix_round_trip():
    c = np.arange(1.0, 7.0)
    m = to_matrix(c)
    assert np.allclose(m, -m.T)
    assert np.allclose(from_matrix(m), c)


def test_wedge_square_of_basis_pairs():
    # dz^da ^ dx^dy is the volume form
    assert wedge_square(np.array([1, 1, 0, 0, 0, 0.0])) == pytest.approx(2.0)
    assert wedge_square(np.array([1, 0, 0, 0, 0, 0.0])) == 0.0


@settings(max_examples=200, deadline=None)
@given(angle, coord, coord, coord)
def test_omega1_suite_properties(a, x, y, z):
    rep = omega1_suite(LocalModelPoint(a, x, y, z))
    exact = 2 * (4 * z * z + x * x + y * y)
    assert rep.d_omega_rank == 3
    assert abs(rep.wedge_square - exact) <= 1e-12 * max(1.0, exact)
    assert rep.wedge_square >= -1e-12
    assert rep.selfdual_residual < 1e-12
    assert rep.closedness_residual < 1e-6
    assert (all(v == 0 for v in rep.components)) == (x == y == z == 0)


def test_moment_coords_examples():
    m = moment_coords(LocalModelPoint(0, 1, 0, 1))
    assert (m.p1, m.q1, m.p2, m.q2) == (0.5, 0.0, 1.0, 0.0)
    for t in (0.5, 1.0, 2.0):
        m = moment_coords(LocalModelPoint(0, 0, 0, t), residual=False)
        assert (m.p1, m.p2) == (t * t, 0.0)
        assert m.dpdq_residual is None


def test_dpdq_residual_on_axis_raises():
    with pytest.raises(ValueError, match="coordinates singular on axis"):
        moment_coords(LocalModelPoint(0, 0, 0, 1))


def test_dpdq_residual_is_small_off_axis():
    rng = np.random.default_rng(11)
    done = 0
    while done < 100:
        a = rng.uniform(0, 2 * math.pi)
        x, y, z = rng.uniform(-2, 2, size=3)
        if math.hypot(x, y) <= 0.1:
            continue
        assert dpdq_residual(LocalModelPoint(a, x, y, z)) < 1e-6
        done += 1


def test_dpdq_residual_converges_at_second_order():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = rng.uniform(0, 2 * math.pi)
        x, y, z = rng.uniform(0.5, 2, size=3)
        p = LocalModelPoint(a, x, y, z)
        r3, r4, r5 = (dpdq_residual(p, h) for h in (1e-3, 1e-4, 1e-5))
        assert 80 < r3 / r4 < 120
        assert r5 < r4


def test_fold_chart_examples():
    a, b = fold_chart(1, 0), fold_chart(-1, 0)
    assert (a.p1, a.p2) == (b.p1, b.p2) == (1, 0)
    z = fold_chart(0, 0)
    assert (z.p1, z.p2, z.jacobian_det) == (0, 0, 0)
    e = fold_chart(Fraction(1, 2), Fraction(1, 3))
    assert (e.p1, e.p2, e.jacobian_det) == (Fraction(-1, 12), Fraction(1, 3), Fraction(5, 3))


def test_fold_chart_injective_on_open_half_plane():
    xs = np.arange(-100, 101) / 50
    ys = np.arange(1, 101) / 50
    X, Y = np.meshgrid(xs, ys)
    p1 = (X * X - Y).ravel()
    p2 = (2 * X * Y).ravel()
    keys = np.round(np.stack([p1, p2], axis=1), 9)
    assert len(np.unique(keys, axis=0)) == keys.shape[0]


def test_fold_chart_jacobian_matches_finite_differences():
    h = 1e-5
    for X in np.linspace(-2, 2, 41):
        for Y in np.linspace(0.05, 2, 40):
            f = lambda u, v: np.array([u * u - v, 2 * u * v])
            jx = (f(X + h, Y) - f(X - h, Y)) / (2 * h)
            jy = (f(X, Y + h) - f(X, Y - h)) / (2 * h)
            num = jx[0] * jy[1] - jx[1] * jy[0]
            exact = fold_chart(X, Y).jacobian_det
            assert abs(num - exact) <= 1e-6 * max(1.0, abs(exact))


def test_fiber_transition_examples():
    ident = [[1, 0], [0, 1]]
    assert fiber_transition_valid(ident, [[[0, 0], [0, 0]]])
    assert fiber_transition_valid(ident, [[[0, 1], [1, 0]]])
    assert not fiber_transition_valid([[1, 0], [1, 1]], [[[0, 1], [0, 0]]])
    assert not fiber_transition_valid([[2, 0], [0, 1]], [])
    assert not fiber_transition_valid([[0.5, 0], [0, 2]], [])


def test_verify_models_all_pass():
    out = verify_models(200, seed=1)
    assert out
    assert all(ok for ok, _ in out.values()), out


def test_omega1_is_linear():
    p = LocalModelPoint(0.1, 1.0, -2.0, 0.5)
    q = LocalModelPoint(0.1, 2.0, -4.0, 1.0)
    assert np.allclose(2 * omega1(p), omega1(q))
