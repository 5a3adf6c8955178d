"""Numerical checks of the local models near the vanishing locus and folds.

Coordinates on S^1 x R^3 are ordered (z, alpha, x, y) for exterior algebra,
with volume form dz^dalpha^dx^dy and the flat metric.  Two-forms are stored
as six coefficients in the basis

    (dz^dalpha, dx^dy, dz^dy, dx^dalpha, dz^dx, dy^dalpha).
"""

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

Z, ALPHA, X, Y = 0, 1, 2, 3
BASIS = ((Z, ALPHA), (X, Y), (Z, Y), (X, ALPHA), (Z, X), (Y, ALPHA))
STEP = 1e-5


@dataclass(frozen=True)
class LocalModelPoint:
    alpha: float
    x: float
    y: float
    z: float

    def coords(self):
        """Coordinates in exterior-algebra order (z, alpha, x, y)."""
        return np.array([self.z, self.alpha, self.x, self.y], dtype=float)

    @classmethod
    def from_coords(cls, c):
        return cls(alpha=c[ALPHA], x=c[X], y=c[Y], z=c[Z])


def _point(p):
    if isinstance(p, LocalModelPoint):
        return p
    return LocalModelPoint(*p)


def to_matrix(c):
    """Antisymmetric 4x4 matrix of a two-form given by six coefficients."""
    m = np.zeros((4, 4))
    for v, (i, j) in zip(c, BASIS):
        m[i, j] = v
        m[j, i] = -v
    return m


def from_matrix(m):
    return np.array([m[i, j] for i, j in BASIS])


def _levi_civita():
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        inv = sum(1 for a in range(4) for b in range(a + 1, 4) if perm[a] > perm[b])
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


EPS = _levi_civita()


def hodge_star(c):
    m = to_matrix(c)
    star = 0.5 * np.einsum("ijkl,ij->kl", EPS, m)
    return from_matrix(star)


def wedge_square(c):
    """Coefficient of w^w relative to dz^dalpha^dx^dy."""
    m = to_matrix(c)
    return 0.25 * float(np.einsum("ijkl,ij,kl->", EPS, m, m))


def omega1(p):
    """Coefficients of the model form 2z(dz^da + dx^dy) + x(dz^dy - dx^da) - y(dz^dx + dy^da)."""
    p = _point(p)
    return np.array([2 * p.z, 2 * p.z, p.x, -p.x, -p.y, -p.y], dtype=float)


def _jacobian(f, c, h=STEP):
    """Central differences of a vector function of the coordinates."""
    cols = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        cols.append((np.asarray(f(c + e)) - np.asarray(f(c - e))) / (2 * h))
    return np.stack(cols, axis=1)


def _exterior_derivative(form_of_coords, c, h=STEP):
    """Four coefficients of d of a two-form, on dz^da^dx, dz^da^dy, dz^dx^dy, da^dx^dy."""
    jac = _jacobian(lambda q: to_matrix(form_of_coords(q)).ravel(), c, h)
    grad = jac.reshape(4, 4, 4)  # grad[i, j, m] = d_m w_ij
    out = []
    for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        out.append(grad[j, k, i] - grad[i, k, j] + grad[i, j, k])
    return np.array(out)


@dataclass(frozen=True)
class Omega1Report:
    components: tuple
    wedge_square: float
    d_omega_rank: int
    selfdual_residual: float
    closedness_residual: float


def omega1_suite(p, h=STEP):
    p = _point(p)
    c = omega1(p)
    coords = p.coords()

    def form(q):
        return omega1(LocalModelPoint.from_coords(q))

    jac = _jacobian(form, coords, h)
    sv = np.linalg.svd(jac, compute_uv=False)
    rank = int(np.sum(sv > 1e-9 * sv.max())) if sv.max() > 0 else 0
    return Omega1Report(
        components=tuple(float(v) for v in c),
        wedge_square=wedge_square(c),
        d_omega_rank=rank,
        selfdual_residual=float(np.max(np.abs(hodge_star(c) - c))),
        closedness_residual=float(np.max(np.abs(_exterior_derivative(form, coords, h)))),
    )


@dataclass(frozen=True)
class MomentCoords:
    p1: float
    q1: float
    p2: float
    q2: float
    dpdq_residual: object = None


def _moment(c):
    z, a, x, y = c
    r2 = x * x + y * y
    return np.array([z * z - r2 / 2, a, z * r2, math.atan2(y, x)])


def _wrap(d):
    return (d + math.pi) % (2 * math.pi) - math.pi


def dpdq_residual(p, h=STEP):
    p = _point(p)
    c = p.coords()
    if p.x == 0 and p.y == 0:
        raise ValueError("coordinates singular on axis")
    cols = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        d = _moment(c + e) - _moment(c - e)
        d[3] = _wrap(d[3])
        cols.append(d / (2 * h))
    g = np.stack(cols, axis=1)  # g[f, m] = d_m f
    form = np.outer(g[0], g[1]) - np.outer(g[1], g[0])
    form += np.outer(g[2], g[3]) - np.outer(g[3], g[2])
    target = omega1(p)
    scale = max(1.0, float(np.max(np.abs(target))))
    return float(np.max(np.abs(from_matrix(form) - target))) / scale


def moment_coords(p, residual=True, h=STEP):
    p = _point(p)
    m = _moment(p.coords())
    res = dpdq_residual(p, h) if residual else None
    return MomentCoords(float(m[0]), float(m[1]), float(m[2]), float(m[3]), res)


@dataclass(frozen=True)
class FoldChart:
    p1: object
    p2: object
    jacobian_det: object


def fold_chart(X, Y):
    """psi(X, Y) = (X^2 - Y, 2XY); exact for exact inputs."""
    return FoldChart(X * X - Y, 2 * X * Y, 4 * X * X + 2 * Y)


def fiber_transition_valid(A, Df_samples, tol=1e-9):
    a = np.asarray(A, dtype=float)
    if a.shape != (2, 2) or not np.all(a == np.round(a)):
        return False
    if round(abs(np.linalg.det(a))) != 1:
        return False
    for df in Df_samples:
        s = a.T @ np.asarray(df, dtype=float)
        if np.max(np.abs(s - s.T)) > tol:
            return False
    return True


def verify_models(samples=100, seed=0):
    """Run every model check on seeded random points; returns name -> (ok, detail)."""
    rng = np.random.default_rng(seed)
    out = {}
    worst = {"wedge": 0.0, "selfdual": 0.0, "closed": 0.0, "dpdq": 0.0}
    ranks = set()
    for _ in range(samples):
        a = rng.uniform(0, 2 * math.pi)
        x, y, z = rng.uniform(-2, 2, size=3)
        if math.hypot(x, y) <= 0.1:
            x += 0.2
        p = LocalModelPoint(a, x, y, z)
        rep = omega1_suite(p)
        exact = 2 * (4 * z * z + x * x + y * y)
        worst["wedge"] = max(worst["wedge"], abs(rep.wedge_square - exact) / max(1.0, exact))
        worst["selfdual"] = max(worst["selfdual"], rep.selfdual_residual)
        worst["closed"] = max(worst["closed"], rep.closedness_residual)
        worst["dpdq"] = max(worst["dpdq"], dpdq_residual(p))
        ranks.add(rep.d_omega_rank)
    out["omega1 wedge square"] = (bool(worst["wedge"] < 1e-12), worst["wedge"])
    out["omega1 rank of D omega"] = (ranks == {3}, sorted(ranks))
    out["omega1 self-dual"] = (bool(worst["selfdual"] < 1e-12), worst["selfdual"])
    out["omega1 closed"] = (bool(worst["closed"] < 1e-6), worst["closed"])
    out["dp^dq equals omega1"] = (bool(worst["dpdq"] < 1e-6), worst["dpdq"])
    zero = omega1_suite(LocalModelPoint(rng.uniform(0, 6), 0.0, 0.0, 0.0))
    out["vanishing on the circle"] = (all(v == 0 for v in zero.components), zero.components)
    jac = []
    for _ in range(samples):
        Xv, Yv = rng.uniform(-2, 2), rng.uniform(0, 2)
        fc = fold_chart(Xv, Yv)
        num = _jacobian2(Xv, Yv)
        jac.append(abs(num - fc.jacobian_det) / max(1.0, abs(fc.jacobian_det)))
    out["fold chart jacobian"] = (bool(max(jac) < 1e-6), max(jac))
    a1 = fold_chart(1, 0)
    a2 = fold_chart(-1, 0)
    out["fold chart two-to-one on Y = 0"] = ((a1.p1, a1.p2) == (a2.p1, a2.p2), (a1.p1, a1.p2))
    ok = fiber_transition_valid([[1, 0], [0, 1]], [[[0, 1], [1, 0]]])
    ok = ok and not fiber_transition_valid([[1, 0], [1, 1]], [[[0, 1], [0, 0]]])
    out["fiber transition symmetry"] = (ok, None)
    return out


def _jacobian2(Xv, Yv, h=STEP):
    def f(u):
        fc = fold_chart(u[0], u[1])
        return np.array([fc.p1, fc.p2])

    c = np.array([Xv, Yv])
    cols = []
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        cols.append((f(c + e) - f(c - e)) / (2 * h))
    return float(np.linalg.det(np.stack(cols, axis=1)))
