"""Exact slopes, primitive vectors and integral affine maps."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True, order=True)
class Slope:
    """Reduced slope m/n with the sign on m; infinity is 1/0."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 0 or gcd(abs(self.num), self.den) != 1:
            raise ValueError("slope not in normal form: %d/%d" % (self.num, self.den))
        if self.den == 0 and self.num != 1:
            raise ValueError("infinite slope must be 1/0")

    @property
    def is_infinite(self):
        return self.den == 0

    def __str__(self):
        if self.den == 0:
            return "inf"
        if self.den == 1:
            return str(self.num)
        return "%d/%d" % (self.num, self.den)

    def __repr__(self):
        return "Slope(%s)" % self


@dataclass(frozen=True)
class PrimitiveVector:
    x: int
    y: int

    def __post_init__(self):
        if gcd(abs(self.x), abs(self.y)) != 1:
            raise ValueError("vector (%d, %d) is not primitive" % (self.x, self.y))

    def __iter__(self):
        return iter((self.x, self.y))

    def __getitem__(self, i):
        return (self.x, self.y)[i]

    def __len__(self):
        return 2

    def __neg__(self):
        return PrimitiveVector(-self.x, -self.y)


def _mat(rows):
    (a, b), (c, d) = rows
    return ((int(a), int(b)), (int(c), int(d)))


def mat_det(a):
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def mat_inv(a):
    """Inverse of a unimodular integer matrix."""
    d = mat_det(a)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return ((a[1][1] * d, -a[0][1] * d), (-a[1][0] * d, a[0][0] * d))


def mat_transpose(a):
    return ((a[0][0], a[1][0]), (a[0][1], a[1][1]))


def mat_vec(a, v):
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


IDENTITY = ((1, 0), (0, 1))


@dataclass(frozen=True)
class IntegralAffineMap:
    """p -> A p + b with A in GL(2, Z) and b rational."""

    linear: tuple
    translation: tuple = (Fraction(0), Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "linear", _mat(self.linear))
        object.__setattr__(
            self, "translation", tuple(Fraction(t) for t in self.translation)
        )
        if mat_det(self.linear) not in (1, -1):
            raise ValueError("linear part must have determinant +1 or -1")

    @property
    def det(self):
        return mat_det(self.linear)

    def inverse(self):
        inv = mat_inv(self.linear)
        b = mat_vec(inv, self.translation)
        return IntegralAffineMap(inv, (-b[0], -b[1]))

    def compose(self, other):
        """self after other."""
        lin = mat_mul(self.linear, other.linear)
        b = mat_vec(self.linear, other.translation)
        return IntegralAffineMap(
            lin, (b[0] + self.translation[0], b[1] + self.translation[1])
        )

    def __call__(self, p):
        return apply_affine(self, p)


def reduce_slope(numerator, denominator):
    numerator, denominator = int(numerator), int(denominator)
    if numerator == 0 and denominator == 0:
        raise ValueError("undefined slope")
    if denominator == 0:
        return Slope(1, 0)
    g = gcd(abs(numerator), abs(denominator))
    if denominator < 0:
        g = -g
    return Slope(numerator // g, denominator // g)


def slope_of_vector(v):
    """Slope of the line spanned by a nonzero vector (x, y)."""
    x, y = Fraction(v[0]), Fraction(v[1])
    if x == 0 and y == 0:
        raise ValueError("undefined slope")
    if x == 0:
        return Slope(1, 0)
    q = y / x
    return reduce_slope(q.numerator, q.denominator)


def direction_vector(s):
    if s.den == 0:
        return PrimitiveVector(0, 1)
    return PrimitiveVector(s.den, s.num)


def lattice_det(v, w):
    return v[0] * w[1] - v[1] * w[0]


def apply_affine(f, p, as_vector=False):
    q = mat_vec(f.linear, (Fraction(p[0]), Fraction(p[1])))
    if as_vector:
        return q
    return (q[0] + f.translation[0], q[1] + f.translation[1])


def _upper(s):
    # representative of the line in the half plane y > 0 or on the positive x-axis
    v = direction_vector(s)
    if v.y < 0:
        return (-v.x, -v.y)
    return (v.x, v.y)


def angle_less(s1, s2):
    """Exact comparison of line angles in [0, pi)."""
    if s1 == s2:
        return False
    u, w = _upper(s1), _upper(s2)
    if u[1] == 0:
        return True
    if w[1] == 0:
        return False
    return lattice_det(u, w) > 0


def angle_key(s):
    """A sort key realizing angle_less, built from exact integer data."""
    x, y = _upper(s)
    if y == 0:
        return (0, Fraction(0))
    # cot of the angle decreases with the angle
    return (1, -Fraction(x, y))


def slope_angle(s):
    """Floating-point angle in [0, pi) for diagnostics only."""
    import math

    x, y = _upper(s)
    return math.atan2(y, x)
