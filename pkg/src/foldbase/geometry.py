"""Exact planar predicates on rational points."""

from fractions import Fraction


def pt(x, y):
    return (Fraction(x), Fraction(y))


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def scale(p, t):
    return (p[0] * t, p[1] * t)


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def orient(a, b, c):
    return cross(sub(b, a), sub(c, a))


def sign(x):
    return (x > 0) - (x < 0)


def direction(u):
    """Primitive integer direction of a nonzero rational vector."""
    from math import gcd

    x, y = Fraction(u[0]), Fraction(u[1])
    if x == 0 and y == 0:
        raise ValueError("zero vector has no direction")
    den = x.denominator * y.denominator
    a, b = int(x * den), int(y * den)
    g = gcd(abs(a), abs(b))
    return (a // g, b // g)


def pseudo_angle(u):
    """Exact monotone substitute for the angle of u in [0, 2 pi): value in [0, 4)."""
    x, y = Fraction(u[0]), Fraction(u[1])
    if y == 0 and x > 0:
        return Fraction(0)
    if x > 0 and y > 0:
        return y / (x + y)
    if x <= 0 < y:
        return 1 + (-x) / (-x + y)
    if y <= 0 and x < 0:
        return 2 + (-y) / (-x - y)
    return 3 + x / (x - y)


def on_segment(p, a, b):
    """True if p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def param_on(p, a, b):
    """Parameter t with p = a + t (b - a), for p on the line ab."""
    d = sub(b, a)
    if d[0] != 0:
        return (p[0] - a[0]) / d[0]
    return (p[1] - a[1]) / d[1]


def segment_intersection(a, b, c, d):
    """Intersection of closed segments ab and cd.

    Returns None, ("point", p) or ("overlap", p, q) with p != q.
    """
    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    if d1 == 0 and d2 == 0:
        # collinear
        ta, tb = Fraction(0), Fraction(1)
        tc, td = param_on(c, a, b), param_on(d, a, b)
        lo = max(min(ta, tb), min(tc, td))
        hi = min(max(ta, tb), max(tc, td))
        if lo > hi:
            return None
        p = add(a, scale(sub(b, a), lo))
        if lo == hi:
            return ("point", p)
        q = add(a, scale(sub(b, a), hi))
        return ("overlap", p, q)
    if sign(d1) * sign(d2) > 0 or sign(d3) * sign(d4) > 0:
        return None
    if d1 == 0:
        return ("point", a)
    if d2 == 0:
        return ("point", b)
    if d3 == 0:
        return ("point", c)
    if d4 == 0:
        return ("point", d)
    t = d1 / (d1 - d2)
    return ("point", add(a, scale(sub(b, a), t)))


def signed_area2(points):
    n = len(points)
    return sum(cross(points[i], points[(i + 1) % n]) for i in range(n))


def point_in_polygon(p, poly):
    """Winding number of a closed polyline around p (p not on it)."""
    w = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if a[1] <= p[1]:
            if b[1] > p[1] and orient(a, b, p) > 0:
                w += 1
        elif b[1] <= p[1] and orient(a, b, p) < 0:
            w -= 1
    return w


def on_polyline(p, poly, closed=True):
    n = len(poly)
    m = n if closed else n - 1
    return any(on_segment(p, poly[i], poly[(i + 1) % n]) for i in range(m))
