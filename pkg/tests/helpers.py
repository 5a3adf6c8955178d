"""Independent oracles shared by the tests."""

import math
import random

from foldbase.lattice_core import reduce_slope


def float_turning(slopes):
    """Sum of counterclockwise line angles in [0, pi), in units of pi, by atan2."""
    def theta(s):
        return math.atan2(s.num, s.den) % math.pi if s.den else math.pi / 2

    n = len(slopes)
    total = 0.0
    for i in range(n):
        d = theta(slopes[(i + 1) % n]) - theta(slopes[i])
        if d < 0:
            d += math.pi
        total += d
    return total / math.pi


def _slope(v):
    x, y = v
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return reduce_slope(y, x)


def random_walk_list(rng, n, reach=3):
    """Random right polygonal cyclic list of length n built as a unimodular walk."""
    while True:
        v = rng.choice([(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)])
        vs = [v]
        for _ in range(n - 2):
            a, b = vs[-1]
            u = _complement(a, b)
            t = rng.randint(-reach, reach)
            vs.append((u[0] + t * a, u[1] + t * b))
        a, b = vs[-1]
        u = _complement(a, b)
        v0 = vs[0]
        closing = []
        for t in range(-4 * reach, 4 * reach + 1):
            w = (u[0] + t * a, u[1] + t * b)
            if abs(w[0] * v0[1] - w[1] * v0[0]) == 1:
                closing.append(w)
        if not closing and n > 1:
            continue
        if n > 1:
            vs.append(rng.choice(closing))
        out = [_slope(v) for v in vs[:n]]
        if all(out[i] != out[(i + 1) % n] for i in range(n)) or n == 1:
            return out


def _complement(a, b):
    """Some u with a*u1 - b*u0 = 1."""
    def egcd(x, y):
        if y == 0:
            return (x, 1, 0)
        g, s, t = egcd(y, x % y)
        return (g, t, s - (x // y) * t)

    g, s, t = egcd(a, b)
    if g < 0:
        g, s, t = -g, -s, -t
    # a s + b t = 1, so u = (-t, s) has det((a, b), u) = a s + b t = 1
    return (-t, s)


def random_unimodular(rng, lo=-2, hi=2):
    while True:
        m = ((rng.randint(lo, hi), rng.randint(lo, hi)), (rng.randint(lo, hi), rng.randint(lo, hi)))
        if abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) == 1:
            return m


def seeded(seed):
    return random.Random(seed)
