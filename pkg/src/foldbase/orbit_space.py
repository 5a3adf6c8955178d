"""Slope lists, weighted orbit spaces and positive turning."""

import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice_core import (
    Slope,
    angle_less,
    direction_vector,
    lattice_det,
    mat_transpose,
    mat_vec,
    slope_angle,
    slope_of_vector,
)


def _canonical_rotation(slopes):
    n = len(slopes)
    rots = [slopes[i:] + slopes[:i] for i in range(n)]
    return min(rots, key=lambda r: [(s.num, s.den) for s in r])


class CyclicSlopeList:
    """A cyclic sequence of slopes stored in its canonical rotation."""

    __slots__ = ("slopes",)

    def __init__(self, slopes):
        slopes = tuple(slopes)
        if not slopes:
            raise ValueError("a cyclic slope list must be nonempty")
        for s in slopes:
            if not isinstance(s, Slope):
                raise TypeError("expected Slope, got %r" % (s,))
        object.__setattr__(self, "slopes", _canonical_rotation(slopes))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicSlopeList is immutable")

    def __len__(self):
        return len(self.slopes)

    def __iter__(self):
        return iter(self.slopes)

    def __getitem__(self, i):
        return self.slopes[i % len(self.slopes)]

    def __eq__(self, other):
        return isinstance(other, CyclicSlopeList) and self.slopes == other.slopes

    def __hash__(self):
        return hash(self.slopes)

    def __repr__(self):
        return "CyclicSlopeList(%s)" % ", ".join(str(s) for s in self.slopes)

    def rotations(self):
        n = len(self.slopes)
        return [self.slopes[i:] + self.slopes[:i] for i in range(n)]


def as_slopes(seq):
    if isinstance(seq, CyclicSlopeList):
        return seq.slopes
    return tuple(seq)


def _pairs(slopes, cyclic):
    n = len(slopes)
    if cyclic:
        if n == 1:
            return []
        return [(slopes[i], slopes[(i + 1) % n]) for i in range(n)]
    return [(slopes[i], slopes[i + 1]) for i in range(n - 1)]


def non_unimodular_pairs(slopes, cyclic=True):
    return [
        (a, b)
        for a, b in _pairs(as_slopes(slopes), cyclic)
        if abs(lattice_det(direction_vector(a), direction_vector(b))) != 1
    ]


def is_right_polygonal(slopes, cyclic=True):
    if isinstance(slopes, CyclicSlopeList):
        cyclic = True
    return not non_unimodular_pairs(slopes, cyclic)


def positive_turning(slopes):
    """k with T = k pi: the number of cyclic descents of the line angle."""
    s = as_slopes(slopes)
    n = len(s)
    if n == 1:
        return 0
    return sum(1 for i in range(n) if not angle_less(s[i], s[(i + 1) % n]))


def turning_float(slopes, cyclic=True):
    """Floating-point sum of counterclockwise line angles, a diagnostic."""
    total = 0.0
    for a, b in _pairs(as_slopes(slopes), cyclic):
        d = slope_angle(b) - slope_angle(a)
        if d < 0:
            d += math.pi
        total += d
    return total


def transform_slope(a, s):
    """Slope of A^T v for the direction v of s."""
    return slope_of_vector(mat_vec(mat_transpose(a), direction_vector(s)))


def transform_list(f, slopes):
    a = f.linear if hasattr(f, "linear") else f
    out = [transform_slope(a, s) for s in as_slopes(slopes)]
    if isinstance(slopes, CyclicSlopeList):
        return CyclicSlopeList(out)
    return tuple(out)


@dataclass(frozen=True)
class WeightedOrbitSpace:
    genus: int
    boundaries: tuple = ()
    orientable: bool = True

    def __post_init__(self):
        bs = tuple(
            b if isinstance(b, CyclicSlopeList) else CyclicSlopeList(b)
            for b in self.boundaries
        )
        object.__setattr__(self, "boundaries", bs)
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if not self.orientable:
            raise ValueError("non-orientable orbit spaces are not modeled")
        for b in bs:
            bad = non_unimodular_pairs(b)
            if bad:
                a, c = bad[0]
                raise ValueError("non-unimodular pair (%s, %s)" % (a, c))
        if not bs and self.genus != 1:
            raise ValueError("the only closed base in scope is the torus")

    @property
    def k(self):
        return len(self.boundaries)

    @property
    def euler(self):
        return 2 - 2 * self.genus - self.k


@dataclass(frozen=True)
class OrbitSpaceSummary:
    euler: int
    total_turning: int
    max_turning: int
    vertices: int
    turning_per_boundary: tuple


def vertex_count(slopes):
    n = len(as_slopes(slopes))
    return 0 if n == 1 else n


def orbit_space_summary(b):
    ks = tuple(positive_turning(L) for L in b.boundaries)
    return OrbitSpaceSummary(
        euler=b.euler,
        total_turning=sum(ks),
        max_turning=max(ks, default=0),
        vertices=sum(vertex_count(L) for L in b.boundaries),
        turning_per_boundary=ks,
    )


def quadrant_stabilizer(p):
    x, y = Fraction(p[0]), Fraction(p[1])
    if x < 0 or y < 0:
        raise ValueError("point outside the closed first quadrant")
    if x == 0 and y == 0:
        return "torus"
    if y == 0:
        return "circle G_(1,0)"
    if x == 0:
        return "circle G_(0,1)"
    return "trivial"
