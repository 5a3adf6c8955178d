"""Existence decisions, invariants and the simply connected classification."""

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .lattice_core import (
    direction_vector,
    lattice_det,
    mat_inv,
    mat_vec,
    reduce_slope,
    slope_of_vector,
)
from .orbit_space import (
    CyclicSlopeList,
    WeightedOrbitSpace,
    as_slopes,
    is_right_polygonal,
    orbit_space_summary,
    positive_turning,
    vertex_count,
)

YES, NO, UNKNOWN = "Yes", "No", "Unknown"


@dataclass(frozen=True)
class Decision:
    answer: str
    value: object = None
    reason: str = ""
    clause: str = ""

    def __bool__(self):
        return self.answer == YES

    def __str__(self):
        text = self.answer
        if self.clause:
            text += " (clause %s)" % self.clause
        if self.reason:
            text += ": " + self.reason
        return text


def _turnings(b):
    return [positive_turning(L) for L in b.boundaries]


def _single_slope(L):
    return len(set(as_slopes(L))) == 1 and len(L) == 1


def decide_locally_hamiltonian(b):
    """Yes(|Z|) or No(clause) for a weighted orbit space."""
    ks = _turnings(b)
    kt = sum(ks)
    chi = b.euler
    z = kt - 2 * chi
    if b.k == 0:
        if b.genus == 1:
            return Decision(YES, z, "closed torus", "1")
        return Decision(NO, None, "closed base other than the torus", "1")
    if b.genus >= 1:
        return Decision(YES, z, "positive genus with boundary", "2a")
    if kt >= 3 - b.k:
        return Decision(YES, z, "turning %dπ ≥ %dπ" % (kt, 3 - b.k), "2b")
    if b.k == 2 and kt == 0:
        L1, L2 = b.boundaries
        if _single_slope(L1) and _single_slope(L2) and L1 == L2:
            return Decision(YES, z, "annulus with equal single slopes", "2c")
        return Decision(
            NO, None, "annulus with zero turning needs one equal slope per boundary", "2c"
        )
    return Decision(NO, None, "turning %dπ < %dπ" % (kt, 3 - b.k), "2b")


def decide_hamiltonian(b):
    """Yes(diagram), No(reason) or Unknown for a base with boundary."""
    if b.k == 0:
        return Decision(NO, None, "a closed base has no vanishing boundary", "")
    t0 = max(_turnings(b))
    if t0 < 2:
        return Decision(NO, None, "T0 = %dπ < 2π" % t0)
    if b.genus >= 1:
        return Decision(UNKNOWN, None, "genus %d with T0 = %dπ is open" % (b.genus, t0))
    from .builders import build_base

    return Decision(YES, build_base(b), "T0 = %dπ ≥ 2π" % t0)


@dataclass(frozen=True)
class InvariantReport:
    chi_total_space: int
    vanishing_components: int
    b2_plus: object
    turning_per_boundary: tuple


def invariants(b):
    dec = decide_locally_hamiltonian(b)
    if not dec:
        raise ValueError("no locally Hamiltonian structure")
    s = orbit_space_summary(b)
    disk = b.genus == 0 and b.k == 1
    return InvariantReport(
        chi_total_space=s.vertices,
        vanishing_components=dec.value,
        b2_plus=dec.value + 1 if disk else None,
        turning_per_boundary=s.turning_per_boundary,
    )


# ----------------------------------------------------------- orbit keys


def _normalized(slopes):
    """Image under the SL(2, Z) map sending the first two slopes to 0, inf."""
    v, w = direction_vector(slopes[0]), direction_vector(slopes[1])
    if lattice_det(v, w) < 0:
        w = (-w[0], -w[1])
    m = mat_inv(((v[0], w[0]), (v[1], w[1])))
    return tuple(slope_of_vector(mat_vec(m, direction_vector(s))) for s in slopes)


def _forward_key(slopes):
    n = len(slopes)
    rots = [slopes[i:] + slopes[:i] for i in range(n)]
    return min(tuple((s.num, s.den) for s in _normalized(r)) for r in rots)


def _mirror(slopes):
    # reflection (x, y) -> (x, -y) followed by reversal keeps loops counterclockwise
    return tuple(reduce_slope(-s.num, s.den) if s.den else s for s in reversed(slopes))


def orbit_key(slopes):
    """Canonical form of a right polygonal cyclic list under rotation and
    integral affine maps (orientation reversing maps reverse the order)."""
    s = tuple(as_slopes(slopes))
    if len(s) == 1:
        return ((0, 1),)
    if not is_right_polygonal(s):
        raise ValueError("list is not right polygonal")
    return min(_forward_key(s), _forward_key(_mirror(s)))


def _key_of(*pairs):
    return orbit_key([reduce_slope(p, q) for p, q in pairs])


NAMED = {
    _key_of((0, 1), (-1, 1), (1, 0)): "CP2",
    _key_of((1, 0), (0, 1), (-1, 1), (-2, 1)): "CP2 # CP2",
}


@dataclass(frozen=True)
class ClassificationResult:
    kind: str
    m: object = None
    n: object = None
    label: str = ""
    reason: str = ""

    def __str__(self):
        if self.kind == "ConnectedSum":
            return "ConnectedSum(%d, %d)" % (self.m, self.n)
        if self.kind == "Named":
            return self.label
        return "Unknown(%s)" % self.reason


def classify_simply_connected(slopes):
    s = tuple(as_slopes(slopes))
    if not is_right_polygonal(s):
        raise ValueError("list is not right polygonal")
    v = vertex_count(s)
    t = positive_turning(s)
    if v <= 4:
        label = NAMED.get(orbit_key(s)) if len(s) > 1 else None
        if label:
            return ClassificationResult("Named", label=label)
        return ClassificationResult(
            "Unknown", reason="≤ 4 edges: no table entry for this list"
        )
    m = t - 1
    n = v - m - 2
    if n < 0 or m < 0:
        raise ValueError("inconsistent input")
    return ClassificationResult("ConnectedSum", m=m, n=n)


# --------------------------------------------------------------- census


@dataclass(frozen=True)
class CensusRow:
    slopes: CyclicSlopeList
    orbit_size: int
    report: InvariantReport
    classification: object
    members: tuple = field(default=(), repr=False)


def census_slopes(bound):
    out = {reduce_slope(1, 0)}
    for p, q in product(range(-bound, bound + 1), range(1, bound + 1)):
        if gcd(abs(p), q) == 1:
            out.add(reduce_slope(p, q))
    return sorted(out)


def _cyclic_lists(slopes, max_len):
    """Right polygonal lists in canonical rotation, one per cyclic class."""
    dets = {
        (a, b): abs(lattice_det(direction_vector(a), direction_vector(b))) == 1
        for a in slopes
        for b in slopes
    }
    out = []

    def grow(cur):
        if len(cur) >= 2 and dets[(cur[-1], cur[0])]:
            t = tuple(cur)
            if CyclicSlopeList(t).slopes == t:
                out.append(t)
        if len(cur) == max_len:
            return
        for s in slopes:
            # the first slope is the least of the canonical rotation
            if s >= cur[0] and dets[(cur[-1], s)]:
                cur.append(s)
                grow(cur)
                cur.pop()

    for s in slopes:
        grow([s])
    return out


def enumerate_census(max_len, slope_bound, min_turning):
    """Disk orbit spaces up to rotation and integral affine maps."""
    slopes = census_slopes(slope_bound)
    groups = {}
    for t in _cyclic_lists(slopes, max_len):
        if positive_turning(t) < min_turning:
            continue
        groups.setdefault(orbit_key(t), []).append(t)
    rows = []
    for members in groups.values():
        rep = min(members, key=lambda r: (len(r), [(s.num, s.den) for s in r]))
        b = WeightedOrbitSpace(0, (rep,))
        try:
            report = invariants(b)
        except ValueError:
            report = None
        try:
            cls = classify_simply_connected(rep)
        except ValueError as exc:
            cls = ClassificationResult("Unknown", reason=str(exc))
        rows.append(CensusRow(CyclicSlopeList(rep), len(members), report, cls, tuple(members)))
    rows.sort(key=lambda r: (len(r.slopes), [(s.num, s.den) for s in r.slopes]))
    return rows
