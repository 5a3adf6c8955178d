"""Developed diagrams, gluings and the exact predicates imposed on them."""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .geometry import (
    add,
    cross,
    direction,
    dot,
    on_segment,
    param_on,
    point_in_polygon,
    pseudo_angle,
    pt,
    scale,
    segment_intersection,
    signed_area2,
    sub,
)
from .lattice_core import (
    IDENTITY,
    IntegralAffineMap,
    apply_affine,
    lattice_det,
    mat_inv,
    mat_mul,
    slope_of_vector,
)
from .orbit_space import CyclicSlopeList, as_slopes

BOUNDARY = "boundary"
GLUED = "glued"
END = "end"
KINDS = (BOUNDARY, GLUED, END)


class DiagramError(ValueError):
    pass


def _same_dir(u, v):
    return cross(u, v) == 0 and dot(u, v) > 0


def _opposite(u, v):
    return cross(u, v) == 0 and dot(u, v) < 0


@dataclass(frozen=True)
class Edge:
    """A maximal constant-slope edge; interior chain points are folds."""

    chain: tuple
    kind: str = BOUNDARY

    def __post_init__(self):
        chain = tuple(pt(*p) for p in self.chain)
        object.__setattr__(self, "chain", chain)
        if self.kind not in KINDS:
            raise DiagramError("unknown edge kind %r" % (self.kind,))
        if len(chain) < 2:
            raise DiagramError("an edge needs at least two points")
        dirs = [sub(chain[i + 1], chain[i]) for i in range(len(chain) - 1)]
        for d in dirs:
            if d == (0, 0):
                raise DiagramError("repeated point in edge chain")
        for a, b in zip(dirs, dirs[1:]):
            if not _opposite(a, b):
                raise DiagramError("edge chain must reverse direction at every fold")

    @property
    def start(self):
        return self.chain[0]

    @property
    def end(self):
        return self.chain[-1]

    @property
    def segments(self):
        return [(self.chain[i], self.chain[i + 1]) for i in range(len(self.chain) - 1)]

    @property
    def fold_points(self):
        return self.chain[1:-1]

    @property
    def tangent(self):
        return direction(sub(self.chain[1], self.chain[0]))

    @property
    def last_tangent(self):
        return direction(sub(self.chain[-1], self.chain[-2]))

    @property
    def slope(self):
        return slope_of_vector(self.tangent)

    def reversed(self):
        return Edge(tuple(reversed(self.chain)), self.kind)

    def mapped(self, f):
        return Edge(tuple(apply_affine(f, p) for p in self.chain), self.kind)


@dataclass(frozen=True)
class PolygonalDiagram:
    """Edges, closed face loops (grouped into faces) or an open path."""

    edges: tuple
    loops: tuple = ()
    faces: tuple = None
    path: tuple = None

    def __post_init__(self):
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        loops = tuple(tuple(int(i) for i in lp) for lp in self.loops)
        object.__setattr__(self, "loops", loops)
        if self.faces is None:
            faces = tuple((i,) for i in range(len(loops)))
        else:
            faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        if self.path is not None:
            object.__setattr__(self, "path", tuple(int(i) for i in self.path))
        seen = set()
        for lp in loops:
            if not lp:
                raise DiagramError("empty loop")
            for j, e in enumerate(lp):
                if e in seen:
                    raise DiagramError("edge %d used twice" % e)
                seen.add(e)
                nxt = lp[(j + 1) % len(lp)]
                if edges[e].end != edges[nxt].start:
                    raise DiagramError("loop is not closed at edge %d" % e)
        if self.path is not None:
            for a, b in zip(self.path, self.path[1:]):
                if edges[a].end != edges[b].start:
                    raise DiagramError("path is not connected at edge %d" % a)
        in_face = [i for f in faces for i in f]
        if sorted(in_face) != list(range(len(loops))):
            raise DiagramError("every loop must belong to exactly one face")

    @property
    def vertices(self):
        out = []
        seen = set()
        for e in self.edges:
            for p in (e.start, e.end):
                if p not in seen:
                    seen.add(p)
                    out.append(p)
        return tuple(out)

    @property
    def folds(self):
        return tuple((i, p) for i, e in enumerate(self.edges) for p in e.fold_points)

    @property
    def boundary_loops(self):
        return self.loops

    @property
    def end_cycles(self):
        return tuple(
            i for i, lp in enumerate(self.loops)
            if all(self.edges[e].kind == END for e in lp)
        )

    @property
    def orientation(self):
        return tuple(signed_area2(self.loop_points(i)) > 0 for i in range(len(self.loops)))

    def loop_points(self, i):
        pts = []
        for e in self.loops[i]:
            pts.extend(self.edges[e].chain[:-1])
        return pts

    def loop_chains(self, i):
        return [self.edges[e].chain for e in self.loops[i]]


@dataclass(frozen=True)
class Gluing:
    """The map sends the source edge onto the target edge, reversing direction."""

    source: int
    target: int
    map: IntegralAffineMap
    seam: bool = False


@dataclass(frozen=True)
class GluingDiagram:
    domain: PolygonalDiagram
    gluings: tuple = ()
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gluings", tuple(self.gluings))
        labels = self.labels
        if isinstance(labels, dict):
            labels = tuple(sorted(labels.items()))
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def label_map(self):
        return dict(self.labels)

    @property
    def edges(self):
        return self.domain.edges

    def partner_table(self):
        table = {}
        for g in self.gluings:
            for e in (g.source, g.target):
                if e in table:
                    raise DiagramError("edge %d appears in more than one gluing" % e)
            table[g.source] = (g.target, g.map)
            table[g.target] = (g.source, g.map.inverse())
        return table


def as_gluing(d):
    return d if isinstance(d, GluingDiagram) else GluingDiagram(d)


# ---------------------------------------------------------------- loop walks


def _walk_steps(chains, closed, strict=True):
    """Turn and fold steps of a walk given by edge chains."""
    steps = []
    n = len(chains)
    for i, ch in enumerate(chains):
        dirs = [sub(ch[j + 1], ch[j]) for j in range(len(ch) - 1)]
        for a, b in zip(dirs, dirs[1:]):
            steps.append(("fold", a, b))
        if not closed and i == n - 1:
            break
        nxt = chains[(i + 1) % n]
        a = dirs[-1]
        b = sub(nxt[1], nxt[0])
        if n == 1:
            if not _same_dir(a, b):
                raise DiagramError("single-edge loop must close without a corner")
            continue
        c = cross(a, b)
        if c > 0:
            steps.append(("turn", a, b))
        elif c == 0 and dot(a, b) > 0 and not strict:
            continue
        else:
            raise DiagramError("non-CCW vertex turn")
    return steps


def _rotation(steps):
    w = 0
    for kind, a, b in steps:
        pa, pb = pseudo_angle(a), pseudo_angle(b)
        if kind == "turn":
            if pb <= pa:
                w += 1
        elif pb > pa:
            w -= 1
    return w


def _resolve_loop(loop, index):
    if isinstance(loop, GluingDiagram):
        loop = loop.domain
    if isinstance(loop, PolygonalDiagram):
        if not loop.loops:
            raise DiagramError("total turning needs a closed loop, not an open path")
        return loop.loop_chains(index)
    return [tuple(pt(*p) for p in ch) for ch in loop]


def total_turning(loop, index=0):
    """k' with T' = k' pi for a closed loop whose vertex turns are CCW."""
    chains = _resolve_loop(loop, index)
    return 2 * _rotation(_walk_steps(chains, True))


def fold_count_of(chains):
    return sum(len(ch) - 2 for ch in chains)


def _walk_chains(loop, index):
    if isinstance(loop, GluingDiagram):
        loop = loop.domain
    if isinstance(loop, PolygonalDiagram):
        if loop.loops:
            return loop.loop_chains(index), True
        if loop.path is not None:
            return [loop.edges[e].chain for e in loop.path], False
        raise DiagramError("diagram has neither loop nor path")
    return [tuple(pt(*p) for p in ch) for ch in loop], True


def is_embedded_with_folds(loop, index=0):
    """Exact check that the only double points come from folds and shared vertices."""
    chains, closed = _walk_chains(loop, index)
    return chains_embedded(chains, closed)


def _integral(chains):
    # a common positive scale makes every coordinate an integer
    den = 1
    for ch in chains:
        for x, y in ch:
            den = lcm(den, Fraction(x).denominator, Fraction(y).denominator)
    return [[(int(x * den), int(y * den)) for x, y in ch] for ch in chains]


def chains_embedded(chains, closed=True):
    chains = _integral(chains)
    segs = []
    for ei, ch in enumerate(chains):
        for j in range(len(ch) - 1):
            segs.append((ch[j], ch[j + 1], ei, j == 0, j == len(ch) - 2))
    boxes = [
        (min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1]))
        for a, b, _, _, _ in segs
    ]
    m = len(segs)
    ne = len(chains)

    def members(k, p):
        a, b, ei, first, last = segs[k]
        out = {ei}
        if p == a and first and (closed or ei > 0):
            out.add((ei - 1) % ne)
        if p == b and last and (closed or ei < ne - 1):
            out.add((ei + 1) % ne)
        return out

    def joint(k, l):
        # shared parameter point of consecutive segments k -> l
        if l == k + 1 or (closed and k == m - 1 and l == 0):
            return segs[k][1]
        return None

    cands = [set() for _ in range(m)]
    for k in range(m):
        cands[k].add(segs[k][0])
        cands[k].add(segs[k][1])
    for k in range(m):
        bk = boxes[k]
        for l in range(k + 1, m):
            bl = boxes[l]
            if bk[1] < bl[0] or bl[1] < bk[0] or bk[3] < bl[2] or bl[3] < bk[2]:
                continue
            a, b = segs[k][0], segs[k][1]
            c, d = segs[l][0], segs[l][1]
            hit = segment_intersection(a, b, c, d)
            if hit is None:
                continue
            j1, j2 = joint(k, l), joint(l, k)
            if hit[0] == "point":
                p = hit[1]
                cands[k].add(p)
                cands[l].add(p)
                if p == j1 or p == j2:
                    continue
                if not (members(k, p) & members(l, p)):
                    return False
            else:
                for q in hit[1:]:
                    cands[k].add(q)
                    cands[l].add(q)
                if segs[k][2] != segs[l][2]:
                    return False
    # multiplicities at candidate points and between them
    tests = set()
    for k, (a, b, _, _, _) in enumerate(segs):
        tests |= cands[k]
        on = sorted({param_on(p, a, b) for p in cands[k]})
        for t0, t1 in zip(on, on[1:]):
            tests.add(add(a, scale(sub(b, a), (t0 + t1) / 2)))
    njoint = defaultdict(int)
    for k in range(m if closed else m - 1):
        njoint[segs[k][1]] += 1
    for p in tests:
        cover = 0
        for k, (a, b, _, _, _) in enumerate(segs):
            bx = boxes[k]
            if bx[0] <= p[0] <= bx[1] and bx[2] <= p[1] <= bx[3] and on_segment(p, a, b):
                cover += 1
        if cover - njoint.get(p, 0) > 2:
            return False
    return True


def loop_slopes(loop, index=0):
    chains, _ = _walk_chains(loop, index)
    return [slope_of_vector(sub(ch[1], ch[0])) for ch in chains]


def realizes(loop, slopes, index=0):
    got = loop_slopes(loop, index)
    want = list(as_slopes(slopes))
    if len(got) != len(want):
        return False
    n = len(want)
    return any(got[i:] + got[:i] == want for i in range(n))


# ------------------------------------------------------- boundary tracing


@dataclass
class BoundaryComponent:
    kind: str
    pieces: list
    edges: list = field(default_factory=list)  # developed chains, one per edge
    slopes: list = field(default_factory=list)
    fold_points: list = field(default_factory=list)  # (domain edge, point)
    vertex_dets: list = field(default_factory=list)
    bad_turns: int = 0
    holonomy: tuple = IDENTITY

    @property
    def fold_count(self):
        return len(self.fold_points)

    @property
    def turning(self):
        if self.holonomy != IDENTITY:
            return None
        if len(self.edges) == 1:
            return -self.fold_count
        steps = []
        n = len(self.edges)
        for i, ch in enumerate(self.edges):
            dirs = [sub(ch[j + 1], ch[j]) for j in range(len(ch) - 1)]
            for a, b in zip(dirs, dirs[1:]):
                steps.append(("fold", a, b))
            if n > 1:
                nxt = self.edges[(i + 1) % n]
                steps.append(("turn", dirs[-1], sub(nxt[1], nxt[0])))
        return 2 * _rotation(steps)

    def slope_list(self):
        return CyclicSlopeList(self.slopes)


def _loop_index(dom):
    where = {}
    for li, lp in enumerate(dom.loops):
        for j, e in enumerate(lp):
            where[e] = (li, j)
    return where


def _next_in_loop(dom, where, e):
    li, j = where[e]
    lp = dom.loops[li]
    return lp[(j + 1) % len(lp)]


def _prev_in_loop(dom, where, e):
    li, j = where[e]
    lp = dom.loops[li]
    return lp[(j - 1) % len(lp)]


def _step(dom, where, e, o):
    return _next_in_loop(dom, where, e) if o > 0 else _prev_in_loop(dom, where, e)


def trace_boundaries(d):
    """Boundary and end components traced through the gluings.

    A gluing with an orientation-reversing map flips the direction in which
    the loops of the far face are walked.
    """
    d = as_gluing(d)
    dom = d.domain
    where = _loop_index(dom)
    partner = d.partner_table()
    free = [i for i, e in enumerate(dom.edges) if i in where and i not in partner]
    seen = set()
    comps = []
    limit = 4 * len(dom.edges) + 8
    for start in free:
        if start in seen:
            continue
        pieces = []
        lin = IDENTITY
        cur, o = start, 1
        while True:
            seen.add(cur)
            pieces.append((cur, lin, o))
            n = _step(dom, where, cur, o)
            steps = 0
            while n in partner:
                other, f = partner[n]
                lin = mat_mul(lin, mat_inv(f.linear))
                if f.det < 0:
                    o = -o
                n = _step(dom, where, other, o)
                steps += 1
                if steps > limit:
                    raise DiagramError("inconsistent gluing")
            cur = n
            if cur == start and o == 1:
                break
            if cur in seen or len(pieces) > limit:
                raise DiagramError("inconsistent gluing")
        comps.append(_assemble_component(d, pieces, lin))
    return comps


def _join(a, b):
    return "straight" if _same_dir(a, b) else "fold" if _opposite(a, b) else "vertex"


def _assemble_component(d, pieces, holonomy):
    dom = d.domain
    kinds = {dom.edges[e].kind for e, _, _ in pieces}
    kind = kinds.pop() if len(kinds) == 1 else "mixed"
    comp = BoundaryComponent(kind=kind, pieces=[e for e, _, _ in pieces], holonomy=holonomy)
    # developed chains in walking order; the piece after the last one is
    # the first piece carried once around by the holonomy
    dev = []
    for e, lin, o in pieces:
        ch = dom.edges[e].chain
        if o < 0:
            ch = tuple(reversed(ch))
        f = IntegralAffineMap(lin)
        dev.append((e, [apply_affine(f, p) for p in ch], ch))
    n = len(dev)
    hol = IntegralAffineMap(holonomy)

    def nxt_dir(i):
        if i + 1 < n:
            ch = dev[i + 1][1]
            return sub(ch[1], ch[0])
        ch = dev[0][1]
        return apply_affine(hol, sub(ch[1], ch[0]), as_vector=True)

    joins = []
    for i in range(n):
        a = sub(dev[i][1][-1], dev[i][1][-2])
        joins.append(_join(a, nxt_dir(i)))
    for e, dch, ch in dev:
        for p in ch[1:-1]:
            comp.fold_points.append((e, p))
    for i in range(n):
        if joins[i] == "fold":
            comp.fold_points.append((dev[i][0], dev[i][2][-1]))
    if "vertex" not in joins:
        first = 0
    else:
        first = (joins.index("vertex") + 1) % n
    cur = None
    edges = []
    for step in range(n):
        idx = (first + step) % n
        pts = [tuple(p) for p in dev[idx][1]]
        if first + step >= n:
            pts = [apply_affine(hol, p, as_vector=True) for p in pts]
        if cur is None:
            cur = pts
        else:
            shift = sub(cur[-1], pts[0])
            pts = [add(p, shift) for p in pts]
            prev_join = joins[(idx - 1) % n]
            if prev_join == "straight":
                cur = _merge_straight(cur[:-1] + pts[1:])
            elif prev_join == "fold":
                cur = cur + pts[1:]
            else:
                edges.append(cur)
                cur = pts
        if joins[idx] == "vertex":
            edges.append(cur)
            cur = None
    if cur is not None:
        edges.append(cur)
    if "vertex" not in joins:
        edges = [_close_single(edges[0])]
    comp.edges = edges
    comp.slopes = [slope_of_vector(sub(ch[1], ch[0])) for ch in edges]
    if "vertex" in joins:
        # edges[i] ends at the vertex where edges[i + 1] starts; the last
        # vertex is seen through the holonomy
        m = len(edges)
        for i in range(m):
            a = direction(sub(edges[i][-1], edges[i][-2]))
            if i + 1 < m:
                b = sub(edges[i + 1][1], edges[i + 1][0])
            else:
                b = apply_affine(hol, sub(edges[0][1], edges[0][0]), as_vector=True)
            b = direction(b)
            comp.vertex_dets.append(lattice_det(a, b))
            if lattice_det(a, b) <= 0:
                comp.bad_turns += 1
    return comp


def _merge_straight(pts):
    out = [pts[0]]
    for p in pts[1:]:
        if len(out) >= 2 and _same_dir(sub(out[-1], out[-2]), sub(p, out[-1])):
            out[-1] = p
        else:
            out.append(p)
    return out


def _close_single(ch):
    """A closed single edge: drop a straight closing joint if present."""
    return _merge_straight(list(ch))


# ------------------------------------------------------------ validation


@dataclass
class ValidationReport:
    valid: bool
    entries: list
    fold_count: int
    components: list

    def __str__(self):
        head = "valid" if self.valid else "invalid"
        lines = ["%s, %d folds" % (head, self.fold_count)]
        lines += ["  " + e for e in self.entries]
        return "\n".join(lines)


def check_gluings(d):
    """Entries describing gluing defects; empty when all maps are exact bijections."""
    dom = d.domain
    out = []
    used = set()
    for g in d.gluings:
        for e in (g.source, g.target):
            if not 0 <= e < len(dom.edges):
                out.append("gluing refers to missing edge %d" % e)
                return out
            if e in used:
                out.append("edge %d appears in more than one gluing" % e)
            used.add(e)
        s, t = dom.edges[g.source], dom.edges[g.target]
        if len(s.chain) != 2 or len(t.chain) != 2:
            out.append("glued edge %d has folds" % g.source)
            continue
        # orientation-preserving maps reverse the edge, reversing ones keep it
        ends = (t.end, t.start) if g.map.det > 0 else (t.start, t.end)
        if (apply_affine(g.map, s.start), apply_affine(g.map, s.end)) != ends:
            out.append("inconsistent gluing between edges %d and %d" % (g.source, g.target))
    for i, e in enumerate(dom.edges):
        if e.kind == GLUED and i not in used:
            out.append("glued edge %d has no partner" % i)
        if e.kind != GLUED and i in used:
            out.append("edge %d is glued but marked %s" % (i, e.kind))
    return out


def check_faces(d):
    dom = d.domain
    out = []
    for fi, face in enumerate(dom.faces):
        polys = [dom.loop_points(li) for li in face]
        for k, li in enumerate(face):
            area = signed_area2(polys[k])
            if k == 0 and area <= 0:
                out.append("face %d outer loop is not counterclockwise" % fi)
            if k > 0 and area >= 0:
                out.append("face %d hole loop is not clockwise" % fi)
            if not chains_embedded(dom.loop_chains(li), True):
                out.append("face %d loop %d is not embedded" % (fi, li))
        for k in range(len(face)):
            for l in range(k + 1, len(face)):
                if _loops_touch(dom, face[k], face[l]):
                    out.append("face %d loops %d and %d intersect" % (fi, face[k], face[l]))
        for k in range(1, len(face)):
            p = polys[k][0]
            if point_in_polygon(p, polys[0]) != 1:
                out.append("face %d hole %d lies outside the outer loop" % (fi, face[k]))
            for l in range(1, len(face)):
                if l != k and point_in_polygon(p, polys[l]) != 0:
                    out.append("face %d holes %d and %d are nested" % (fi, face[k], face[l]))
    return out


def _loops_touch(dom, la, lb):
    sa = [s for e in dom.loops[la] for s in dom.edges[e].segments]
    sb = [s for e in dom.loops[lb] for s in dom.edges[e].segments]
    return any(segment_intersection(a, b, c, e) for a, b in sa for c, e in sb)


def validate_base(d):
    d = as_gluing(d)
    entries = check_gluings(d)
    entries += check_faces(d)
    comps = []
    folds = 0
    if not any(e.startswith("inconsistent") or "more than one" in e for e in entries):
        try:
            comps = trace_boundaries(d)
        except DiagramError as exc:
            entries.append(str(exc))
    for ci, c in enumerate(comps):
        if c.kind == "mixed":
            entries.append("component %d mixes end and boundary edges" % ci)
        if c.kind == END:
            continue
        folds += c.fold_count
        if any(abs(x) != 1 for x in c.vertex_dets):
            entries.append("non-unimodular vertex on component %d" % ci)
        if c.bad_turns:
            entries.append("non-CCW vertex turn on component %d" % ci)
    return ValidationReport(not entries, entries, folds, comps)


def boundary_lists(d):
    """Slope lists of the affine boundary components (end cycles excluded)."""
    return [c.slope_list() for c in trace_boundaries(d) if c.kind == BOUNDARY]


# ------------------------------------------------- identification complex


class _DSU:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


@dataclass(frozen=True)
class ComplexSummary:
    vertices: int
    edges: int
    faces_euler: int
    euler: int
    boundary_components: int
    end_components: int
    genus: int
    orientable: bool = True


def identification_complex(d):
    d = as_gluing(d)
    bad = check_gluings(d)
    if bad:
        raise DiagramError("inconsistent gluing")
    dom = d.domain
    where = _loop_index(dom)
    dsu = _DSU()
    for e in where:
        dsu.find(e)
    for g in d.gluings:
        # vertices are named by the edge starting there
        s_end = _next_in_loop(dom, where, g.source)
        t_end = _next_in_loop(dom, where, g.target)
        if g.map.det > 0:
            dsu.union(g.source, t_end)
            dsu.union(s_end, g.target)
        else:
            dsu.union(g.source, g.target)
            dsu.union(s_end, t_end)
    nv = len({dsu.find(e) for e in where})
    ne = len(where) - len(d.gluings)
    nf = sum(1 - (len(f) - 1) for f in dom.faces)
    chi = nv - ne + nf
    comps = trace_boundaries(d)
    b = len(comps)
    ends = sum(1 for c in comps if c.kind == END)
    if _orientable(d):
        genus = (2 - chi - b) // 2
    else:
        genus = 2 - chi - b
    return ComplexSummary(nv, ne, nf, chi, b - ends, ends, genus, _orientable(d))


def _orientable(d):
    """True if the faces can be oriented compatibly across every gluing."""
    fof = _face_of_edges(d.domain)
    sign = {}
    adj = defaultdict(list)
    for g in d.gluings:
        a, b = fof[g.source], fof[g.target]
        adj[a].append((b, g.map.det))
        adj[b].append((a, g.map.det))
    for f0 in range(len(d.domain.faces)):
        if f0 in sign:
            continue
        sign[f0] = 1
        stack = [f0]
        while stack:
            f = stack.pop()
            for h, det in adj[f]:
                want = sign[f] * det
                if h not in sign:
                    sign[h] = want
                    stack.append(h)
                elif sign[h] != want:
                    return False
    return True


# ------------------------------------------------------------- monodromy


@dataclass(frozen=True)
class MonodromyReport:
    generators: tuple
    gluing_of_generator: tuple
    trivial: bool


def _face_of_edges(dom):
    out = {}
    for fi, f in enumerate(dom.faces):
        for li in f:
            for e in dom.loops[li]:
                out[e] = fi
    return out


def monodromy_of_gluing(d):
    d = as_gluing(d)
    bad = check_gluings(d)
    if bad:
        raise DiagramError("inconsistent gluing")
    dom = d.domain
    nf = len(dom.faces)
    if nf == 0:
        return MonodromyReport((), (), True)
    fof = _face_of_edges(dom)
    dsu = _DSU()
    tree = set()
    # seams first so that generators sit on genuine gluings
    order = sorted(range(len(d.gluings)), key=lambda i: (not d.gluings[i].seam, i))
    for i in order:
        g = d.gluings[i]
        a, b = fof[g.source], fof[g.target]
        if dsu.find(a) != dsu.find(b):
            dsu.union(a, b)
            tree.add(i)
    if len({dsu.find(f) for f in range(nf)}) != 1:
        raise DiagramError("gluing graph is not connected")
    adj = defaultdict(list)
    for i in tree:
        g = d.gluings[i]
        a, b = fof[g.source], fof[g.target]
        adj[a].append((b, g.map.linear))
        adj[b].append((a, mat_inv(g.map.linear)))
    chart = {0: IDENTITY}
    stack = [0]
    while stack:
        f = stack.pop()
        for h, m in adj[f]:
            if h not in chart:
                chart[h] = mat_mul(m, chart[f])
                stack.append(h)
    gens = []
    which = []
    for i, g in enumerate(d.gluings):
        if i in tree:
            continue
        a, b = fof[g.source], fof[g.target]
        m = mat_mul(mat_inv(chart[b]), mat_mul(g.map.linear, chart[a]))
        gens.append(m)
        which.append(i)
    return MonodromyReport(tuple(gens), tuple(which), all(m == IDENTITY for m in gens))


# ---------------------------------------------------------- affine images


def transform_diagram(d, f):
    """Image of a diagram under an integral affine map, keeping faces CCW."""
    d = as_gluing(d)
    dom = d.domain
    flip = f.det < 0
    edges = []
    for e in dom.edges:
        m = e.mapped(f)
        edges.append(m.reversed() if flip else m)
    if flip:
        loops = tuple(tuple(reversed(lp)) for lp in dom.loops)
        path = tuple(reversed(dom.path)) if dom.path is not None else None
    else:
        loops, path = dom.loops, dom.path
    finv = f.inverse()
    gluings = tuple(
        Gluing(g.source, g.target, f.compose(g.map).compose(finv), g.seam)
        for g in d.gluings
    )
    newdom = PolygonalDiagram(tuple(edges), loops, dom.faces, path)
    return GluingDiagram(newdom, gluings, d.labels)


def transform_polygonal(dom, f):
    return transform_diagram(GluingDiagram(dom), f).domain
