"""Constructive realizations of slope-list data as developed diagrams."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

from .decompose import IDENTITY_MAP, strictify
from .diagram import (
    BOUNDARY,
    END,
    GLUED,
    DiagramError,
    Edge,
    Gluing,
    GluingDiagram,
    PolygonalDiagram,
    as_gluing,
    chains_embedded,
    identification_complex,
    monodromy_of_gluing,
    realizes,
    transform_diagram,
    transform_polygonal,
    validate_base,
)
from .geometry import (
    add,
    cross,
    dot,
    param_on,
    point_in_polygon,
    pseudo_angle,
    pt,
    scale,
    segment_intersection,
    sub,
)
from .lattice_core import (
    IntegralAffineMap,
    Slope,
    angle_key,
    apply_affine,
    direction_vector,
    mat_det,
    mat_inv,
    mat_vec,
    reduce_slope,
    slope_of_vector,
)
from .orbit_space import (
    CyclicSlopeList,
    as_slopes,
    is_right_polygonal,
    positive_turning,
)

ZERO = Slope(0, 1)
INF = Slope(1, 0)


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class BuildParams:
    epsilon: Fraction = Fraction(1)
    delta: Fraction = None
    lam: Fraction = Fraction(1, 8)
    max_retries: int = 20

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
            if not 0 < self.delta < self.epsilon:
                raise BuildError("need 0 < delta < epsilon")
        if self.epsilon <= 0 or self.lam <= 0 or self.max_retries < 1:
            raise BuildError("build parameters must be positive")

    def start(self, n):
        d = self.delta if self.delta is not None else self.epsilon / (4 * max(n, 1))
        return self.epsilon, d

    def schedule(self, n):
        """Successive (epsilon, delta) pairs: halve delta, then epsilon, alternately."""
        eps, d = self.start(n)
        yield eps, d
        for i in range(self.max_retries):
            if i % 2 == 0:
                d = d / 2
            else:
                eps = eps / 2
                d = min(d, eps / 4)
            yield eps, d


# ------------------------------------------------------------ frames


def vec(s):
    v = direction_vector(s)
    return (v.x, v.y)


def ccw_orient(u, s):
    """The orientation of slope s reached from direction u by a CCW turn in (0, pi)."""
    w = vec(s)
    c = cross(u, w)
    if c == 0:
        raise BuildError("consecutive edges have the same slope")
    return w if c > 0 else (-w[0], -w[1])


def frame(s1, s2):
    """Matrix M in SL(2, Z) with columns d1, d2 where cross(d1, d2) = 1."""
    d1 = vec(s1)
    d2 = vec(s2)
    c = cross(d1, d2)
    if abs(c) != 1:
        raise BuildError("non-unimodular pair (%s, %s)" % (s1, s2))
    if c < 0:
        d2 = (-d2[0], -d2[1])
    return ((d1[0], d2[0]), (d1[1], d2[1]))


def map_slope(m, s):
    return slope_of_vector(mat_vec(m, vec(s)))


def map_slopes(m, slopes):
    return [map_slope(m, s) for s in slopes]


def check_right_polygonal(slopes, cyclic):
    if not is_right_polygonal(list(slopes), cyclic):
        raise BuildError("non-right-polygonal input")


# ------------------------------------------------------------- paths


def _tail(slopes, u, eps, delta):
    """Chains for edges of the given slopes, starting at the origin after direction u.

    Returns (chains, end point, final direction, fold count added to the
    edge preceding the tail).
    """
    cur = (Fraction(0), Fraction(0))
    chains = []
    pre_folds = []
    for s in slopes:
        w = ccw_orient(u, s)
        if w[0] < 0:
            back = (-u[0], -u[1])
            cur = add(cur, scale(back, delta))
            if chains:
                chains[-1].append(cur)
            else:
                pre_folds.append(cur)
            u = back
            w = (-w[0], -w[1])
        nxt = add(cur, scale(w, eps))
        chains.append([cur, nxt])
        cur = nxt
        u = w
    return chains, cur, u, pre_folds


def _path_chains(slopes, target, eps, delta, allow_drop=False):
    """Chains of the folded path for slopes (0, s2, ...) ending at target.

    The second edge has direction w2 = (c, 1); it rises, folds and falls
    back by delta before the tail starts.  With allow_drop the second edge
    may fall back below the first edge's line.
    """
    x0, y0 = Fraction(target[0]), Fraction(target[1])
    w2 = ccw_orient((1, 0), slopes[1])
    if w2[1] != 1:
        raise BuildError("non-unimodular pair (%s, %s)" % (slopes[0], slopes[1]))
    if len(slopes) == 2:
        chains, end, pre = [], (Fraction(0), Fraction(0)), []
    else:
        chains, end, _, pre = _tail(slopes[2:], (-w2[0], -w2[1]), eps, delta)
    h = y0 - end[1]
    a = x0 - end[0] - h * w2[0]
    if a <= 0:
        return None
    if h > 0:
        b = h + delta
    elif allow_drop:
        b = delta
    else:
        return None
    base = pt(a, 0)
    start = add(base, scale(w2, h))
    e2 = [base, add(base, scale(w2, b)), start] + [add(p, start) for p in pre]
    out = [[pt(0, 0), base], e2]
    for ch in chains:
        out.append([add(p, start) for p in ch])
    return out


def _path_ok(chains, slopes):
    return chains is not None and chains_embedded(chains, closed=False)


def build_path(slopes, target, params=None):
    """Embedded right polygonal path from the origin to target realizing the list."""
    params = params or BuildParams()
    slopes = list(as_slopes(slopes))
    if len(slopes) < 2 or slopes[0] != ZERO or slopes[1] != INF:
        raise BuildError("path list must start with slopes 0, inf")
    check_right_polygonal(slopes, False)
    x0, y0 = Fraction(target[0]), Fraction(target[1])
    if not (x0 > 0 and y0 > 0):
        raise BuildError("target not in open quadrant")
    tries = []
    if params.delta is not None:
        # explicit parameters are honored when they already give an embedded path
        tries.append(params.start(len(slopes)))
    for eps, delta in params.schedule(len(slopes)):
        eps_run = min(eps, params.lam * min(x0, y0) / len(slopes))
        tries.append((eps_run, min(delta, eps_run / 4)))
    for eps_run, delta_run in tries:
        chains = _path_chains(slopes, (x0, y0), eps_run, delta_run)
        if _path_ok(chains, slopes):
            edges = tuple(Edge(ch) for ch in chains)
            return PolygonalDiagram(edges, path=tuple(range(len(edges))))
    raise BuildError("retry budget exhausted")


# ------------------------------------------------------ convex polygons


def convex_lengths(dirs, offset=(0, 0), minimum=1):
    """Exact lengths l_i >= minimum with sum l_i w_i = -offset and least total.

    The directions must positively span the plane.  Vertices of the
    feasible set have at most two lengths above the minimum, so the optimum
    is found by enumerating basic pairs; ties go to the lexicographically
    first pair.
    """
    n = len(dirs)
    minimum = Fraction(minimum)
    c = (
        -Fraction(offset[0]) - minimum * sum(w[0] for w in dirs),
        -Fraction(offset[1]) - minimum * sum(w[1] for w in dirs),
    )
    if c == (0, 0):
        return [minimum] * n
    best = None
    for i in range(n):
        wi = dirs[i]
        if cross(wi, c) == 0 and dot(wi, c) > 0:
            t = (c[0] / wi[0]) if wi[0] != 0 else (c[1] / wi[1])
            cand = (t, (i,), {i: t})
            if best is None or cand[:2] < best[:2]:
                best = cand
    for i, j in combinations(range(n), 2):
        wi, wj = dirs[i], dirs[j]
        det = cross(wi, wj)
        if det == 0:
            continue
        ui = Fraction(cross(c, wj)) / det
        uj = Fraction(cross(wi, c)) / det
        if ui < 0 or uj < 0:
            continue
        cand = (ui + uj, (i, j), {i: ui, j: uj})
        if best is None or cand[:2] < best[:2]:
            best = cand
    if best is None:
        raise BuildError("directions do not close up into a convex polygon")
    out = [minimum] * n
    for k, u in best[2].items():
        out[k] += u
    return out


def oriented_dirs(slopes, first=None):
    """CCW-consecutive orientations of a cyclic list, starting from a vector."""
    u = first if first is not None else vec(slopes[0])
    dirs = [u]
    for s in slopes[1:]:
        u = ccw_orient(u, s)
        dirs.append(u)
    return dirs


def convex_polygon(slopes, first=None):
    """Vertices of a convex CCW polygon with the given cyclic slopes (turning 2)."""
    dirs = oriented_dirs(slopes, first)
    ls = convex_lengths(dirs)
    pts = [pt(0, 0)]
    for w, l in zip(dirs, ls):
        pts.append(add(pts[-1], scale(w, l)))
    if pts[-1] != pts[0]:
        raise BuildError("convex polygon failed to close")
    return pts[:-1], dirs, ls


# ------------------------------------------------------------- loops


def _free_path(slopes, eps, delta):
    """Folded path for (0, inf, ...) with a = b = eps and no target."""
    chains, end, u, pre = _tail(slopes[2:], (0, -1), eps, delta)
    if pre:
        raise BuildError("unexpected fold on the second edge")
    start = pt(eps, eps - delta)
    out = [[pt(0, 0), pt(eps, 0)], [pt(eps, 0), pt(eps, eps), start]]
    for ch in chains:
        out.append([add(p, start) for p in ch])
    if len(slopes) == 2:
        u = (0, -1)
    return out, u


def _loop_candidate(slopes, eps, delta, size):
    """Path-then-convex loop for a list with slopes[0] = 0, slopes[1] = inf.

    The first p - 1 edges come from a path; the rest is a convex polygon of
    turning 2 whose edges have length at least size.
    """
    n = len(slopes)
    p = None
    for q in range(1, n):
        if slopes[q] == slopes[0]:
            continue
        if positive_turning([slopes[0]] + slopes[q:]) == 2:
            p = q
            break
    if p is None:
        return None
    if p == 1:
        dirs = oriented_dirs(slopes, (1, 0))
        ls = convex_lengths(dirs, minimum=size)
        verts = [pt(0, 0)]
        for w, l in zip(dirs, ls):
            verts.append(add(verts[-1], scale(w, l)))
        return [[verts[i], verts[i + 1]] for i in range(n)]
    chains, u = _free_path(slopes[: p + 1], eps, delta)
    wp = ccw_orient((1, 0), slopes[p])
    last = chains[-1]
    if u != wp:
        # the path leaves along -wp: fold the last edge back
        if u != (-wp[0], -wp[1]):
            return None
    x = last[-1]
    dirs = oriented_dirs([slopes[p]] + slopes[p + 1 :] + [slopes[0]], wp)
    if dirs[-1] != (1, 0):
        return None
    ls = convex_lengths(dirs, offset=x, minimum=size)
    # e_p continues past the path end; e1 arrives at the origin
    cur = add(x, scale(wp, ls[0]))
    ep = last + [cur]
    if u == wp:
        ep = last[:-1] + [cur]
    out = [list(c) for c in chains[1:-1]]
    out.append(ep)
    for w, l in zip(dirs[1:-1], ls[1:-1]):
        nxt = add(cur, scale(w, l))
        out.append([cur, nxt])
        cur = nxt
    e1 = [cur, chains[0][1]]
    return [e1] + out


def _loop_in_frame(slopes, params):
    n = len(slopes)
    # candidates are homothetic in eps once delta / eps and size / eps are
    # fixed, so a repeated ratio would repeat an earlier embeddedness verdict
    seen = set()
    for eps, delta in params.schedule(n):
        for k in range(3):
            if (delta / eps, k) in seen:
                continue
            seen.add((delta / eps, k))
            size = Fraction(8 * n * (k + 1)) * eps
            chains = _loop_candidate(slopes, eps, delta, size)
            if chains is None:
                return None
            try:
                ok = chains_embedded(chains, True)
                edges = tuple(Edge(c) for c in chains)
                dom = PolygonalDiagram(edges, (tuple(range(len(edges))),))
            except DiagramError:
                ok = False
            if ok:
                return dom
    return None


def build_loop(slopes, params=None):
    """Embedded CCW right polygonal loop with folds realizing a cyclic list."""
    params = params or BuildParams()
    L = list(as_slopes(slopes))
    check_right_polygonal(L, True)
    k = positive_turning(L)
    if k < 2:
        raise BuildError("turning below 2π")
    if k == 2:
        # no folds needed: the least convex lattice polygon
        pts, _, _ = convex_polygon(L)
        m = len(pts)
        edges = tuple(Edge((pts[i], pts[(i + 1) % m])) for i in range(m))
        dom = PolygonalDiagram(edges, (tuple(range(m)),))
        if realizes(dom, L):
            return dom
    n = len(L)
    attempts = []
    for r in range(n):
        attempts.append((L[r:] + L[:r], False))
    flipped = [reduce_slope(-s.num, s.den) if s.den else s for s in reversed(L)]
    for r in range(n):
        attempts.append((flipped[r:] + flipped[:r], True))
    for rot, flip in attempts:
        m = frame(rot[0], rot[1])
        a = mat_inv(m)
        local = map_slopes(a, rot)
        dom = _loop_in_frame(local, params)
        if dom is None:
            continue
        dom = transform_polygonal(dom, IntegralAffineMap(m))
        if flip:
            dom = transform_polygonal(dom, IntegralAffineMap(((-1, 0), (0, 1))))
        if realizes(dom, L):
            return dom
    raise BuildError("retry budget exhausted")


# ------------------------------------------------------------- plugs
#
# A 1-plug is the region outside a hole whose clockwise boundary realizes
# the list; the outer end is a large square of END edges.  Hole loops come
# from one of several recipes, each verified by the face decomposition and
# validate_base before it is accepted.


def _pa(u):
    from .geometry import pseudo_angle

    return pseudo_angle(u)


def _star_holes(slopes, through=None):
    """Hole loops made of slits radiating from a hub.

    Branch i is a slit of slope s_i out and back; the hub turns are
    counterclockwise.  With through = i, branch i continues straight across
    the hub to a second tip, which adds one fold.
    """
    n = len(slopes)
    out = []
    for first in (vec(slopes[0]), tuple(-x for x in vec(slopes[0]))):
        dirs = [first]

        def arriving(i):
            v = dirs[i]
            return v if i == through else (-v[0], -v[1])

        for i, s in enumerate(slopes[1:]):
            dirs.append(ccw_orient(arriving(i), s))
        if ccw_orient(arriving(n - 1), slopes[0]) != first:
            continue
        order = []
        for i, v in enumerate(dirs):
            order.append(v)
            if i == through:
                order.append((-v[0], -v[1]))
        total = sum((_pa(order[i]) - _pa(order[(i + 1) % len(order)])) % 4 for i in range(len(order)))
        if total != 4:
            continue
        if through is not None:
            # nothing may sit strictly clockwise between v and -v
            v = dirs[through]
            if any(cross(v, w) < 0 for w in dirs):
                continue
        hub = pt(0, 0)
        chains = []
        for i, v in enumerate(dirs):
            tip = scale(v, 2)
            if i == through:
                chains.append([hub, tip, scale(v, -2), hub])
            else:
                chains.append([hub, tip, hub])
        out.append(chains)
    return out


def _single_slit(s):
    v = vec(s)
    return [[pt(0, 0), pt(*v), pt(-v[0], -v[1]), pt(0, 0)]]


def _comb_hole(m):
    """Hole for (0, inf) repeated m times: a slit with m spikes on its top side."""
    chains = [[pt(m, 0), pt(m + 1, 0), pt(0, 0), pt(1, 0)]]
    for i in range(1, m + 1):
        chains.append([pt(i, 0), pt(i, 1), pt(i, 0)])
        if i < m:
            chains.append([pt(i, 0), pt(i + 1, 0)])
    return chains


def _mountain_hole(slopes, eps, delta):
    """The mountain recipe for a list with s1 = 0, s2 = inf (normalized frame)."""
    tail, end, u, pre = _tail(list(slopes[2:]) + [ZERO], (0, -1), eps, delta)
    if pre or u != (1, 0) or len(tail[-1]) != 2:
        return None
    en = tail[-2] if len(tail) >= 2 else None
    if en is None or sub(en[-1], en[-2])[1] >= 0:
        return None
    h = -end[1]
    if h <= 0:
        return None
    a = eps
    start = pt(a, h)
    tail = [[add(p, start) for p in ch] for ch in tail]
    body = [p for ch in tail[:-1] for p in ch[:-1]]
    if any(p[1] <= 0 for p in body) or any(p[0] <= a for p in body[1:]):
        return None
    p_last = tail[-1][0]
    x_end = tail[-1][1]
    e1 = [p_last, x_end, pt(0, 0), pt(a, 0)]
    e2 = [pt(a, 0), pt(a, h + delta), start]
    return [e1, e2] + tail[:-1]


def _square_around(chains, margin):
    xs = [p[0] for ch in chains for p in ch]
    ys = [p[1] for ch in chains for p in ch]
    lo = (min(xs) - margin, min(ys) - margin)
    hi = (max(xs) + margin, max(ys) + margin)
    return lo, hi


def _square_chains(lo, hi, start=None):
    corners = [pt(lo[0], lo[1]), pt(hi[0], lo[1]), pt(hi[0], hi[1]), pt(lo[0], hi[1])]
    return [[corners[i], corners[(i + 1) % 4]] for i in range(4)]


def _plug_from_hole(hole, slopes, q):
    """Wrap a hole loop (first chain = first list edge) into a q-plug."""
    lo, hi = _square_around(hole, 4)
    if q == 1:
        sq = _square_chains(lo, hi)
        edges = [Edge(c, END) for c in sq] + [Edge(c, BOUNDARY) for c in hole]
        dom = PolygonalDiagram(
            edges, ((0, 1, 2, 3), tuple(range(4, len(edges)))), ((0, 1),)
        )
        return as_gluing_diagram(dom)
    return _q_sheets(hole, slopes, q, lo, hi)


def as_gluing_diagram(dom, gluings=(), labels=None):
    return GluingDiagram(dom, tuple(gluings), labels or {})


def _ray_exit(c, r, lo, hi):
    """First point where the ray c + t r (t > 0) meets the square boundary."""
    ts = []
    for k, (lo_k, hi_k) in enumerate(zip(lo, hi)):
        if r[k] > 0:
            ts.append((hi_k - c[k]) / r[k])
        elif r[k] < 0:
            ts.append((lo_k - c[k]) / r[k])
    t = min(ts)
    return add(c, scale(r, t))


def _cut_point(hole, lo, hi):
    """A point on the first edge and a ray direction into the region that
    meets the hole only at that point."""
    from .geometry import segment_intersection

    first = hole[0]
    segs = [(a, b) for ch in hole for a, b in zip(ch, ch[1:])]
    for j in range(len(first) - 1):
        a, b = first[j], first[j + 1]
        d = direction(sub(b, a))
        for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4)):
            c = add(a, scale(sub(b, a), t))
            others = [(p, q) for p, q in segs if _on(c, p, q) and (p, q) != (a, b)]
            # a reverse pass of a fold may share the point; the ray leaves
            # on the other side
            if any(cross(sub(q, p), d) != 0 or c in (p, q) for p, q in others):
                continue
            for r in ((-d[1], d[0]), (d[0] - d[1], d[1] + d[0]), (-d[0] - d[1], d[0] - d[1])):
                if cross(d, r) <= 0:
                    continue
                x = _ray_exit(c, r, lo, hi)
                if x in [(lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])]:
                    continue
                ok = True
                for p, q in segs:
                    hit = segment_intersection(c, x, p, q)
                    if hit is None:
                        continue
                    if hit[0] == "point" and hit[1] == c:
                        continue
                    ok = False
                    break
                if ok:
                    return j, c, d, x
    return None


def _on(p, a, b):
    from .geometry import on_segment

    return on_segment(p, a, b)


def direction(u):
    from .geometry import direction as _direction

    return _direction(u)


def _q_sheets(hole, slopes, q, lo, hi):
    found = _cut_point(hole, lo, hi)
    if found is None:
        return None
    j, c, d, x = found
    first = hole[0]
    e1a = first[: j + 1] + [c]
    e1b = [c] + first[j + 1 :]
    sigma = Fraction(1, 4)
    slit = [c, add(c, scale(d, sigma)), sub(c, scale(d, sigma)), c]
    # square loop from the ray exit, counterclockwise
    corners = [pt(lo[0], lo[1]), pt(hi[0], lo[1]), pt(hi[0], hi[1]), pt(lo[0], hi[1])]
    side = None
    for i in range(4):
        if _on(x, corners[i], corners[(i + 1) % 4]):
            side = i
            break
    ring = [x] + [corners[(side + 1 + i) % 4] for i in range(4)] + [x]
    edges = []
    loops = []
    ray_in = []
    ray_out = []
    for sheet in range(q):
        ids = []
        for a, b in zip(ring, ring[1:]):
            ids.append(len(edges))
            edges.append(Edge((a, b), END))
        ray_in.append(len(edges))
        ids.append(len(edges))
        edges.append(Edge((x, c), GLUED))
        if sheet == 0:
            body = [e1b] + [list(ch) for ch in hole[1:]] + [e1a]
            body = [ch for ch in body if len(ch) >= 2 and not (len(ch) == 2 and ch[0] == ch[1])]
        else:
            body = [slit]
        for ch in body:
            ids.append(len(edges))
            edges.append(Edge(ch, BOUNDARY))
        ray_out.append(len(edges))
        ids.append(len(edges))
        edges.append(Edge((c, x), GLUED))
        loops.append(tuple(ids))
    gluings = [Gluing(ray_out[s], ray_in[(s + 1) % q], IDENTITY_MAP) for s in range(q)]
    dom = PolygonalDiagram(tuple(edges), tuple(loops))
    return GluingDiagram(dom, tuple(gluings), {})


def _hole_candidates(slopes, params):
    """Hole loops realizing a cyclic list, in the list's own frame, first
    chain on slopes[0]."""
    n = len(slopes)
    if n == 1:
        yield _single_slit(slopes[0])
        return
    for through in [None] + list(range(n)):
        for chains in _star_holes(slopes, through):
            yield chains
    if n % 2 == 0 and all(slopes[i] == slopes[(i + 2) % n] for i in range(n)):
        m = frame(slopes[0], slopes[1])
        f = IntegralAffineMap(m)
        hole = [[apply_affine(f, p) for p in ch] for ch in _comb_hole(n // 2)]
        hole = _rotate_to(hole, slopes)
        if hole is not None:
            yield hole
    # mountain recipe for each rotation, unreflected and reflected
    refl = ((-1, 0), (0, 1))
    for flip in (False, True):
        base = slopes
        if flip:
            base = [map_slope(refl, s) for s in reversed(slopes)]
        for r in range(n):
            rot = base[r:] + base[:r]
            m = frame(rot[0], rot[1])
            local = map_slopes(mat_inv(m), rot)
            for eps, delta in params.schedule(n):
                hole = _mountain_hole(local, eps, delta)
                if hole is None:
                    break
                hole = [[apply_affine(IntegralAffineMap(m), p) for p in ch] for ch in hole]
                # rotate so that the list's first edge is first
                if flip:
                    f = IntegralAffineMap(refl)
                    hole = [[apply_affine(f, p) for p in reversed(ch)] for ch in reversed(hole)]
                hole = _rotate_to(hole, slopes)
                if hole is not None:
                    yield hole
                break


def _rotate_to(hole, slopes):
    got = [slope_of_vector(sub(ch[1], ch[0])) for ch in hole]
    n = len(slopes)
    for i in range(n):
        if got[i:] + got[:i] == list(slopes):
            return hole[i:] + hole[:i]
    return None


def plug_boundary_ok(d, slopes, extra_folds):
    rep = validate_base(d)
    if not rep.valid:
        return False
    comps = [c for c in rep.components if c.kind == BOUNDARY]
    ends = [c for c in rep.components if c.kind == END]
    if len(comps) != 1 or len(ends) != 1:
        return False
    c = comps[0]
    if CyclicSlopeList(c.slopes) != CyclicSlopeList(slopes):
        return False
    return c.fold_count == positive_turning(slopes) + 2 + extra_folds


def build_plug(q, slopes, params=None):
    """A q-plug whose compact boundary realizes the cyclic list."""
    params = params or BuildParams()
    if int(q) != q or q < 1:
        raise BuildError("q must be a positive integer")
    q = int(q)
    L = list(as_slopes(slopes))
    if not L:
        raise BuildError("invalid list: empty")
    if len(L) > 1:
        if any(L[i] == L[(i + 1) % len(L)] for i in range(len(L))):
            raise BuildError("invalid list: repeated consecutive slope")
        check_right_polygonal(L, True)
    for hole in _hole_candidates(L, params):
        d = _plug_or_none(hole, L, q)
        if d is not None:
            return d
    raise BuildError("no plug recipe realizes %s" % " ".join(map(str, L)))


def _plug_or_none(hole, L, q):
    try:
        d = _plug_from_hole(hole, L, q)
        if d is None:
            return None
        d = strictify(d)
    except DiagramError:
        return None
    return d if plug_boundary_ok(d, L, 2 * (q - 1)) else None


def hole_loop(slopes, params=None):
    """Chains of a clockwise hole loop whose 1-plug realizes the cyclic list."""
    params = params or BuildParams()
    L = list(as_slopes(slopes))
    if len(L) > 1:
        if any(L[i] == L[(i + 1) % len(L)] for i in range(len(L))):
            raise BuildError("invalid list: repeated consecutive slope")
        check_right_polygonal(L, True)
    for hole in _hole_candidates(L, params):
        if _plug_or_none(hole, L, 1) is not None:
            return [[pt(*q) for q in ch] for ch in hole]
    raise BuildError("no plug recipe realizes %s" % " ".join(map(str, L)))


# ----------------------------------------------------------- annuli


def _translation(v):
    return IntegralAffineMap(((1, 0), (0, 1)), v)


def build_parallel_annulus(s, length=1, width=1):
    """Parallelogram with two sides glued by a translation; both boundaries
    are single edges of slope s."""
    s = as_slopes([s])[0]
    d = vec(s)
    w = (-d[1], d[0])
    L = Fraction(length)
    p0 = pt(0, 0)
    p1 = scale(d, L)
    p3 = scale(w, width)
    p2 = add(p1, p3)
    edges = (
        Edge((p0, p1), BOUNDARY),
        Edge((p1, p2), GLUED),
        Edge((p2, p3), BOUNDARY),
        Edge((p3, p0), GLUED),
    )
    dom = PolygonalDiagram(edges, ((0, 1, 2, 3),))
    g = Gluing(3, 1, _translation(p1))
    return GluingDiagram(dom, (g,), {})


def _periodic_points(period, tau, j0, j1):
    """Points of the periodic curve made of translates of one period."""
    pts = []
    for j in range(j0, j1 + 1):
        shift = scale(tau, j)
        for k, p in enumerate(period):
            q = add(p, shift)
            if pts and k == 0:
                continue
            pts.append(q)
    return _merge_straight(pts)


def _merge_straight(pts):
    out = [pts[0]]
    for p in pts[1:]:
        if p == out[-1]:
            continue
        if len(out) >= 2 and cross(sub(out[-1], out[-2]), sub(p, out[-1])) == 0 and dot(
            sub(out[-1], out[-2]), sub(p, out[-1])
        ) > 0:
            out[-1] = p
        else:
            out.append(p)
    return out


def _split_edges(pts):
    """Split a polyline into edges at its genuine vertices."""
    edges = [[pts[0], pts[1]]]
    for k in range(1, len(pts) - 1):
        u = sub(pts[k], pts[k - 1])
        v = sub(pts[k + 1], pts[k])
        if cross(u, v) == 0 and dot(u, v) < 0:
            edges[-1].append(pts[k + 1])
        else:
            edges.append([pts[k], pts[k + 1]])
    return edges


def _flatten(chains):
    pts = [chains[0][0]]
    for ch in chains:
        pts += list(ch[1:])
    return pts


def _locate(pts, p):
    """Indices of segments of the polyline containing p."""
    return [k for k in range(len(pts) - 1) if _on(p, pts[k], pts[k + 1])]


def _periodic_path(slopes, rotation, tau, params, eps, delta):
    """One period, as a point list from 0 to tau, of a periodic curve realizing
    the cyclic list (in the original frame), or None."""
    rot = slopes[rotation:] + slopes[:rotation]
    m = frame(rot[0], rot[1])
    inv = mat_inv(m)
    local = map_slopes(inv, rot) + [ZERO]
    target = mat_vec(inv, tau)
    chains = _path_chains(local, target, eps, delta, allow_drop=True)
    if chains is None:
        return None
    f = IntegralAffineMap(m)
    return [apply_affine(f, p) for p in _flatten(chains)]


def _strip_annulus(S, T, params):
    """Annulus between a periodic curve for S and a far, rotated one for T."""
    nS = len(S)
    rots_S = list(range(nS))
    rots_T = list(range(len(T))) if len(T) > 1 else [None]
    for rs in rots_S:
        d2S = frame(S[rs], S[(rs + 1) % nS])
        d2S = (d2S[0][1], d2S[1][1])
        for rt in rots_T:
            if rt is None:
                t = vec(T[0])
                taus = [t, (-t[0], -t[1])]
            else:
                mt = frame(T[rt], T[(rt + 1) % len(T)])
                d2T = (mt[0][1], mt[1][1])
                taus = [u for u in _small_vectors(3) if cross(u, d2S) > 0 and cross(u, d2T) > 0]
            taus = [u for u in taus if cross(u, d2S) > 0]
            for tau0 in taus[:3]:
                for eps, delta in list(params.schedule(nS + len(T)))[:6]:
                    lam = 4 * (nS + len(T) + 2) * eps
                    tau = scale(tau0, lam * 2)
                    got = _strip_try(S, T, rs, rt, tau, params, eps, delta)
                    if got is not None:
                        return got
    raise BuildError("annulus construction failed")


def _small_vectors(r):
    out = []
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            if (x, y) != (0, 0) and gcd(x, y) == 1:
                out.append((x, y))
    out.sort(key=lambda v: (v[0] * v[0] + v[1] * v[1], v))
    return out


def _strip_try(S, T, rs, rt, tau, params, eps, delta):
    from .geometry import segment_intersection

    per_S = _periodic_path(S, rs, tau, params, eps, delta)
    if per_S is None:
        return None
    if rt is None:
        per_T = [pt(0, 0), tau]
    else:
        per_T = _periodic_path(T, rt, tau, params, eps, delta)
        if per_T is None:
            return None
    # the T curve is rotated by a half turn and pushed far to the left of tau
    perp = (-tau[1], tau[0])
    span = max(abs(c) for p in per_S + per_T for c in p) + 1
    far = scale(perp, 4 * span / max(abs(perp[0]), abs(perp[1])) + 4)
    rot_T = [add(far, (-p[0], -p[1])) for p in per_T]
    curve_S = _periodic_points(per_S, tau, -2, 2)
    tau_back = (-tau[0], -tau[1])
    curve_T = _periodic_points(rot_T, tau_back, -3, 3)
    # cut from a point of S's first edge in period 0
    first_end = per_S[1]
    for frac in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
        P = add(per_S[0], scale(sub(first_end, per_S[0]), frac))
        if len(_locate(curve_S, P)) != 1:
            continue
        for r in (perp, add(perp, tau), sub(perp, tau)):
            r = direction(r)
            if cross(tau, r) <= 0:
                continue
            far_pt = add(P, scale(r, 64 * span))
            best = None
            for k in range(len(curve_T) - 1):
                hit = segment_intersection(P, far_pt, curve_T[k], curve_T[k + 1])
                if hit is None:
                    continue
                if hit[0] != "point":
                    best = None
                    break
                q = hit[1]
                t = param_on(q, P, far_pt)
                if best is None or t < best[0]:
                    best = (t, q, k)
            if best is None:
                continue
            t_hit, Q, _ = best
            # S must not be met again before Q
            blocked = False
            for k in range(len(curve_S) - 1):
                hit = segment_intersection(P, Q, curve_S[k], curve_S[k + 1])
                if hit is None:
                    continue
                if hit[0] == "point" and hit[1] == P:
                    continue
                blocked = True
                break
            if blocked or len(_locate(curve_T, Q)) != 1:
                continue
            if Q in curve_T:
                continue
            dom = _strip_domain(curve_S, curve_T, P, Q, tau)
            if dom is None:
                continue
            return dom
    return None


def _walk_between(curve, a, b):
    """Sub-polyline of curve from point a to point b (a before b)."""
    ia = _locate(curve, a)
    ib = _locate(curve, b)
    if len(ia) != 1 or len(ib) != 1 or ia[0] > ib[0]:
        return None
    ia, ib = ia[0], ib[0]
    if ia == ib:
        if param_on(a, curve[ia], curve[ia + 1]) >= param_on(b, curve[ia], curve[ia + 1]):
            return None
        return [a, b]
    return [a] + curve[ia + 1 : ib + 1] + [b]


def _strip_domain(curve_S, curve_T, P, Q, tau):
    s_walk = _walk_between(curve_S, P, add(P, tau))
    t_walk = _walk_between(curve_T, add(Q, tau), Q)
    if s_walk is None or t_walk is None:
        return None
    edges = []
    loop = []
    for ch in _split_edges(_merge_straight(s_walk)):
        loop.append(len(edges))
        edges.append(Edge(ch, BOUNDARY))
    cut2 = len(edges)
    loop.append(cut2)
    edges.append(Edge((add(P, tau), add(Q, tau)), GLUED))
    for ch in _split_edges(_merge_straight(t_walk)):
        loop.append(len(edges))
        edges.append(Edge(ch, BOUNDARY))
    cut1 = len(edges)
    loop.append(cut1)
    edges.append(Edge((Q, P), GLUED))
    dom = PolygonalDiagram(tuple(edges), (tuple(loop),))
    return GluingDiagram(dom, (Gluing(cut1, cut2, _translation(tau)),), {})


def _lists_match(d, lists):
    rep = validate_base(d)
    if not rep.valid:
        return False
    got = sorted(
        (CyclicSlopeList(c.slopes) for c in rep.components if c.kind == BOUNDARY),
        key=repr,
    )
    want = sorted((CyclicSlopeList(l) for l in lists), key=repr)
    return got == want


def build_annulus(kind, *lists, params=None):
    """Annulus with trivial monodromy.

    kind "parallel" takes one slope used on both boundaries; kind
    "nonparallel" takes two cyclic lists, at least one with two slopes.
    """
    params = params or BuildParams()
    if kind == "parallel":
        if len(lists) != 1:
            raise BuildError("parallel annulus takes one slope")
        return build_parallel_annulus(lists[0])
    if kind != "nonparallel" or len(lists) != 2:
        raise BuildError("unknown annulus kind")
    A = list(as_slopes(lists[0]))
    B = list(as_slopes(lists[1]))
    for X in (A, B):
        if not X:
            raise BuildError("invalid list: empty")
        if len(X) > 1:
            check_right_polygonal(X, True)
    if len(A) == 1 and len(B) == 1:
        if A != B:
            raise BuildError("not realizable")
        return build_parallel_annulus(A[0])
    S, T = (A, B) if len(A) > 1 else (B, A)
    d = strictify(_strip_annulus(S, T, params))
    if not _lists_match(d, [A, B]):
        raise BuildError("annulus construction failed")
    return d


# ------------------------------------------------------ hole insertion


def _seg_clearance(p, a, b):
    """Lower bound for the sup-norm distance from p to the segment ab."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    line = abs(cross((dx, dy), sub(p, a))) / (abs(dx) + abs(dy))
    ox = max(min(a[0], b[0]) - p[0], p[0] - max(a[0], b[0]), 0)
    oy = max(min(a[1], b[1]) - p[1], p[1] - max(a[1], b[1]), 0)
    return max(line, ox, oy)


def _face_clearance(dom, fi, p):
    face = dom.faces[fi]
    if point_in_polygon(p, dom.loop_points(face[0])) != 1:
        return None
    if any(point_in_polygon(p, dom.loop_points(li)) != 0 for li in face[1:]):
        return None
    best = None
    for li in face:
        for e in dom.loops[li]:
            for a, b in dom.edges[e].segments:
                c = _seg_clearance(p, a, b)
                best = c if best is None else min(best, c)
    return best if best else None


def _dyadic_below(x):
    s = Fraction(1)
    while s > x:
        s /= 2
    while 2 * s <= x:
        s *= 2
    return s


def _best_spot(dom, grid=8):
    best = None
    for fi, face in enumerate(dom.faces):
        pts = dom.loop_points(face[0])
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
        for i in range(1, grid + 1):
            for j in range(1, grid + 1):
                p = (x0 + (x1 - x0) * Fraction(i, grid + 1), y0 + (y1 - y0) * Fraction(j, grid + 1))
                c = _face_clearance(dom, fi, p)
                if c is not None and (best is None or c > best[0]):
                    best = (c, fi, p)
    return best


def insert_loop(d, chains, kind=BOUNDARY):
    """Add a scaled copy of a clockwise loop as a hole in the roomiest face."""
    d = as_gluing(d)
    dom = d.domain
    best = _best_spot(dom)
    if best is None:
        raise BuildError("no room for a hole")
    room, fi, p = best
    chains = [[pt(*q) for q in ch] for ch in chains]
    xs = [q[0] for ch in chains for q in ch]
    ys = [q[1] for ch in chains for q in ch]
    center = ((min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2)
    radius = max(max(xs) - min(xs), max(ys) - min(ys)) / 2
    s = _dyadic_below(room / (2 * radius))
    placed = [[add(p, scale(sub(q, center), s)) for q in ch] for ch in chains]
    edges = list(dom.edges) + [Edge(ch, kind) for ch in placed]
    loop = tuple(range(len(dom.edges), len(edges)))
    loops = dom.loops + (loop,)
    faces = list(dom.faces)
    faces[fi] = faces[fi] + (len(loops) - 1,)
    newdom = PolygonalDiagram(tuple(edges), loops, tuple(faces))
    return GluingDiagram(newdom, d.gluings, d.labels)


def insert_holes(d, lists, params=None):
    for L in lists:
        d = insert_loop(d, hole_loop(L, params))
    return d


END_SQUARE = [
    [pt(0, 0), pt(0, 1)],
    [pt(0, 1), pt(1, 1)],
    [pt(1, 1), pt(1, 0)],
    [pt(1, 0), pt(0, 0)],
]


# ----------------------------------------------------- punctured disk


def _complete_basis(v):
    """Matrix in SL(2, Z) whose first column is the primitive vector v."""
    p, q = int(v[0]), int(v[1])

    def egcd(a, b):
        if b == 0:
            return (a, 1, 0)
        g, x, y = egcd(b, a % b)
        return (g, y, x - (a // b) * y)

    g, a, b = egcd(p, q)
    if g < 0:
        g, a, b = -g, -a, -b
    if g != 1:
        raise BuildError("vector is not primitive")
    # p a + q b = 1, so the columns (p, q) and (-b, a) have determinant 1
    return ((p, -b), (q, a))


def _pants_in_frame(d1, d3, alpha, omega, gamma):
    """Fundamental domain of a twice-punctured disk with boundary slopes
    of d1 (two folds), 0 and d3, for d1 pointing down, d3 pointing up and
    cross(d1, d3) > 0."""
    n1, m1 = d1
    n3, m3 = d3
    rise = Fraction(-alpha * m3, m1)  # beta - mu
    theta = alpha * n3 + rise * n1
    mu = rise / 2
    beta = rise + mu
    t = mu / 3
    A = pt(0, 0)
    H = pt(omega, 0)
    B = scale(pt(*d3), alpha)
    C = add(B, H)
    D = add(C, scale(d1, beta))
    G = add(H, scale(d1, mu))
    if sub(D, G) != (theta, 0):
        raise BuildError("punctured disk frame does not close")
    E = sub(D, scale(d3, gamma))
    F = sub(G, scale(d3, gamma))
    edges = (
        Edge((A, H), GLUED),
        Edge((H, sub(H, scale(d1, t)), add(G, scale(d1, t)), G), BOUNDARY),
        Edge((G, F), GLUED),
        Edge((F, E), BOUNDARY),
        Edge((E, D), GLUED),
        Edge((D, C), BOUNDARY),
        Edge((C, B), GLUED),
        Edge((B, A), BOUNDARY),
    )
    dom = PolygonalDiagram(edges, (tuple(range(8)),))
    gl = (Gluing(0, 6, _translation(B)), Gluing(2, 4, _translation((theta, 0))))
    return GluingDiagram(dom, gl, {})


def _oriented(u, up):
    if (u[1] > 0) == up:
        return u
    return (-u[0], -u[1])


def _pants_ok(d, slopes, folds):
    rep = validate_base(d)
    if not rep.valid or rep.fold_count != folds:
        return False
    if not monodromy_of_gluing(d).trivial:
        return False
    return _lists_match(d, [[s] for s in slopes])


def build_punctured_disk(s1, s2, s3, params=None):
    """Twice-punctured disk whose three boundaries are single edges of the
    given slopes; the result does not depend on the order of the slopes."""
    params = params or BuildParams()
    slopes = sorted(as_slopes([s1, s2, s3]), key=angle_key)
    distinct = sorted(set(slopes), key=angle_key)
    if len(distinct) < 3:
        s = max(distinct, key=lambda x: slopes.count(x))
        rest = list(slopes)
        rest.remove(s)
        rest.remove(s)
        d = build_parallel_annulus(s, length=4, width=4)
        d = strictify(insert_holes(d, [[rest[0]]], params))
        if _pants_ok(d, slopes, 2):
            return d
        raise BuildError("punctured disk construction failed")
    mids = sorted(distinct, key=lambda x: (x != ZERO, angle_key(x)))
    for mid in mids:
        others = [s for s in distinct if s != mid]
        base = mat_inv(_complete_basis(vec(mid)))
        for k in (0, 1, -1, 2, -2, 3, -3):
            m = ((base[0][0] + k * base[1][0], base[0][1] + k * base[1][1]), base[1])
            us = [mat_vec(m, vec(s)) for s in others]
            for x, y in ((0, 1), (1, 0)):
                d1 = _oriented(us[x], up=False)
                d3 = _oriented(us[y], up=True)
                if cross(d1, d3) <= 0:
                    continue
                for alpha, omega, gamma in ((3, 2, 1), (6, 2, 1), (3, 4, 1), (6, 1, Fraction(1, 2))):
                    try:
                        dom = _pants_in_frame(d1, d3, alpha, omega, gamma)
                        d = transform_diagram(dom, IntegralAffineMap(mat_inv(m)))
                        d = strictify(d)
                    except (DiagramError, BuildError):
                        continue
                    if _pants_ok(d, slopes, 2):
                        return d
    raise BuildError("punctured disk construction failed")


# ------------------------------------------------------- genus domains


def _corner_classes(sigma):
    """Classes of square corners when square i has its right side glued to
    the left side of square i+1 and its top glued to the bottom of sigma(i)."""
    p = len(sigma)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for i in range(p):
        j = (i + 1) % p
        union(("BR", i), ("BL", j))
        union(("TR", i), ("TL", j))
        union(("TL", i), ("BL", sigma[i]))
        union(("TR", i), ("BR", sigma[i]))
    classes = {}
    for i in range(p):
        for c in ("BL", "BR", "TL", "TR"):
            classes.setdefault(find((c, i)), []).append((c, i))
    return sorted(classes.values(), key=len)


def _genus_permutation(g):
    """First permutation of 2g squares leaving exactly two corner classes,
    one of them a regular point."""
    p = 2 * g
    want = [4, 4 * (2 * g - 1)]
    for sigma in permutations(range(p)):
        if [len(c) for c in _corner_classes(sigma)] == want:
            return sigma
    raise BuildError("no square pattern for genus %d" % g)


def _genus_layout(g):
    sigma = _genus_permutation(g)
    small, large = _corner_classes(sigma)
    if len(small) == len(large) and ("TL", 0) in small:
        small, large = large, small
    p = len(sigma)

    def cls(c, i):
        return "b" if (c, i) in large else "a"

    occ = {}
    for i in range(p):
        occ[("L", i)] = cls("TL", i)
        occ[("R", i)] = cls("TR", i)
    return sigma, occ


RHO = Fraction(1, 4)
SLIT = Fraction(1, 8)


def _side_hook(kind, side, x, arm=None):
    """Chains replacing the side midpoint (x, 1), listed along the
    counterclockwise walk (downwards on the left, upwards on the right)."""
    if kind == "end":
        if side == "L":
            return [[pt(x, 1 + RHO), pt(x + RHO, 1)], [pt(x + RHO, 1), pt(x, 1 - RHO)]], END
        return [[pt(x, 1 - RHO), pt(x - RHO, 1)], [pt(x - RHO, 1), pt(x, 1 + RHO)]], END
    if kind == "slit":
        s = SLIT if side == "L" else -SLIT
        return [[pt(x, 1), pt(x + s, 1), pt(x, 1)]], BOUNDARY
    if kind == "arm":
        return arm, BOUNDARY
    return [], None


def _genus_faces(g, hooks, arms=None):
    """Square faces with translation gluings; hooks maps each side
    occurrence to None, "end", "slit" or "arm"."""
    arms = arms or {}
    sigma, occ = _genus_layout(g)
    p = len(sigma)
    inv = {s: i for i, s in enumerate(sigma)}
    half = Fraction(1, 2)
    edges, loops, names = [], [], {}

    def gap(kind):
        return RHO if kind == "end" else 0

    for i in range(p):
        hl, hr = hooks.get(("L", i)), hooks.get(("R", i))
        x0, x1 = pt(i, 0)[0], pt(i + 1, 0)[0]
        loop = []

        def put(chain, kind, name=None):
            if name is not None:
                names[name] = len(edges)
            loop.append(len(edges))
            edges.append(Edge(chain, kind))

        put([pt(x0, half), pt(x1, half)], GLUED, ("bot", i))
        put([pt(x1, half), pt(x1, 1 - gap(hr))], GLUED, ("rl", i))
        chains, kind = _side_hook(hr, "R", x1, arms.get(("R", i)))
        for ch in chains:
            put(ch, kind)
        put([pt(x1, 1 + gap(hr)), pt(x1, 1 + half)], GLUED, ("ru", i))
        put([pt(x1, 1 + half), pt(x0, 1 + half)], GLUED, ("top", i))
        put([pt(x0, 1 + half), pt(x0, 1 + gap(hl))], GLUED, ("lu", i))
        chains, kind = _side_hook(hl, "L", x0, arms.get(("L", i)))
        for ch in chains:
            put(ch, kind)
        put([pt(x0, 1 - gap(hl)), pt(x0, half)], GLUED, ("ll", i))
        loops.append(tuple(loop))
    dom = PolygonalDiagram(tuple(edges), tuple(loops))
    gluings = []

    def glue(a, b):
        ea, eb = edges[names[a]], edges[names[b]]
        gluings.append(Gluing(names[a], names[b], _translation(sub(eb.end, ea.start))))

    for i in range(p):
        glue(("rl", i), ("ll", (i + 1) % p))
        glue(("top", i), ("bot", sigma[i]))
        glue(("ru", i), ("lu", inv[(sigma[i] + 1) % p]))
    return GluingDiagram(dom, tuple(gluings), {}), occ


def build_genus_domain(g, k):
    """Fundamental domain for a genus g surface with k ends."""
    if g < 1 or k < 1:
        raise BuildError("genus domain needs g >= 1 and k >= 1")
    _, occ = _genus_layout(g)
    ended = {"b"} if k == 1 else {"a", "b"}
    hooks = {o: "end" for o, c in occ.items() if c in ended}
    d, _ = _genus_faces(g, hooks)
    for _ in range(k - len(ended)):
        d = insert_loop(d, END_SQUARE, END)
    cx = identification_complex(d)
    if (cx.genus, cx.end_components, cx.boundary_components) != (g, k, 0):
        raise BuildError("genus domain check failed")
    if not monodromy_of_gluing(d).trivial:
        raise BuildError("genus domain has monodromy")
    return d


# ---------------------------------------------------- monodromy diagrams


AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _between_det_one(v, w):
    """Primitive vectors strictly between v and w (cross(v, w) > 0) making
    every consecutive pair unimodular."""
    d = cross(v, w)
    if d == 1:
        return []
    # every u = u0 + t v has cross(v, u) = 1; take the least t keeping
    # cross(u, w) positive, which is then smaller than d
    m = _complete_basis(v)
    u0 = (m[0][1], m[1][1])
    t = -((cross(u0, w) - 1) // d)
    u = (u0[0] + t * v[0], u0[1] + t * v[1])
    return [u] + _between_det_one(u, w)


def _fan(dirs):
    ds = sorted(set(dirs), key=pseudo_angle)
    out = []
    for i, v in enumerate(ds):
        w = ds[(i + 1) % len(ds)]
        out.append(v)
        out.extend(_between_det_one(v, w))
    return out


def _wall_and_side(A):
    (a, c), (b, dd) = A
    det = mat_det(A)
    return (-det * a, -det * b), (c, dd)


def _monodromy_polygon(gens, gap):
    h, eps = Fraction(1, 2), Fraction(1, 4)
    tabs = {}
    tabs.setdefault((1, 0), [])
    for i, A in enumerate(gens):
        tabs[(1, 0)].append(("e", i, (0, -1)))
    for i, A in enumerate(gens):
        side, wall = _wall_and_side(A)
        tabs.setdefault(side, []).append(("f", i, wall))
    dirs = _fan(list(tabs) + list(AXES))
    need = max(len(t) for t in tabs.values()) * (1 + gap) + gap
    lengths = convex_lengths(dirs, minimum=need)
    edges, loop, names = [], [], {}
    q = pt(0, 0)

    def put(chain, kind=BOUNDARY, name=None):
        if name is not None:
            names[name] = len(edges)
        loop.append(len(edges))
        edges.append(Edge(chain, kind))

    for w, length in zip(dirs, lengths):
        cur = q
        for n, (kind, i, om) in enumerate(tabs.get(w, [])):
            p = add(q, scale(w, gap + n * (1 + gap)))
            put([cur, add(p, scale(w, eps)), p])
            put([p, add(p, scale(om, h))])
            put([add(p, scale(om, h)), add(add(p, scale(om, h)), w)], GLUED, (kind, i))
            e = add(p, w)
            put([add(e, scale(om, h)), sub(e, scale(om, eps)), e])
            cur = e
        q = add(q, scale(w, length))
        put([cur, q])
    dom = PolygonalDiagram(tuple(edges), (tuple(loop),))
    gluings = []
    for i, A in enumerate(gens):
        e, f = edges[names[("e", i)]], edges[names[("f", i)]]
        img = mat_vec(A, e.start)
        target = f.end if mat_det(A) > 0 else f.start
        gluings.append(Gluing(names[("e", i)], names[("f", i)],
                              IntegralAffineMap(A, sub(target, img))))
    labels = {}
    for (kind, i), e in names.items():
        labels["%s%d" % (kind, i)] = e
    return GluingDiagram(dom, tuple(gluings), labels)


def _as_matrix(m):
    (a, b), (c, d) = m
    out = ((int(a), int(b)), (int(c), int(d)))
    if mat_det(out) not in (1, -1):
        raise BuildError("matrix %r is not unimodular" % (m,))
    return out


def build_monodromy_diagram(generators):
    """Base with folds whose gluing maps have the given linear parts."""
    gens = [_as_matrix(m) for m in generators]
    gap = 2 + 2 * max([abs(m[0][1]) + abs(m[1][1]) for m in gens] + [0])
    for _ in range(4):
        d = _monodromy_polygon(gens, gap)
        if validate_base(d).valid and all(check_monodromy_conditions(d, gens)):
            return d
        gap *= 2
    raise BuildError("monodromy diagram construction failed")


def check_monodromy_conditions(d, gens):
    """The four polygon conditions for the given generators, as booleans."""
    gens = [_as_matrix(m) for m in gens]
    dom = d.domain
    lab = d.label_map
    loop = dom.loops[0]
    pos = {e: j for j, e in enumerate(loop)}

    def around(e):
        j = pos[e]
        return dom.edges[loop[j - 1]], dom.edges[loop[(j + 1) % len(loop)]]

    c1 = c2 = c3 = True
    for i, A in enumerate(gens):
        (a, c), (b, dd) = A
        e, f = dom.edges[lab["e%d" % i]], dom.edges[lab["f%d" % i]]
        pe, ne = around(lab["e%d" % i])
        c1 = c1 and e.tangent == (1, 0) and pe.last_tangent == (0, -1) and ne.tangent == (0, 1)
        pf, nf = around(lab["f%d" % i])
        c2 = c2 and f.tangent in ((a, b), (-a, -b))
        c2 = c2 and pf.last_tangent == (c, dd) and nf.tangent == (-c, -dd)
        img = mat_vec(A, sub(e.end, e.start))
        fv = sub(f.end, f.start)
        c3 = c3 and dot(img, img) == dot(fv, fv)
    cx = identification_complex(d)
    c4 = cx.euler == 1 - len(gens) and cx.orientable == all(mat_det(A) == 1 for A in gens)
    return (c1, c2, c3, c4)


# ------------------------------------------------------ infinite family


FAMILY_MAPS = (((1, 1), (0, 1)), ((1, 0), (-2, 1)))


def _family_outline():
    P = lambda x, y: pt(x, y)  # noqa: E731
    edges = (
        Edge((P(4, 26), P(4, 2), P(4, 4)), BOUNDARY),
        Edge((P(4, 4), P(0, 0)), GLUED),
        Edge((P(0, 0), P(5, 0)), BOUNDARY),
        Edge((P(5, 0), P(13, 4)), GLUED),
        Edge((P(13, 4), P(16, 7), P(15, 6)), BOUNDARY),
        Edge((P(15, 6), P(18, 6)), GLUED),
        Edge((P(18, 6), P(18, 9)), BOUNDARY),
        Edge((P(18, 9), P(15, 15)), GLUED),
        Edge((P(15, 15), P(4, 26)), BOUNDARY),
    )
    gluings = (
        Gluing(1, 3, IntegralAffineMap(FAMILY_MAPS[0], (5, 0))),
        Gluing(5, 7, IntegralAffineMap(FAMILY_MAPS[1], (0, 39))),
    )
    return edges, gluings


def build_family_example(n):
    """The base of X_n: the two-gluing outline with n vertical slits."""
    n = int(n)
    if n < 0:
        raise BuildError("n must be nonnegative")
    edges, gluings = _family_outline()
    edges = list(edges)
    loops = [tuple(range(len(edges)))]
    half = Fraction(3, 2)
    for j in range(n):
        c = pt(6 + Fraction(10 * (j + 1), n + 1), Fraction(19, 2))
        edges.append(Edge((c, (c[0], c[1] + half), (c[0], c[1] - half), c), BOUNDARY))
        loops.append((len(edges) - 1,))
    dom = PolygonalDiagram(tuple(edges), tuple(loops), (tuple(range(len(loops))),))
    d = GluingDiagram(dom, gluings, {"D1": 1, "D2": 3, "D3": 5, "D4": 7})
    return strictify(d) if n else d


def diagram_vertex_count(d):
    """Number of vertices on the boundary components of a diagram."""
    from .diagram import trace_boundaries

    return sum(len(c.vertex_dets) for c in trace_boundaries(d) if c.kind == BOUNDARY)


# ------------------------------------------------------------ bases


def _torus():
    edges = (
        Edge((pt(0, 0), pt(1, 0)), GLUED),
        Edge((pt(1, 0), pt(1, 1)), GLUED),
        Edge((pt(1, 1), pt(0, 1)), GLUED),
        Edge((pt(0, 1), pt(0, 0)), GLUED),
    )
    dom = PolygonalDiagram(edges, ((0, 1, 2, 3),))
    return GluingDiagram(dom, (Gluing(0, 2, _translation((0, 1))), Gluing(1, 3, _translation((-1, 0)))), {})


def _ray_is_free(chains, ci, t):
    f = chains[ci][t]
    u = sub(f, chains[ci][t - 1])
    pts = [p for ch in chains for p in ch]
    span = max(max(abs(p[0] - f[0]), abs(p[1] - f[1])) for p in pts)
    far = add(f, scale(u, 4 * span / max(abs(u[0]), abs(u[1]))))
    for cj, ch in enumerate(chains):
        for k in range(len(ch) - 1):
            if cj == ci and k in (t - 1, t):
                continue
            hit = segment_intersection(f, far, ch[k], ch[k + 1])
            if hit is not None:
                return False
    return True


def _arm(chains, side, x):
    """Hook chains joining the side point (x, 1) to a fold tip of a hole,
    and the frame change T making the arm horizontal."""
    for ci, ch in enumerate(chains):
        for t in range(1, len(ch) - 1):
            if not _ray_is_free(chains, ci, t):
                continue
            f = ch[t]
            u = direction(sub(f, ch[t - 1]))
            T = mat_inv(_complete_basis(u))
            if side == "L":
                T = ((-T[0][0], -T[0][1]), (-T[1][0], -T[1][1]))
            moved = [[mat_vec(T, sub(p, f)) for p in c] for c in chains]
            radius = max(max(abs(p[0]), abs(p[1])) for c in moved for p in c)
            s = SLIT / (2 * radius)
            tip = pt(x + (SLIT if side == "L" else -SLIT), 1)
            placed = [[add(tip, scale(p, s)) for p in c] for c in moved]
            P = pt(x, 1)
            c = placed[ci]
            pre = c[:t] + [P]
            post = [P] + c[t + 1:]
            rest = placed[ci + 1:] + placed[:ci]
            return [post] + rest + [pre], T
    raise BuildError("no free fold tip on the hole")


def _genus_base(g, lists, params):
    if g == 1:
        d, _ = _genus_faces(1, {})
        return strictify(insert_holes(d, lists, params))
    _, occ = _genus_layout(g)
    bs = sorted(o for o, c in occ.items() if c == "b")
    first = bs[0]
    hole = hole_loop(lists[0], params)
    x = first[1] if first[0] == "L" else first[1] + 1
    arm, T = _arm(hole, first[0], x)
    hooks = {o: "slit" for o in bs}
    hooks[first] = "arm"
    d, _ = _genus_faces(g, hooks, {first: arm})
    d = strictify(transform_diagram(d, IntegralAffineMap(mat_inv(T))))
    return strictify(insert_holes(d, lists[1:], params))


def _planar_base(lists, params):
    k = len(lists)
    if k == 1:
        return as_gluing(build_loop(lists[0], params))
    multi = [i for i, L in enumerate(lists) if len(L) > 1]
    if k == 2:
        if not multi:
            if lists[0] != lists[1]:
                raise BuildError("not realizable")
            return build_parallel_annulus(lists[0][0], length=4, width=4)
        return build_annulus("nonparallel", lists[0], lists[1], params=params)
    if multi:
        i = multi[0]
        j = 0 if i != 0 else 1
        rest = [L for n, L in enumerate(lists) if n not in (i, j)]
        d = build_annulus("nonparallel", lists[i], lists[j], params=params)
    else:
        rest = lists[3:]
        d = build_punctured_disk(lists[0][0], lists[1][0], lists[2][0], params)
    return strictify(insert_holes(d, rest, params))


def _looped_base(lists, params):
    """Fallback: a loop for a list of turning at least two, the rest as holes."""
    for i, L in enumerate(lists):
        if positive_turning(L) >= 2:
            d = as_gluing(build_loop(L, params))
            return strictify(insert_holes(d, lists[:i] + lists[i + 1:], params))
    raise BuildError("no list with turning 2π")


def _base_ok(d, lists):
    return _lists_match(d, lists) and monodromy_of_gluing(d).trivial


def build_base(b, params=None):
    """Base with folds realizing a locally Hamiltonian weighted orbit space."""
    from .classify import decide_locally_hamiltonian

    dec = decide_locally_hamiltonian(b)
    if not dec:
        raise BuildError("not locally Hamiltonian: clause %s, %s" % (dec.clause, dec.reason))
    params = params or BuildParams()
    if b.k == 0:
        return _torus()
    lists = [list(L) for L in b.boundaries]
    routes = [_genus_base] if b.genus >= 1 else [_planar_base, _looped_base]
    errors = []
    for route in routes:
        try:
            if route is _genus_base:
                d = route(b.genus, lists, params)
            else:
                d = route(lists, params)
        except (BuildError, DiagramError) as exc:
            errors.append(str(exc))
            continue
        if _base_ok(d, lists):
            return d
        errors.append("%s failed the boundary check" % route.__name__)
    raise BuildError("base construction failed: " + "; ".join(errors))
