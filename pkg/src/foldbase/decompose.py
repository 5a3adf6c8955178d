"""Vertical-slab decomposition of planar faces into strictly embedded pieces."""

from collections import defaultdict
from fractions import Fraction

from .diagram import (
    GLUED,
    DiagramError,
    Edge,
    Gluing,
    GluingDiagram,
    PolygonalDiagram,
    as_gluing,
    chains_embedded,
    _loops_touch,
)
from .geometry import param_on, point_in_polygon, signed_area2
from .lattice_core import IntegralAffineMap, apply_affine

IDENTITY_MAP = IntegralAffineMap(((1, 0), (0, 1)))


def face_is_strict(dom, fi):
    face = dom.faces[fi]
    polys = [dom.loop_points(li) for li in face]
    for k, li in enumerate(face):
        area = signed_area2(polys[k])
        if (k == 0 and area <= 0) or (k > 0 and area >= 0):
            return False
        if not chains_embedded(dom.loop_chains(li), True):
            return False
    for k in range(len(face)):
        for l in range(k + 1, len(face)):
            if _loops_touch(dom, face[k], face[l]):
                return False
    for k in range(1, len(face)):
        if point_in_polygon(polys[k][0], polys[0]) != 1:
            return False
    return True


def strictify(d):
    """Split every face that is planar but not strictly embedded."""
    d = as_gluing(d)
    bad = [fi for fi in range(len(d.domain.faces)) if not face_is_strict(d.domain, fi)]
    if not bad:
        return d
    return split_faces(d, bad)


def _y_at(a, b, x):
    return a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])


def _face_segments(dom, fi):
    segs = []
    for li in dom.faces[fi]:
        for e in dom.loops[li]:
            for k, (a, b) in enumerate(dom.edges[e].segments):
                segs.append((a, b, e, k))
    return segs


def _trapezoids(segs):
    xs = sorted({p[0] for a, b, _, _ in segs for p in (a, b)})
    traps = []
    for x0, x1 in zip(xs, xs[1:]):
        xm = (x0 + x1) / 2
        act = []
        for si, (a, b, _, _) in enumerate(segs):
            if a[0] == b[0]:
                continue
            lo, hi = min(a[0], b[0]), max(a[0], b[0])
            if lo <= x0 and hi >= x1:
                d = 1 if b[0] > a[0] else -1
                act.append((_y_at(a, b, xm), d, _y_at(a, b, x0), _y_at(a, b, x1), si))
        act.sort(key=lambda r: (r[0], r[1]))
        for r, s in zip(act, act[1:]):
            if s[2] < r[2] or s[3] < r[3]:
                raise DiagramError("face boundary crosses itself")
        w = 0
        for i, r in enumerate(act):
            w += r[1]
            if w not in (0, 1):
                raise DiagramError("face is not planar")
            if w == 1:
                top = act[i + 1]
                traps.append(
                    dict(x0=x0, x1=x1, bot=r[4], top=top[4],
                         ybl=r[2], ybr=r[3], ytl=top[2], ytr=top[3])
                )
        if w != 0:
            raise DiagramError("face is not planar")
    return xs, traps


def split_faces(d, which):
    d = as_gluing(d)
    dom = d.domain
    which = sorted(set(which))
    face_of_loop = {}
    for fi, f in enumerate(dom.faces):
        for li in f:
            face_of_loop[li] = fi
    split_edges = set()
    for fi in which:
        for li in dom.faces[fi]:
            split_edges.update(dom.loops[li])

    # split points per (edge, segment)
    cuts = defaultdict(set)
    info = {}
    for fi in which:
        segs = _face_segments(dom, fi)
        xs, traps = _trapezoids(segs)
        info[fi] = (segs, xs, traps)
        for a, b, e, k in segs:
            if a[0] != b[0]:
                lo, hi = min(a[0], b[0]), max(a[0], b[0])
                for x in xs:
                    if lo < x < hi:
                        cuts[(e, k)].add((x, _y_at(a, b, x)))
        for x in xs:
            for y in _line_breaks(segs, traps, x):
                for a, b, e, k in segs:
                    if a[0] == b[0] == x and min(a[1], b[1]) < y < max(a[1], b[1]):
                        cuts[(e, k)].add((x, y))

    # carry cuts across gluings
    for g in d.gluings:
        s, t = g.source, g.target
        new_t = {apply_affine(g.map, p) for p in cuts.get((s, 0), ())}
        inv = g.map.inverse()
        new_s = {apply_affine(inv, p) for p in cuts.get((t, 0), ())}
        if new_t:
            cuts[(t, 0)] |= new_t
        if new_s:
            cuts[(s, 0)] |= new_s

    # pieces for every edge
    new_edges = []
    labels = d.label_map
    new_labels = {}
    pieces_of = {}
    for ei, e in enumerate(dom.edges):
        if ei in split_edges:
            for k, (a, b) in enumerate(e.segments):
                pts = _ordered(a, b, cuts.get((ei, k), ()))
                ids = []
                for p, q in zip(pts, pts[1:]):
                    ids.append(len(new_edges))
                    new_edges.append(Edge((p, q), e.kind))
                    if ei in labels:
                        new_labels[ids[-1]] = labels[ei]
                pieces_of[(ei, k)] = ids
        else:
            if e.kind == GLUED and cuts.get((ei, 0)):
                pts = _ordered(e.start, e.end, cuts[(ei, 0)])
                ids = []
                for p, q in zip(pts, pts[1:]):
                    ids.append(len(new_edges))
                    new_edges.append(Edge((p, q), e.kind))
                    if ei in labels:
                        new_labels[ids[-1]] = labels[ei]
            else:
                ids = [len(new_edges)]
                new_edges.append(e)
                if ei in labels:
                    new_labels[ids[-1]] = labels[ei]
            pieces_of[(ei, None)] = ids

    def all_pieces(ei):
        if (ei, None) in pieces_of:
            return list(pieces_of[(ei, None)])
        out = []
        k = 0
        while (ei, k) in pieces_of:
            out += pieces_of[(ei, k)]
            k += 1
        return out

    # re-pair original gluings on pieces
    gluings = []
    for g in d.gluings:
        sp, tp = all_pieces(g.source), all_pieces(g.target)
        by_ends = {(new_edges[i].start, new_edges[i].end): i for i in tp}
        for i in sp:
            ends = (apply_affine(g.map, new_edges[i].end), apply_affine(g.map, new_edges[i].start))
            key = ends if g.map.det > 0 else ends[::-1]
            if key not in by_ends:
                raise DiagramError("inconsistent gluing")
            gluings.append(Gluing(i, by_ends.pop(key), g.map, g.seam))
        if by_ends:
            raise DiagramError("inconsistent gluing")

    loops = []
    faces = []
    for fi, f in enumerate(dom.faces):
        if fi in which:
            continue
        ids = []
        for li in f:
            lp = []
            for e in dom.loops[li]:
                lp += all_pieces(e)
            ids.append(len(loops))
            loops.append(tuple(lp))
        faces.append(tuple(ids))

    for fi in which:
        segs, xs, traps = info[fi]
        used = set()
        piece_at = {}
        for si, (a, b, e, k) in enumerate(segs):
            for pid in pieces_of[(e, k)]:
                ed = new_edges[pid]
                piece_at[(ed.start, ed.end)] = pid
        side = {}
        for x in xs:
            side.update(_line_sides(segs, traps, x, piece_at, new_edges, gluings, cuts))
        for ti, t in enumerate(traps):
            lp = []
            lp += _run(piece_at, segs[t["bot"]], t["x0"], t["x1"])
            lp += side.get((ti, "right"), [])
            lp += _run(piece_at, segs[t["top"]], t["x1"], t["x0"])
            lp += side.get((ti, "left"), [])
            for pid in lp:
                if pid in used:
                    raise DiagramError("face decomposition reused an edge")
                used.add(pid)
            faces.append((len(loops),))
            loops.append(tuple(lp))
        mine = {pid for si, (a, b, e, k) in enumerate(segs) for pid in pieces_of[(e, k)]}
        if mine - used:
            raise DiagramError("face boundary is inconsistent with its interior")

    newdom = PolygonalDiagram(tuple(new_edges), tuple(loops), tuple(faces))
    return GluingDiagram(newdom, tuple(gluings), new_labels)


def _ordered(a, b, extra):
    ts = sorted({Fraction(0), Fraction(1)} | {param_on(p, a, b) for p in extra})
    return [(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t) for t in ts]


def _run(piece_at, seg, xa, xb):
    """Pieces of a non-vertical segment between abscissae xa and xb, in order."""
    a, b, _, _ = seg
    out = []
    cur = (xa, _y_at(a, b, xa))
    target = (xb, _y_at(a, b, xb))
    nxt_by_start = {}
    for (s, t), pid in piece_at.items():
        nxt_by_start.setdefault(s, []).append((t, pid))
    while cur != target:
        step = None
        for t, pid in nxt_by_start.get(cur, ()):
            if _between(cur, t, target) and _collinear(a, b, t):
                step = (t, pid)
                break
        if step is None:
            raise DiagramError("missing edge piece in face decomposition")
        out.append(step[1])
        cur = step[0]
    return out


def _collinear(a, b, p):
    from .geometry import orient

    return orient(a, b, p) == 0


def _between(c, t, target):
    return min(c[0], target[0]) <= t[0] <= max(c[0], target[0]) and t != c and (
        (t[0] - c[0]) * (target[0] - c[0]) > 0
    )


def _line_breaks(segs, traps, x):
    ys = set()
    for t in traps:
        if t["x1"] == x:
            ys.update((t["ybr"], t["ytr"]))
        if t["x0"] == x:
            ys.update((t["ybl"], t["ytl"]))
    for a, b, _, _ in segs:
        if a[0] == b[0] == x:
            ys.update((a[1], b[1]))
    return ys


def _line_sides(segs, traps, x, piece_at, new_edges, gluings, cuts):
    ys = set(_line_breaks(segs, traps, x))
    verts = []
    for si, (a, b, e, k) in enumerate(segs):
        if a[0] == b[0] == x:
            verts.append((min(a[1], b[1]), max(a[1], b[1]), b[1] > a[1], si))
    for s_lo, s_hi, up, si in verts:
        a, b, e, k = segs[si]
        for p in cuts.get((e, k), ()):
            ys.add(p[1])
    # pieces of vertical segments on this line
    for (s, t), pid in piece_at.items():
        if s[0] == t[0] == x:
            ys.update((s[1], t[1]))
    ys = sorted(ys)
    lefts = [(ti, t["ybr"], t["ytr"]) for ti, t in enumerate(traps) if t["x1"] == x and t["ytr"] > t["ybr"]]
    rights = [(ti, t["ybl"], t["ytl"]) for ti, t in enumerate(traps) if t["x0"] == x and t["ytl"] > t["ybl"]]
    right_side = defaultdict(list)
    left_side = defaultdict(list)
    for y0, y1 in zip(ys, ys[1:]):
        L = [ti for ti, lo, hi in lefts if lo <= y0 and y1 <= hi]
        R = [ti for ti, lo, hi in rights if lo <= y0 and y1 <= hi]
        U = [si for lo, hi, up, si in verts if up and lo <= y0 and y1 <= hi]
        D = [si for lo, hi, up, si in verts if not up and lo <= y0 and y1 <= hi]
        if len(L) > 1 or len(R) > 1 or len(U) > 1 or len(D) > 1:
            raise DiagramError("face is not planar")
        lo_p, hi_p = (x, y0), (x, y1)
        if L and R and not U and not D:
            up_id = len(new_edges)
            new_edges.append(Edge((lo_p, hi_p), GLUED))
            down_id = len(new_edges)
            new_edges.append(Edge((hi_p, lo_p), GLUED))
            gluings.append(Gluing(up_id, down_id, IDENTITY_MAP, True))
            right_side[L[0]].append(up_id)
            left_side[R[0]].append(down_id)
            continue
        if L:
            if not U:
                raise DiagramError("face boundary is inconsistent with its interior")
            right_side[L[0]].append(piece_at[(lo_p, hi_p)])
        elif U:
            raise DiagramError("face boundary is inconsistent with its interior")
        if R:
            if not D:
                raise DiagramError("face boundary is inconsistent with its interior")
            left_side[R[0]].append(piece_at[(hi_p, lo_p)])
        elif D:
            raise DiagramError("face boundary is inconsistent with its interior")
    out = {}
    for ti, ids in right_side.items():
        out[(ti, "right")] = ids
    for ti, ids in left_side.items():
        out[(ti, "left")] = list(reversed(ids))
    return out
