"""Text formats, SVG rendering and the command-line interface."""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import (
    END,
    GLUED,
    DiagramError,
    Edge,
    Gluing,
    GluingDiagram,
    PolygonalDiagram,
    validate_base,
)
from .lattice_core import IntegralAffineMap, lattice_det, direction_vector, reduce_slope
from .orbit_space import WeightedOrbitSpace, orbit_space_summary, positive_turning, turning_float

FORMAT_VERSION = 1


class ParseError(ValueError):
    """A syntax or semantic error located at a 1-based line and column."""

    def __init__(self, message, line, column=None):
        self.message = message
        self.line = line
        self.column = column
        if column is None:
            text = "%s at line %d" % (message, line)
        else:
            text = "line %d, column %d: %s" % (line, column, message)
        super().__init__(text)


# ------------------------------------------------------- orbit spaces

MATRIX_RE = re.compile(r"\[\s*(-?\d+)\s+(-?\d+)\s*;\s*(-?\d+)\s+(-?\d+)\s*\]")


def parse_slope(token):
    """Slope from `inf`, an integer or `p/q`."""
    if token == "inf":
        return reduce_slope(1, 0)
    if not re.fullmatch(r"-?\d+(/\d+)?", token):
        raise ValueError("bad slope token %r" % token)
    if "/" in token:
        p, q = token.split("/")
        if int(q) == 0:
            raise ValueError("bad slope token %r" % token)
        return reduce_slope(int(p), int(q))
    return reduce_slope(int(token), 1)


def parse_matrix(text):
    m = MATRIX_RE.fullmatch(text.strip())
    if not m:
        raise ValueError("bad matrix %r" % text)
    a, b, c, d = (int(v) for v in m.groups())
    return ((a, b), (c, d))


def format_matrix(m):
    return "[%d %d; %d %d]" % (m[0][0], m[0][1], m[1][0], m[1][1])


@dataclass
class OrbitSpaceDocument:
    genus: int = 0
    boundaries: list = field(default_factory=list)
    monodromy: list = field(default_factory=list)
    comments: list = field(default_factory=list)  # comment texts, in file order

    @property
    def space(self):
        return WeightedOrbitSpace(self.genus, tuple(tuple(b) for b in self.boundaries))


def _tokens(text, start):
    """Whitespace separated tokens with their 1-based columns."""
    for m in re.finditer(r"\S+", text):
        yield m.group(), start + m.start() + 1


def parse_document(text):
    doc = OrbitSpaceDocument()
    seen_genus = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw
        if "#" in line:
            cut = line.index("#")
            doc.comments.append(line[cut:])
            line = line[:cut]
        if not line.strip():
            continue
        stripped = line.lstrip()
        col0 = len(line) - len(stripped)
        if stripped.startswith("genus"):
            rest = stripped[len("genus"):]
            toks = list(_tokens(rest, col0 + len("genus")))
            if seen_genus:
                raise ParseError("repeated genus line", ln, col0 + 1)
            if len(toks) != 1 or not re.fullmatch(r"\d+", toks[0][0]):
                col = toks[0][1] if toks else len(line) + 1
                raise ParseError("expected a nonnegative integer genus", ln, col)
            doc.genus = int(toks[0][0])
            seen_genus = True
        elif stripped.startswith("boundary:"):
            rest = stripped[len("boundary:"):]
            slopes = []
            for tok, col in _tokens(rest, col0 + len("boundary:")):
                try:
                    slopes.append(parse_slope(tok))
                except ValueError:
                    raise ParseError("bad slope token %r" % tok, ln, col) from None
            if not slopes:
                raise ParseError("empty boundary", ln, len(line) + 1)
            n = len(slopes)
            if n > 1:
                for i in range(n):
                    a, b = slopes[i], slopes[(i + 1) % n]
                    if abs(lattice_det(direction_vector(a), direction_vector(b))) != 1:
                        raise ParseError("non-unimodular pair (%s, %s)" % (a, b), ln)
            doc.boundaries.append(slopes)
        elif stripped.startswith("monodromy:"):
            rest = stripped[len("monodromy:"):]
            base = col0 + len("monodromy:")
            pos = 0
            mats = []
            while True:
                while pos < len(rest) and rest[pos].isspace():
                    pos += 1
                if pos == len(rest):
                    break
                m = MATRIX_RE.match(rest, pos)
                if not m:
                    raise ParseError("bad matrix", ln, base + pos + 1)
                mat = parse_matrix(m.group())
                if abs(mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]) != 1:
                    raise ParseError("matrix is not unimodular", ln, base + pos + 1)
                mats.append(mat)
                pos = m.end()
            doc.monodromy.append(mats)
        else:
            word = stripped.split()[0]
            raise ParseError("unknown keyword %r" % word, ln, col0 + 1)
    try:
        doc.space
    except ValueError as exc:
        raise ParseError(str(exc), len(text.splitlines()) or 1) from None
    return doc


def parse_orbit_space(text):
    return parse_document(text).space


def serialize_document(doc):
    lines = ["genus %d" % doc.genus]
    for b in doc.boundaries:
        lines.append("boundary: " + " ".join(str(s) for s in b))
    for ms in doc.monodromy:
        lines.append("monodromy: " + " ".join(format_matrix(m) for m in ms))
    lines.extend(doc.comments)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------- diagrams


def _q(x):
    return str(Fraction(x))


def _point(p):
    return [_q(p[0]), _q(p[1])]


def serialize_diagram(d):
    is_gluing = isinstance(d, GluingDiagram)
    dom = d.domain if is_gluing else d
    doc = {
        "format": "foldbase-diagram",
        "version": FORMAT_VERSION,
        "type": "gluing" if is_gluing else "polygonal",
        "edges": [{"kind": e.kind, "chain": [_point(p) for p in e.chain]} for e in dom.edges],
        "loops": [list(lp) for lp in dom.loops],
        "faces": [list(f) for f in dom.faces],
        "path": list(dom.path) if dom.path is not None else None,
    }
    if is_gluing:
        doc["gluings"] = [
            {
                "source": g.source,
                "target": g.target,
                "linear": [list(r) for r in g.map.linear],
                "translation": _point(g.map.translation),
                "seam": g.seam,
            }
            for g in d.gluings
        ]
        doc["labels"] = [[k, v] for k, v in d.labels]
    return json.dumps(doc, indent=1) + "\n"


def parse_diagram(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        if exc.pos >= len(text.rstrip()):
            raise ParseError("unexpected end of document", exc.lineno, exc.colno) from None
        raise ParseError("malformed document: %s" % exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or doc.get("format") != "foldbase-diagram":
        raise ParseError("not a diagram document", 1, 1)
    if doc.get("version") != FORMAT_VERSION:
        raise ParseError("unsupported version %r" % doc.get("version"), 1, 1)
    try:
        edges = tuple(
            Edge(tuple((Fraction(x), Fraction(y)) for x, y in e["chain"]), e["kind"])
            for e in doc["edges"]
        )
        path = doc.get("path")
        dom = PolygonalDiagram(
            edges,
            tuple(tuple(lp) for lp in doc["loops"]),
            tuple(tuple(f) for f in doc["faces"]),
            tuple(path) if path is not None else None,
        )
        if doc["type"] == "polygonal":
            return dom
        gluings = tuple(
            Gluing(
                g["source"],
                g["target"],
                IntegralAffineMap(g["linear"], tuple(Fraction(t) for t in g["translation"])),
                g.get("seam", False),
            )
            for g in doc["gluings"]
        )
        labels = tuple((k, v) for k, v in doc.get("labels", []))
        return GluingDiagram(dom, gluings, labels)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("malformed document: %s" % exc, 1, 1) from None


# ---------------------------------------------------------------- SVG


@dataclass(frozen=True)
class SvgStyle:
    size: int = 480
    margin: int = 24
    fold_offset: float = 0.02  # fraction of the diagram diameter
    stroke: float = 1.5
    labels: bool = True


def _fmt(v):
    s = "%.3f" % v
    return "0.000" if s == "-0.000" else s


def render_svg(d, style=None):
    """Deterministic SVG drawing of a diagram."""
    style = style or SvgStyle()
    is_gluing = isinstance(d, GluingDiagram)
    dom = d.domain if is_gluing else d
    pts = [p for e in dom.edges for p in e.chain]
    if not pts:
        pts = [(Fraction(0), Fraction(0))]
    x0 = float(min(p[0] for p in pts))
    x1 = float(max(p[0] for p in pts))
    y0 = float(min(p[1] for p in pts))
    y1 = float(max(p[1] for p in pts))
    diam = max(x1 - x0, y1 - y0) or 1.0
    k = (style.size - 2 * style.margin) / diam
    off = style.fold_offset * diam
    w = (x1 - x0) * k + 2 * style.margin
    h = (y1 - y0) * k + 2 * style.margin

    def X(x):
        return style.margin + (x - x0) * k

    def Y(y):
        return style.margin + (y1 - y) * k

    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" viewBox="0 0 %s %s">'
        % (_fmt(w), _fmt(h), _fmt(w), _fmt(h))
    ]
    source_map = {}
    if is_gluing:
        for g in d.gluings:
            source_map[g.source] = g
    for i, e in enumerate(dom.edges):
        segs = e.segments
        m = len(segs)
        for j, (a, b) in enumerate(segs):
            ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
            if m > 1:
                # spread the overlapping segments of a folded edge into parallel lines
                tx, ty = (float(v) for v in e.tangent)
                n = (tx * tx + ty * ty) ** 0.5
                t = (j - (m - 1) / 2) * off
                ox, oy = -ty / n * t, tx / n * t
                ax, ay, bx, by = ax + ox, ay + oy, bx + ox, by + oy
            attrs = 'stroke="black" stroke-width="%s"' % _fmt(style.stroke)
            if e.kind == GLUED:
                attrs = 'stroke="#1f5fbf" stroke-width="%s" stroke-dasharray="6 4"' % _fmt(style.stroke)
            elif e.kind == END:
                attrs = 'stroke="#888888" stroke-width="%s" stroke-dasharray="2 3"' % _fmt(style.stroke)
            out.append(
                '<line x1="%s" y1="%s" x2="%s" y2="%s" %s/>'
                % (_fmt(X(ax)), _fmt(Y(ay)), _fmt(X(bx)), _fmt(Y(by)), attrs)
            )
    r = max(2.0, 1.5 * style.stroke)
    for i, e in enumerate(dom.edges):
        for p in e.fold_points:
            out.append(
                '<circle cx="%s" cy="%s" r="%s" fill="white" stroke="black" stroke-width="1.000"/>'
                % (_fmt(X(float(p[0]))), _fmt(Y(float(p[1]))), _fmt(r))
            )
    if is_gluing and style.labels:
        for g in d.gluings:
            for idx in (g.source, g.target):
                e = dom.edges[idx]
                mx = float(e.start[0] + e.end[0]) / 2
                my = float(e.start[1] + e.end[1]) / 2
                out.append(
                    '<text x="%s" y="%s" font-size="10" fill="#1f5fbf">%s</text>'
                    % (_fmt(X(mx)), _fmt(Y(my)), format_matrix(g.map.linear))
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- CLI

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _slope_list(text):
    return [parse_slope(t) for t in text.replace(",", " ").split()]


def _is_diagram_text(text):
    return text.lstrip().startswith("{")


def _cmd_check(args):
    text = _read(args.file)
    if _is_diagram_text(text):
        rep = validate_base(parse_diagram(text))
        print(rep)
        return EXIT_YES if rep.valid else EXIT_NO
    try:
        doc = parse_document(text)
    except ParseError as exc:
        print("invalid: %s" % exc)
        return EXIT_NO if exc.column is None else EXIT_ERROR
    s = orbit_space_summary(doc.space)
    print("valid: genus %d, %d boundary components, euler %d" % (doc.genus, len(doc.boundaries), s.euler))
    print("total turning %dπ, max turning %dπ, vertices %d" % (s.total_turning, s.max_turning, s.vertices))
    return EXIT_YES


def _cmd_turning(args):
    b = parse_orbit_space(_read(args.file))
    for i, L in enumerate(b.boundaries):
        k = positive_turning(L)
        print("boundary %d: %dπ (float %.12f π)" % (i, k, turning_float(L) / 3.141592653589793))
    return EXIT_YES


def _disk_list(b):
    if b.genus != 0 or b.k != 1:
        raise ValueError("classification needs a disk (genus 0, one boundary)")
    return b.boundaries[0]


def _cmd_classify(args):
    from .classify import classify_simply_connected

    res = classify_simply_connected(_disk_list(parse_orbit_space(_read(args.file))))
    print(res)
    return EXIT_UNKNOWN if res.kind == "Unknown" else EXIT_YES


def _cmd_invariants(args):
    from .classify import invariants

    rep = invariants(parse_orbit_space(_read(args.file)))
    print("chi(X) = %d" % rep.chi_total_space)
    print("|Z| = %d" % rep.vanishing_components)
    if rep.b2_plus is not None:
        print("b2+ = %d" % rep.b2_plus)
    print("turning per boundary: %s" % " ".join("%dπ" % t for t in rep.turning_per_boundary))
    return EXIT_YES


def _cmd_decide(args):
    from .classify import YES, UNKNOWN, decide_hamiltonian, decide_locally_hamiltonian

    b = parse_orbit_space(_read(args.file))
    if args.which == "hamiltonian":
        dec = decide_hamiltonian(b)
    else:
        dec = decide_locally_hamiltonian(b)
    print(dec)
    if dec.answer == YES and args.which == "hamiltonian" and args.output:
        _write(args.output, serialize_diagram(dec.value))
    if dec.answer == YES:
        return EXIT_YES
    return EXIT_UNKNOWN if dec.answer == UNKNOWN else EXIT_NO


def _build(args):
    from . import builders as B

    kind, rest = args.kind, args.args
    if kind == "loop":
        return B.build_loop(_slope_list(" ".join(rest)))
    if kind == "path":
        if args.target is None:
            raise ValueError("build path needs --target X,Y")
        tx, ty = (Fraction(v) for v in args.target.split(","))
        return B.build_path(_slope_list(" ".join(rest)), (tx, ty))
    if kind == "plug":
        return B.build_plug(int(rest[0]), _slope_list(" ".join(rest[1:])))
    if kind == "annulus":
        if len(rest) == 1 and len(_slope_list(rest[0])) == 1:
            return B.build_annulus("parallel", _slope_list(rest[0])[0])
        if len(rest) != 2:
            raise ValueError("build annulus takes one slope or two comma separated lists")
        return B.build_annulus("nonparallel", _slope_list(rest[0]), _slope_list(rest[1]))
    if kind == "punctured-disk":
        s = _slope_list(" ".join(rest))
        if len(s) != 3:
            raise ValueError("build punctured-disk takes three slopes")
        return B.build_punctured_disk(*s)
    if kind == "genus":
        return B.build_genus_domain(int(rest[0]), int(rest[1]))
    if kind == "base":
        return B.build_base(parse_orbit_space(_read(rest[0])))
    if kind == "monodromy":
        mats = []
        for r in rest:
            try:
                mats.append(parse_matrix(r))
            except ValueError:
                doc = parse_document(_read(r))
                for ms in doc.monodromy:
                    mats.extend(ms)
        return B.build_monodromy_diagram(mats)
    if kind == "family":
        return B.build_family_example(int(rest[0]))
    raise ValueError("unknown build kind %r" % kind)


def _cmd_build(args):
    d = _build(args)
    _write(args.output, serialize_diagram(d))
    rep = validate_base(d)
    print(rep, file=sys.stderr)
    return EXIT_YES


def _cmd_render(args):
    d = parse_diagram(_read(args.file))
    _write(args.output, render_svg(d, SvgStyle(fold_offset=args.fold_offset)))
    return EXIT_YES


def _cmd_census(args):
    from .classify import enumerate_census

    rows = enumerate_census(args.max_len, args.slope_bound, args.min_turning)
    for row in rows:
        rep = row.report
        z = "-" if rep is None else str(rep.vanishing_components)
        b2 = "-" if rep is None or rep.b2_plus is None else str(rep.b2_plus)
        print(
            "%-28s turning %dπ  |Z| %s  b2+ %s  %s  (orbit of %d)"
            % (" ".join(str(s) for s in row.slopes), positive_turning(row.slopes), z, b2,
               row.classification, row.orbit_size)
        )
    print("%d orbits" % len(rows))
    return EXIT_YES


def _cmd_verify(args):
    from .local_models import verify_models

    ok = True
    for name, (passed, detail) in verify_models(args.samples, args.seed).items():
        ok = ok and passed
        print("%s %s: %s" % ("PASS" if passed else "FAIL", name, detail))
    return EXIT_YES if ok else EXIT_NO


def build_parser():
    p = argparse.ArgumentParser(prog="foldbase", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate an orbit space or a diagram file")
    s.add_argument("file")
    s.set_defaults(func=_cmd_check)

    s = sub.add_parser("turning", help="positive turning of each boundary")
    s.add_argument("file")
    s.set_defaults(func=_cmd_turning)

    s = sub.add_parser("classify", help="diffeomorphism type for a disk orbit space")
    s.add_argument("file")
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("invariants", help="Euler characteristic, |Z| and b2+")
    s.add_argument("file")
    s.set_defaults(func=_cmd_invariants)

    s = sub.add_parser("decide", help="existence of (locally) Hamiltonian structures")
    s.add_argument("which", choices=["hamiltonian", "locally-hamiltonian"])
    s.add_argument("file")
    s.add_argument("-o", "--output", help="write the witness diagram here")
    s.set_defaults(func=_cmd_decide)

    s = sub.add_parser("build", help="construct a diagram")
    s.add_argument(
        "kind",
        choices=["loop", "path", "plug", "annulus", "punctured-disk", "genus", "base", "monodromy", "family"],
    )
    s.add_argument("args", nargs="*")
    s.add_argument("--target", help="path end point X,Y")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=_cmd_build)

    s = sub.add_parser("render", help="draw a diagram as SVG")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--fold-offset", type=float, default=SvgStyle.fold_offset)
    s.set_defaults(func=_cmd_render)

    s = sub.add_parser("census", help="enumerate disk orbit spaces")
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--slope-bound", type=int, default=1)
    s.add_argument("--min-turning", type=int, default=2)
    s.set_defaults(func=_cmd_census)

    s = sub.add_parser("verify-models", help="numerical checks of the local models")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DiagramError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
