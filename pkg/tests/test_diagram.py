import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import L, S
from foldbase.builders import build_genus_domain, build_loop, build_plug
from foldbase.diagram import (
    GLUED,
    DiagramError,
    Edge,
    Gluing,
    GluingDiagram,
    PolygonalDiagram,
    boundary_lists,
    identification_complex,
    is_embedded_with_folds,
    loop_slopes,
    monodromy_of_gluing,
    realizes,
    total_turning,
    trace_boundaries,
    transform_diagram,
    validate_base,
)
from foldbase.lattice_core import IntegralAffineMap, mat_mul
from foldbase.orbit_space import CyclicSlopeList, is_right_polygonal, positive_turning

IDENT = ((1, 0), (0, 1))


def loop(*pts):
    n = len(pts)
    edges = tuple(Edge((pts[i], pts[(i + 1) % n])) for i in range(n))
    return PolygonalDiagram(edges, (tuple(range(n)),))


def square_torus():
    edges = (
        Edge(((0, 0), (1, 0)), GLUED),
        Edge(((1, 0), (1, 1)), GLUED),
        Edge(((1, 1), (0, 1)), GLUED),
        Edge(((0, 1), (0, 0)), GLUED),
    )
    gl = (
        Gluing(0, 2, IntegralAffineMap(IDENT, (0, 1))),
        Gluing(1, 3, IntegralAffineMap(IDENT, (-1, 0))),
    )
    return GluingDiagram(PolygonalDiagram(edges, ((0, 1, 2, 3),)), gl)


TRIANGLE = loop((0, 0), (1, 0), (0, 1))


def test_edge_chain_must_reverse_at_folds():
    with pytest.raises(DiagramError):
        Edge(((0, 0), (1, 0), (2, 0)))
    with pytest.raises(DiagramError):
        Edge(((0, 0), (1, 0), (1, 1)))
    e = Edge(((0, 0), (2, 0), (1, 0)))
    assert e.fold_points == ((2, 0),)


def test_loop_must_close():
    with pytest.raises(DiagramError, match="not closed"):
        PolygonalDiagram((Edge(((0, 0), (1, 0))), Edge(((1, 0), (0, 1)))), ((0, 1),))


def test_total_turning_examples():
    assert total_turning(TRIANGLE) == 2
    assert total_turning(build_loop(L("0 -1 inf 1"))) == 2
    cw_square = loop((0, 0), (0, 1), (1, 1), (1, 0))
    with pytest.raises(DiagramError, match="non-CCW vertex turn"):
        total_turning(cw_square)


def test_is_embedded_with_folds_examples():
    assert is_embedded_with_folds(TRIANGLE)
    assert not is_embedded_with_folds(loop((0, 0), (1, 1), (1, 0), (0, 1)))
    one_fold = PolygonalDiagram((Edge(((0, 0), (1, 0), (0, 0))),), ((0,),))
    assert is_embedded_with_folds(one_fold)
    assert len(one_fold.folds) == 1


def test_realizes_examples():
    assert realizes(TRIANGLE, L("0 -1 inf"))
    assert not realizes(TRIANGLE, L("0 inf -1"))
    assert realizes(TRIANGLE, L("-1 inf 0"))
    assert CyclicSlopeList(loop_slopes(TRIANGLE)) == CyclicSlopeList(L("0 -1 inf"))


def test_validate_base_examples():
    rep = validate_base(TRIANGLE)
    assert rep.valid and rep.fold_count == 0
    quad = loop((0, 0), (2, 0), (3, 2), (1, 2))
    rep = validate_base(quad)
    assert not rep.valid
    assert any("non-unimodular vertex" in e for e in rep.entries)
    rep = validate_base(build_loop(L("inf 0 -1 -2")))
    assert rep.valid and rep.fold_count == 1


def test_monodromy_examples():
    assert monodromy_of_gluing(square_torus()).trivial
    assert monodromy_of_gluing(TRIANGLE).trivial
    assert monodromy_of_gluing(TRIANGLE).generators == ()


def test_inconsistent_gluing_is_reported():
    t = square_torus()
    bad = GluingDiagram(t.domain, (Gluing(0, 2, IntegralAffineMap(IDENT, (0, 2))),))
    with pytest.raises(DiagramError, match="inconsistent gluing"):
        monodromy_of_gluing(bad)
    assert not validate_base(bad).valid


def test_edge_in_two_gluings_is_rejected():
    t = square_torus()
    g = t.gluings[0]
    bad = GluingDiagram(t.domain, (g, Gluing(2, 1, g.map)))
    assert any("more than one" in e for e in validate_base(bad).entries)


def test_square_torus_complex():
    cx = identification_complex(square_torus())
    assert (cx.euler, cx.genus, cx.boundary_components, cx.end_components) == (0, 1, 0, 0)
    assert validate_base(square_torus()).valid


def test_boundary_lists_read_back():
    assert boundary_lists(TRIANGLE) == [CyclicSlopeList(L("0 -1 inf"))]
    plug = build_plug(1, L("0"))
    kinds = sorted(c.kind for c in trace_boundaries(plug))
    assert kinds == ["boundary", "end"]


def test_genus_domains_have_expected_euler_characteristic():
    for g, k in [(1, 1), (2, 2), (1, 3), (3, 1)]:
        cx = identification_complex(build_genus_domain(g, k))
        assert cx.euler == 2 - 2 * g - k
        assert (cx.genus, cx.end_components) == (g, k)


POOL = [S(t) for t in ["0", "1", "-1", "2", "-2", "1/2", "-1/2", "inf"]]
LOOP_LISTS = [
    lst
    for n in range(2, 6)
    for lst in itertools.product(POOL, repeat=n)
    if is_right_polygonal(lst) and positive_turning(lst) >= 2 and lst[0] == POOL[0]
]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(LOOP_LISTS))
def test_turning_identity_on_built_loops(lst):
    d = build_loop(lst)
    assert is_embedded_with_folds(d)
    assert realizes(d, lst)
    assert total_turning(d) == positive_turning(lst) - len(d.folds)
    assert total_turning(d) == 2


GENS = (((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, -1), (1, 0)))


def _word(idx):
    m = IDENT
    for i in idx:
        m = mat_mul(m, GENS[i])
    return m


affine_maps = st.builds(
    lambda idx, bx, by: IntegralAffineMap(_word(idx), (bx, by)),
    st.lists(st.integers(0, 3), max_size=6),
    st.fractions(min_value=-50, max_value=50, max_denominator=8),
    st.fractions(min_value=-50, max_value=50, max_denominator=8),
)

FIXED_DIAGRAMS = [
    TRIANGLE,
    loop((0, 0), (2, 0), (3, 2), (1, 2)),
    build_loop(L("inf 0 -1 -2")),
    square_torus(),
    build_plug(1, L("0")),
]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(len(FIXED_DIAGRAMS))), affine_maps)
def test_validate_base_is_affine_invariant(i, f):
    d = FIXED_DIAGRAMS[i]
    before = validate_base(d)
    after = validate_base(transform_diagram(d, f))
    assert before.valid == after.valid
    assert before.fold_count == after.fold_count
    assert len(before.entries) == len(after.entries)


def test_fold_points_are_rational():
    d = build_loop(L("inf 0 -1 -2"))
    for _, p in d.folds:
        assert all(isinstance(c, Fraction) for c in p)
