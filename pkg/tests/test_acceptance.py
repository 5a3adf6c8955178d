"""The eleven acceptance criteria, one test each, with a PASS/FAIL summary line."""

import itertools
import math
import random
import time
from pathlib import Path

import numpy as np

from conftest import L, S
from helpers import float_turning, random_unimodular, random_walk_list
from foldbase.builders import (
    build_family_example,
    build_genus_domain,
    build_loop,
    build_monodromy_diagram,
    check_monodromy_conditions,
    diagram_vertex_count,
)
from foldbase.classify import (
    classify_simply_connected,
    decide_locally_hamiltonian,
    enumerate_census,
    invariants,
)
from foldbase.cli_io import (
    parse_diagram,
    parse_document,
    render_svg,
    serialize_diagram,
    serialize_document,
)
from foldbase.diagram import (
    identification_complex,
    is_embedded_with_folds,
    monodromy_of_gluing,
    realizes,
    total_turning,
    validate_base,
)
from foldbase.geometry import cross, sub
from foldbase.local_models import (
    LocalModelPoint,
    _jacobian2,
    dpdq_residual,
    fold_chart,
    omega1_suite,
)
from foldbase.orbit_space import (
    WeightedOrbitSpace,
    is_right_polygonal,
    positive_turning,
)

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDENS = HERE / "goldens"


def _disk(text):
    return WeightedOrbitSpace(0, (L(text),))


def _convex_without_folds(d):
    pts = d.loop_points(0)
    n = len(pts)
    turns = [cross(sub(pts[i], pts[i - 1]), sub(pts[(i + 1) % n], pts[i])) for i in range(n)]
    return not d.folds and all(t > 0 for t in turns)


def test_criterion_01_cp2(record_criterion):
    t0 = time.perf_counter()
    slopes = L("0 -1 inf")
    rep = invariants(_disk("0 -1 inf"))
    cls = classify_simply_connected(slopes)
    d = build_loop(slopes)
    got = (
        positive_turning(slopes),
        rep.chi_total_space,
        rep.vanishing_components,
        rep.b2_plus,
        str(cls),
        len(d.edges),
        _convex_without_folds(d),
    )
    elapsed = time.perf_counter() - t0
    ok = got == (2, 3, 0, 1, "CP2", 3, True) and elapsed < 1
    record_criterion(1, ok, "CP2 fixture %s in %.3f s" % (got, elapsed))
    assert got == (2, 3, 0, 1, "CP2", 3, True)
    assert elapsed < 1


def test_criterion_02_cp2_sharp_cp2(record_criterion):
    t0 = time.perf_counter()
    slopes = L("inf 0 -1 -2")
    rep = invariants(_disk("inf 0 -1 -2"))
    got = (
        is_right_polygonal(slopes),
        positive_turning(slopes),
        rep.vanishing_components,
        rep.chi_total_space,
        rep.b2_plus,
        str(classify_simply_connected(slopes)),
    )
    elapsed = time.perf_counter() - t0
    want = (True, 3, 1, 4, 2, "CP2 # CP2")
    record_criterion(2, got == want and elapsed < 1, "(inf,0,-1,-2) %s in %.3f s" % (got, elapsed))
    assert got == want
    assert elapsed < 1


def test_criterion_03_turning_oracle(record_criterion):
    t0 = time.perf_counter()
    rng = random.Random(20261016)
    worst = 0.0
    for _ in range(1000):
        slopes = random_walk_list(rng, rng.randint(2, 9))
        assert is_right_polygonal(slopes)
        worst = max(worst, abs(positive_turning(slopes) - float_turning(slopes)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 5
    record_criterion(3, ok, "max |k - sum/pi| = %.2e over 1000 lists in %.2f s" % (worst, elapsed))
    assert worst < 1e-9
    assert elapsed < 5


SWEEP = ["0", "1", "-1", "2", "-2", "1/2", "-1/2", "inf"]


def test_criterion_04_loop_sweep(record_criterion):
    t0 = time.perf_counter()
    slopes = [S(t) for t in SWEEP]
    count = 0
    failures = []
    for n in range(2, 7):
        for lst in itertools.product(slopes, repeat=n):
            if not is_right_polygonal(lst):
                continue
            k = positive_turning(lst)
            if k < 2:
                continue
            count += 1
            try:
                d = build_loop(lst)
                good = (
                    is_embedded_with_folds(d)
                    and realizes(d, lst)
                    and len(d.folds) == k - 2
                    and total_turning(d) == 2
                )
            except ValueError as exc:
                good = False
                lst = (lst, str(exc))
            if not good:
                failures.append(lst)
    elapsed = time.perf_counter() - t0
    ok = not failures and count >= 300 and elapsed < 60
    record_criterion(4, ok, "%d lists, %d failures, %.1f s" % (count, len(failures), elapsed))
    assert not failures, failures[:5]
    assert count >= 300
    assert elapsed < 60


DECISION_TABLE = [
    # genus, boundary lists, answer, clause, |Z|
    (1, [], "Yes", "1", 0),
    (1, ["0"], "Yes", "2a", 2),
    (2, ["0 inf -1", "1"], "Yes", "2a", 9),
    (0, ["0 -1 inf"], "Yes", "2b", 0),
    (0, ["0 inf"], "No", "2b", None),
    (0, ["0 inf", "0"], "Yes", "2b", 1),
    (0, ["0"], "No", "2b", None),
    (0, ["0", "0"], "Yes", "2c", 0),
    (0, ["0", "inf"], "No", "2c", None),
    (0, ["-1", "0", "1"], "Yes", "2b", 2),
]


def test_criterion_05_decision_table(record_criterion):
    t0 = time.perf_counter()
    bad = []
    for g, lists, answer, clause, z in DECISION_TABLE:
        dec = decide_locally_hamiltonian(WeightedOrbitSpace(g, tuple(L(x) for x in lists)))
        if (dec.answer, dec.clause, dec.value) != (answer, clause, z):
            bad.append((g, lists, str(dec)))
    torus = invariants(WeightedOrbitSpace(1, ()))
    if (torus.chi_total_space, torus.vanishing_components) != (0, 0):
        bad.append(("torus invariants", torus))
    elapsed = time.perf_counter() - t0
    record_criterion(5, not bad and elapsed < 1, "%d table rows, %d mismatches, %.3f s" % (len(DECISION_TABLE), len(bad), elapsed))
    assert not bad
    assert elapsed < 1


def test_criterion_06_genus_domains(record_criterion):
    t0 = time.perf_counter()
    bad = []
    for g in (1, 2, 3):
        for k in (1, 2, 3):
            d = build_genus_domain(g, k)
            cx = identification_complex(d)
            mono = monodromy_of_gluing(d)
            if (cx.euler, cx.end_components, cx.genus, mono.trivial) != (2 - 2 * g - k, k, g, True):
                bad.append((g, k, cx, mono.trivial))
            if not validate_base(d).valid:
                bad.append((g, k, "invalid"))
    elapsed = time.perf_counter() - t0
    record_criterion(6, not bad and elapsed < 10, "9 domains, %d failures, %.2f s" % (len(bad), elapsed))
    assert not bad
    assert elapsed < 10


def test_criterion_07_monodromy_round_trip(record_criterion):
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = []
    for i in range(100):
        gens = [random_unimodular(rng) for _ in range(1 + i % 2)]
        d = build_monodromy_diagram(gens)
        got = list(monodromy_of_gluing(d).generators)
        conds = check_monodromy_conditions(d, gens)
        if got != gens or not all(conds) or not validate_base(d).valid:
            bad.append((gens, got, conds))
    elapsed = time.perf_counter() - t0
    record_criterion(7, not bad and elapsed < 30, "100 generator sets, %d failures, %.2f s" % (len(bad), elapsed))
    assert not bad, bad[:3]
    assert elapsed < 30


def test_criterion_08_family(record_criterion):
    t0 = time.perf_counter()
    got = []
    for n in range(4):
        d = build_family_example(n)
        got.append((diagram_vertex_count(d), monodromy_of_gluing(d).trivial, validate_base(d).valid))
    elapsed = time.perf_counter() - t0
    ok = got == [(1, False, True)] * 4 and elapsed < 5
    record_criterion(8, ok, "n=0..3 (V, trivial, valid) = %s, %.2f s" % (got, elapsed))
    assert got == [(1, False, True)] * 4
    assert elapsed < 5


def test_criterion_09_local_models(record_criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    ranks, wedge, selfdual, closed = set(), 0.0, 0.0, 0.0
    for _ in range(1000):
        a = rng.uniform(0, 2 * math.pi)
        x, y, z = rng.uniform(-2, 2, size=3)
        rep = omega1_suite(LocalModelPoint(a, x, y, z))
        ranks.add(rep.d_omega_rank)
        exact = 2 * (4 * z * z + x * x + y * y)
        wedge = max(wedge, abs(rep.wedge_square - exact))
        selfdual = max(selfdual, rep.selfdual_residual)
        closed = max(closed, rep.closedness_residual)
    dpdq = 0.0
    done = 0
    while done < 100:
        a = rng.uniform(0, 2 * math.pi)
        x, y, z = rng.uniform(-2, 2, size=3)
        if math.hypot(x, y) <= 0.1:
            continue
        dpdq = max(dpdq, dpdq_residual(LocalModelPoint(a, x, y, z)))
        done += 1
    jac = 0.0
    for X in np.linspace(-2, 2, 21):
        for Y in np.linspace(0.1, 2, 20):
            exact = fold_chart(X, Y).jacobian_det
            jac = max(jac, abs(_jacobian2(X, Y) - exact) / max(1.0, abs(exact)))
    elapsed = time.perf_counter() - t0
    checks = {
        "rank": ranks == {3},
        "wedge": wedge < 1e-12,
        "selfdual": selfdual < 1e-12,
        "closed": closed < 1e-6,
        "dpdq": dpdq < 1e-6,
        "fold jacobian": jac < 1e-6,
        "time": elapsed < 10,
    }
    detail = "ranks %s wedge %.1e selfdual %.1e d %.1e dpdq %.1e jac %.1e, %.2f s" % (
        sorted(ranks), wedge, selfdual, closed, dpdq, jac, elapsed)
    record_criterion(9, all(checks.values()), detail)
    assert all(checks.values()), (checks, detail)


def test_criterion_10_census_consistency(record_criterion):
    t0 = time.perf_counter()
    rows = enumerate_census(6, 2, 2)
    bad = []
    for row in rows:
        rep = row.report
        t = positive_turning(row.slopes)
        if rep is None or not rep.b2_plus == rep.vanishing_components + 1 == t - 1:
            bad.append((row.slopes, rep))
    elapsed = time.perf_counter() - t0
    ok = rows and not bad and elapsed < 60
    record_criterion(10, bool(ok), "%d census orbits, %d violations, %.2f s" % (len(rows), len(bad), elapsed))
    assert rows
    assert not bad
    assert elapsed < 60


def test_criterion_11_round_trips(record_criterion):
    t0 = time.perf_counter()
    bad = []
    orbit_files = sorted((FIXTURES / "orbit").glob("*.txt"))
    for f in orbit_files:
        doc = parse_document(f.read_text())
        if parse_document(serialize_document(doc)) != doc:
            bad.append(f.name)
    diagram_files = sorted((FIXTURES / "diagrams").glob("*.json"))
    for f in diagram_files:
        text = f.read_text()
        d = parse_diagram(text)
        if parse_diagram(serialize_diagram(d)) != d or serialize_diagram(d) != text:
            bad.append(f.name)
    goldens = sorted(GOLDENS.glob("*.svg"))
    for g in goldens:
        d = parse_diagram((FIXTURES / "diagrams" / (g.stem + ".json")).read_text())
        first, second = render_svg(d), render_svg(d)
        if first != second or first != g.read_text():
            bad.append(g.name)
    elapsed = time.perf_counter() - t0
    detail = "%d documents, %d diagrams, %d goldens, %d mismatches, %.2f s" % (
        len(orbit_files), len(diagram_files), len(goldens), len(bad), elapsed)
    ok = not bad and len(orbit_files) >= 10 and len(goldens) >= 3 and elapsed < 5
    record_criterion(11, ok, detail)
    assert not bad
    assert len(orbit_files) >= 10 and len(goldens) >= 3
    assert elapsed < 5
