import pytest
from hypothesis import given, strategies as st

from clusteradd.functions import ClusterFunction, Window
from clusteradd.hammocks import DynkinStructure
from clusteradd.laws import (
    FactCounts,
    LawError,
    TypeAGrid,
    elementary_facts,
    negative_neighbor,
    rectangle_check,
    rectangle_instances,
    run_laws,
    wing_check,
    wing_instances,
)
from clusteradd.quiver import ZVertex as Z, preset, sectional_path_count
from clusteradd.tilting import TiltingSet, d_T

ORIENTATIONS = ["linear", "reverse", "alternating", "<><"]


def test_grid_matches_arrows():
    for o in ORIENTATIONS:
        q = preset("A4", o)
        g = TypeAGrid(q)
        for v in Window.levels(q, -2, 2).vertices(q):
            u, r = g.to_grid(v)
            assert g.to_vertex((u, r)) == v
            assert g.to_grid(v.tau()) == (u - 2, r)
            from clusteradd.quiver import successors

            assert {g.to_grid(w) for w, _ in successors(v, q)} == {
                (u + 1, r + d) for d in (-1, 1) if 1 <= r + d <= q.n
            }


def test_grid_needs_type_a():
    with pytest.raises(LawError):
        TypeAGrid(preset("D4"))


def test_base_case_on_a3():
    q = preset("A3")
    g = TypeAGrid(q)
    f = ClusterFunction.from_values(q, 0, {"1": 2, "2": -1, "3": 1})
    x = g.to_vertex((2 * 0 + g.offset[2], 2))
    assert f(x) <= 0
    rep = rectangle_check(f, x, 1, 1, "basic", g)
    u, r = g.to_grid(x)
    a1, b1 = g.to_vertex((u + 1, r - 1)), g.to_vertex((u + 1, r + 1))
    assert rep.observed == max(f(a1), 0) + max(f(b1), 0) - f(x)
    assert rep.passed


def test_zero_function_passes():
    q = preset("A4")
    f = ClusterFunction.zero(q)
    reps = list(rectangle_instances(f, TypeAGrid(q), range(-2, 3)))
    assert reps and all(r.passed and r.observed == 0 for r in reps)


def test_rectangle_preconditions():
    q = preset("A3")
    f = ClusterFunction.from_values(q, 0, {"1": 1, "2": 0, "3": 0})
    with pytest.raises(LawError):
        rectangle_check(f, Z("1", 0), 1, 1)
    with pytest.raises(LawError):
        rectangle_check(f, Z("2", 0), 2, 1)
    with pytest.raises(LawError):
        rectangle_check(f, Z("2", 0), 1, 1, "sideways")


def test_wing_t1_reduces_to_single_value():
    q = preset("A4")
    g = TypeAGrid(q)
    for vals in ([0, -1, 2, 0], [-1, 0, 1, 1], [1, 1, -2, 0]):
        f = ClusterFunction.from_values(q, 0, dict(zip(q.vertices, vals)))
        for rep in wing_instances(f, g, range(-3, 4)):
            if rep.skipped or rep.coordinates["t"] != 1:
                continue
            assert rep.passed
            assert rep.expected == -f(Z(*_p(rep, g)))


def _p(rep, g):
    # p[s+1] for the reported instance
    tr = g.frame(rep.coordinates["mirror"], rep.coordinates["direction"])
    u, _ = tr(g.to_grid(rep.coordinates["p"]))
    s = rep.coordinates["s"]
    v = g.to_vertex(tr((u + s, 1 + s)))
    return v.base, v.level


def test_wing_on_hammocks():
    q = preset("A3")
    st = DynkinStructure(q)
    g = TypeAGrid(q)
    seen = 0
    for x in st.domain_vertices():
        for rep in wing_instances(st.cluster_hammock(x), g, range(-3, 4)):
            if not rep.skipped:
                seen += 1
                assert rep.passed, rep
    assert seen > 0


def test_wing_preconditions():
    q = preset("A3")
    f = ClusterFunction.zero(q)
    with pytest.raises(LawError):
        wing_check(f, Z("2", 0), 0, 1)
    with pytest.raises(LawError):
        wing_check(f, Z("1", 0), 2, 1)


@pytest.mark.parametrize("law", ["rectangle", "wing"])
@pytest.mark.parametrize("orientation", ORIENTATIONS)
def test_law_runs(law, orientation):
    run = run_laws(preset("A4", orientation), law, 40, seed=11)
    assert run.failed == 0 and run.checked > 0
    assert run.summary().startswith(f"law={law} trials=40")


def test_law_runs_are_seeded():
    a = run_laws(preset("A3"), "wing", 10, seed=5)
    b = run_laws(preset("A3"), "wing", 10, seed=5)
    assert (a.checked, a.skipped) == (b.checked, b.skipped)


def test_negative_neighbor_examples(a2):
    st = DynkinStructure(a2)
    dt = d_T(TiltingSet((Z("1", 0), Z("2", 0))), st)
    assert negative_neighbor(dt, Z("1", 0)) == Z("2", 0)
    h = st.cluster_hammock(Z("1", 0))
    z2 = negative_neighbor(h, Z("1", 0))
    assert z2 != Z("1", 0) and h(z2) <= 0
    assert sectional_path_count(Z("1", 0), z2, a2) or sectional_path_count(z2, Z("1", 0), a2)
    with pytest.raises(LawError):
        negative_neighbor(ClusterFunction.zero(preset("A1")), Z("1", 0))
    with pytest.raises(LawError):
        negative_neighbor(ClusterFunction.from_values(a2, 0, {"1": 1, "2": 0}), Z("1", 0))


@given(vals=st.lists(st.integers(-3, 3), min_size=4, max_size=4), level=st.integers(-4, 4), k=st.integers(0, 3))
def test_negative_neighbor_exists(vals, level, k):
    q = preset("A4", "alternating")
    f = ClusterFunction.from_values(q, 0, dict(zip(q.vertices, vals)))
    z = Z(q.vertices[k], level)
    if f(z) > 0:
        return
    z2 = negative_neighbor(f, z)
    assert z2 != z and f(z2) <= 0
    assert sectional_path_count(z, z2, q) or sectional_path_count(z2, z, q)


def test_elementary_facts_on_small_corpus():
    q = preset("A3")
    st = DynkinStructure(q)
    w = st.domain_window(0, 2)
    counts = FactCounts()
    for a in range(-2, 3):
        for b in range(-2, 3):
            f = ClusterFunction.from_values(q, 0, {"1": a, "2": b, "3": a - b})
            elementary_facts(f, w, st, counts)
    assert counts.exceptions == []
    assert counts.nonneg_additive > 0 and counts.tau_bound > 0 and counts.one_signed_zero >= 1
