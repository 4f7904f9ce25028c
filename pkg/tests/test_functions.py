import pytest
from hypothesis import given, strategies as st

from clusteradd.functions import (
    ClusterFunction,
    MismatchedQuiverError,
    ReflectionError,
    check_additive,
    check_cluster_additive,
    cluster_reflection,
    combination,
    compatible,
    difference,
    leq,
    neg_part,
    pos_part,
    sum_functions,
)
from clusteradd.hammocks import cluster_hammock
from clusteradd.quiver import Window, ZVertex as Z, all_slices, parse_quiver, preset

# values of the worked example on ZA_2, indexed along the zigzag
# (1,-1),(2,-1),(1,0),(2,0),(1,1),(2,1),(1,2)
ZIGZAG = [Z("1", -1), Z("2", -1), Z("1", 0), Z("2", 0), Z("1", 1), Z("2", 1), Z("1", 2)]
EX_F = [-1, 0, 1, 1, 0, -1, 0]
EX_G = [1, 0, -1, 0, 1, 1, 0]
EX_SUM = [0, 0, 0, 1, 1, 0, 0]


def test_parts():
    assert (pos_part(3), neg_part(3)) == (3, 0)
    assert (pos_part(-2), neg_part(-2)) == (0, 2)
    assert (pos_part(0), neg_part(0)) == (0, 0)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_positive_part_of_sum(xs):
    lhs, rhs = pos_part(sum(xs)), sum(pos_part(x) for x in xs)
    assert lhs <= rhs
    one_signed = all(x >= 0 for x in xs) or all(x <= 0 for x in xs)
    assert (lhs == rhs) == one_signed


@given(a=st.integers(-10**30, 10**30), i=st.integers(-9, 9))
def test_za1_alternates(a, i):
    f = ClusterFunction.from_values(preset("A1"), 0, {"1": a})
    assert f(Z("1", i)) == (-1) ** (i % 2) * a


def test_za2_extension(a2):
    f = ClusterFunction.from_values(a2, 0, {"1": -1, "2": 0})
    expected = {Z("1", 1): 1, Z("2", 1): 1, Z("1", 2): 0, Z("2", 2): -1, Z("1", 3): 0, Z("2", 3): 1}
    assert {v: f(v) for v in expected} == expected
    assert f(Z("1", 0)) == -1
    w = Window.levels(a2, -6, 6)
    assert check_cluster_additive(f, w, a2) == []


def test_zero_anchor(a2):
    f = ClusterFunction.zero(a2)
    assert set(f.on_window(Window.levels(a2, -4, 4)).values()) == {0}


def test_anchor_must_cover_vertices(a2):
    with pytest.raises(ValueError):
        ClusterFunction.from_values(a2, 0, {"1": 1})


def test_reflection(a2):
    out = cluster_reflection(a2, {Z("1", 0): -1, Z("2", 0): 0}, Z("1", 0))
    assert out == {Z("2", 0): 0, Z("1", 1): 1}
    assert set(cluster_reflection(a2, {Z("1", 0): 0, Z("2", 0): 0}, Z("1", 0)).values()) == {0}
    a1 = preset("A1")
    assert cluster_reflection(a1, {Z("1", 0): 4}, Z("1", 0)) == {Z("1", 1): -4}
    with pytest.raises(ReflectionError):
        cluster_reflection(a2, {Z("1", 0): 0, Z("2", 0): 0}, Z("2", 0).tau(-5))


def test_reflection_at_sink_goes_backwards(a2):
    out = cluster_reflection(a2, {Z("1", 0): -1, Z("2", 0): 0}, Z("2", 0))
    f = ClusterFunction.from_values(a2, 0, {"1": -1, "2": 0})
    assert out == {Z("1", 0): -1, Z("2", -1): f(Z("2", -1))}


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_extension_independent_of_slice(name):
    q = preset(name)
    f = ClusterFunction.from_values(q, 0, {b: k - 1 for k, b in enumerate(q.vertices)})
    w = Window.levels(q, -6, 6)
    for levels in all_slices(q, range(-2, 3)):
        g = ClusterFunction.from_slice(q, f.on_slice(levels))
        assert g.on_window(w) == f.on_window(w)


def _example_table(vals):
    return dict(zip(ZIGZAG, vals))


def test_worked_example(a2):
    w = Window.spanning(ZIGZAG)
    f, g = _example_table(EX_F), _example_table(EX_G)
    assert check_cluster_additive(f, w, a2) == []
    assert check_cluster_additive(g, w, a2) == []
    total = {v: f[v] + g[v] for v in ZIGZAG}
    assert total == _example_table(EX_SUM)
    bad = check_cluster_additive(total, w, a2)
    assert [m.z for m in bad] == [Z("2", 0), Z("1", 2)]
    # the example's functions are the extensions of their level-0 values
    ff = ClusterFunction.from_values(a2, 0, {"1": 1, "2": 1})
    gg = ClusterFunction.from_values(a2, 0, {"1": -1, "2": 0})
    assert ff.on_window(w) == f and gg.on_window(w) == g
    assert not compatible(ff, gg, w)
    assert not leq(gg, ff, w)
    res = sum_functions([ff, gg], w)
    assert res.values == total and not res.is_cluster_additive and not res.predicted


def test_violation_is_auditable(a2):
    w = Window.spanning(ZIGZAG)
    m = check_cluster_additive(_example_table(EX_SUM), w, a2)[0]
    assert m.lhs != m.rhs and m.tau_z == m.z.tau() and m.predecessors
    assert str(m.z) in str(m)


def test_missing_value_is_reported(a2):
    w = Window.levels(a2, 0, 1)
    with pytest.raises(KeyError):
        check_cluster_additive({Z("1", 0): 0}, w, a2)


def test_hammocks_of_a_tilting_set_are_compatible(a2, st_a2):
    w = st_a2.domain_window(0, 1)
    h1, h2 = cluster_hammock(Z("1", 0), a2), cluster_hammock(Z("2", 0), a2)
    assert compatible(h1, h2, w)
    assert compatible(h1, h1, w)
    res = sum_functions([h1, h2], w)
    assert res.is_cluster_additive and res.predicted
    zero = ClusterFunction.zero(a2)
    res = sum_functions([h1, zero], w)
    assert res.values == h1.on_window(w) and res.is_cluster_additive


def test_order_and_difference(a2):
    w = Window.levels(a2, -3, 6)
    h = cluster_hammock(Z("1", 0), a2)
    h2 = h.scaled(2)
    assert leq(ClusterFunction.zero(a2), h, w)
    assert leq(h, h2, w)
    d = difference(h2, h, w)
    assert d.is_cluster_additive and d.predicted
    assert d.values == h.on_window(w)
    with pytest.raises(ValueError):
        h.scaled(-1)


def test_mismatched_quivers(a2):
    w = Window.levels(a2, 0, 1)
    with pytest.raises(MismatchedQuiverError):
        compatible(ClusterFunction.zero(a2), ClusterFunction.zero(preset("A2", "reverse")), w)


def test_combination_matches_pointwise_sum(a2, st_a2):
    w = st_a2.domain_window(0, 2)
    h1, h2 = cluster_hammock(Z("1", 0), a2), cluster_hammock(Z("2", 0), a2)
    c = combination([(2, h1), (3, h2)], a2)
    assert c.on_window(w) == {v: 2 * h1(v) + 3 * h2(v) for v in w.vertices(a2)}


@given(vals=st.lists(st.integers(0, 6), min_size=3, max_size=3), lo=st.integers(-3, 3))
def test_nonnegative_tables_additive_iff_cluster_additive(vals, lo):
    q = preset("A3")
    f = ClusterFunction.from_values(q, lo, dict(zip(q.vertices, vals)))
    w = Window.levels(q, lo, lo + 1)
    table = {v: abs(f(v)) for v in w.vertices(q)}
    assert bool(check_additive(table, w, q)) == bool(check_cluster_additive(table, w, q))


@given(vals=st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_tau_bound_at_negative_vertices(vals):
    q = preset("D4")
    f = ClusterFunction.from_values(q, 0, dict(zip(q.vertices, vals)))
    for v in Window.levels(q, -3, 3).vertices(q):
        if f(v) < 0:
            assert f(v.tau()) >= -f(v)


def test_valued_extension_is_exact():
    q = parse_quiver("a 1 2 3")
    f = ClusterFunction.from_values(q, 0, {"1": 1, "2": 1})
    big = f(Z("2", 40))
    assert isinstance(big, int) and big > 2 ** 64
    assert check_cluster_additive(f, Window.levels(q, 0, 40), q) == []
