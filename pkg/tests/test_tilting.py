from itertools import combinations

import pytest

from clusteradd.functions import check_cluster_additive
from clusteradd.hammocks import DynkinStructure
from clusteradd.quiver import ZVertex as Z, preset
from clusteradd.tilting import (
    MutationAnomaly,
    TiltingError,
    TiltingSet,
    brute_force_confinable,
    confined_representatives,
    d_T,
    enumerate_tilting_sets,
    is_confined,
    is_partial_tilting,
    is_tilting,
    mutate,
    mutation_graph,
    tilting_counts,
)


def brute_force_count(st: DynkinStructure) -> int:
    """|Δ₀|-subsets of the domain whose summed hammock functions stay cluster-additive."""
    q = st.quiver
    w = st.domain_window(-1, 3)
    verts = w.vertices(q)
    tables = {x: st.cluster_hammock(x).on_window(w) for x in st.domain_vertices()}
    count = 0
    for sub in combinations(st.domain_vertices(), q.n):
        total = {v: sum(tables[x][v] for x in sub) for v in verts}
        if not check_cluster_additive(total, w, q):
            count += 1
    return count


def test_confinement_examples(st_a2):
    ok, witness = is_confined([Z("1", 0), Z("2", 0)], st_a2)
    assert ok and witness == {"1": 0, "2": 0}
    assert is_confined([Z("1", 0), Z("1", 2)], st_a2) == (False, None)
    assert is_confined([], st_a2)[0]


def test_partial_tilting_examples(st_a2):
    assert is_partial_tilting([Z("1", 0), Z("2", 0)], st_a2)
    assert not is_partial_tilting([Z("1", 0), Z("1", 1)], st_a2)
    assert is_partial_tilting([Z("2", 7)], st_a2)


def test_compatible_but_misplaced_pair(st_a2):
    pair = [Z("1", 0), Z("1", 2)]
    assert not is_partial_tilting(pair, st_a2)
    moved = confined_representatives(pair, st_a2)
    assert moved is not None and is_partial_tilting(moved, st_a2)
    assert brute_force_confinable(pair, st_a2)


@pytest.mark.parametrize("name,count", [("A1", 2), ("A2", 5), ("A3", 14), ("A3:alternating", 14)])
def test_counts_against_oracle(name, count):
    parts = name.split(":")
    st = DynkinStructure(preset(parts[0], parts[1] if len(parts) > 1 else None))
    sets = enumerate_tilting_sets(st)
    assert len(sets) == count == brute_force_count(st)
    assert all(is_tilting(list(t), st) for t in sets)
    assert len({t.orbit_key(st) for t in sets}) == count


def test_larger_counts():
    assert len(enumerate_tilting_sets(DynkinStructure(preset("A4")))) == 42
    assert len(enumerate_tilting_sets(DynkinStructure(preset("D4")))) == 50


def test_enumeration_is_deterministic(st_a2):
    a = [str(t) for t in enumerate_tilting_sets(st_a2)]
    b = [str(t) for t in enumerate_tilting_sets(DynkinStructure(st_a2.quiver))]
    assert a == b


def test_raw_and_deduplicated_counts(st_a2):
    assert tilting_counts(st_a2) == {"orbit_classes": 5, "confined_in_domain": 4}


def test_mutation_example(st_a2):
    T = TiltingSet((Z("1", 0), Z("2", 0)))
    res = mutate(T, Z("1", 0), st_a2)
    assert res.inserted == Z("1", 1)
    assert set(res.new_set) == {Z("2", 0), Z("1", 1)}
    assert is_tilting(list(res.new_set), st_a2)


def test_mutation_a1():
    st = DynkinStructure(preset("A1"))
    res = mutate(TiltingSet((Z("1", 0),)), Z("1", 0), st)
    assert st.orbit_rep(res.inserted) == Z("1", 1)


def test_mutation_errors(st_a2):
    with pytest.raises(TiltingError):
        mutate(TiltingSet((Z("1", 0), Z("2", 0))), Z("1", 1), st_a2)
    with pytest.raises(MutationAnomaly):
        mutate(TiltingSet((Z("1", 0),)), Z("1", 0), st_a2)


@pytest.mark.parametrize("name", ["A2", "A3", "D4"])
def test_mutation_is_an_involution(name):
    st = DynkinStructure(preset(name))
    for T in enumerate_tilting_sets(st):
        for x in T:
            res = mutate(T, x, st)
            assert is_tilting(list(res.new_set), st)
            assert st.orbit_rep(res.inserted) != st.orbit_rep(x)
            back = mutate(res.new_set, res.inserted, st)
            assert back.new_set.orbit_key(st) == T.orbit_key(st)


def test_pentagon(st_a2):
    sets = enumerate_tilting_sets(st_a2)
    edges = mutation_graph(sets, st_a2)
    assert len(edges) == 5
    degree = {k: 0 for k in range(5)}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    assert set(degree.values()) == {2}
    # connected 2-regular graph on 5 vertices is the 5-cycle
    seen, todo = {0}, [0]
    while todo:
        k = todo.pop()
        for a, b in edges:
            for u, v in ((a, b), (b, a)):
                if u == k and v not in seen:
                    seen.add(v)
                    todo.append(v)
    assert seen == set(range(5))


def test_d_T_example(st_a2):
    f = d_T(TiltingSet((Z("1", 0), Z("2", 0))), st_a2)
    vals = f.on_window(st_a2.fundamental_domain)
    # pointwise sum of the two hammock tables; both are 1 at (2,1)
    assert vals == {Z("1", 0): -1, Z("2", 0): -1, Z("1", 1): 1, Z("2", 1): 2, Z("1", 2): 1}
    zero = d_T(TiltingSet((Z("1", 0), Z("2", 0)), (0, 0)), st_a2)
    assert set(zero.on_window(st_a2.fundamental_domain).values()) == {0}


def test_d_T_rejects_non_tilting(st_a2):
    with pytest.raises(TiltingError):
        d_T(TiltingSet((Z("1", 0), Z("1", 1))), st_a2)


@pytest.mark.parametrize("name", ["A2", "A3", "D4"])
def test_d_T_shape(name):
    st = DynkinStructure(preset(name))
    w = st.domain_window(0, 2, 1)
    for T in enumerate_tilting_sets(st):
        mult = tuple(k % 3 + 1 for k in range(len(T)))
        f = d_T(T.with_multiplicities(mult), st)
        orbit = {}
        for x, n in zip(T, mult):
            assert f(x) == -n
            for v in st.orbit_in(x, w):
                orbit[v] = n
        for v in w.vertices(st.quiver):
            if v in orbit:
                assert f(v) == -orbit[v]
            else:
                assert f(v) >= 0
        assert all(f(v) == f(st.shift_F(v)) for v in w.vertices(st.quiver))


def test_compatible_hammocks_extend_to_tilting_sets():
    st = DynkinStructure(preset("A3"))
    w = st.domain_window(0, 2)
    sets = enumerate_tilting_sets(st)
    keys = [t.orbit_key(st) for t in sets]
    dom = st.domain_vertices()
    tables = {x: st.cluster_hammock(x).on_window(w) for x in dom}
    for a, b in combinations(dom, 2):
        compat = all(tables[a][v] * tables[b][v] >= 0 for v in tables[a])
        in_common = any({a, b} <= k for k in keys)
        assert compat == in_common
