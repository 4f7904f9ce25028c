import pytest

from clusteradd.functions import ClusterFunction
from clusteradd.hammocks import (
    BudgetExceeded,
    DynkinStructure,
    F_orbit_representative,
    NotDynkinError,
    check_F_invariance,
    cluster_hammock,
    hammock_lemma_prediction,
    left_hammock,
    nakayama,
    shift_F,
    shift_one,
)
from clusteradd.quiver import Window, ZVertex as Z, is_path, parse_quiver, preset, sectional_path_count

DYNKIN = ["A1", "A2", "A3", "A4", "D4", "D5", "E6"]
FD_SIZES = {"A1": 2, "A2": 5, "A3": 9, "A4": 14, "D4": 16, "D5": 25, "E6": 42, "E7": 70, "E8": 128}


def test_left_hammock_examples(a2):
    assert left_hammock(Z("1", 0), a2).as_dict() == {Z("1", 0): 1, Z("2", 0): 1}
    assert left_hammock(Z("1", 3), preset("A1")).as_dict() == {Z("1", 3): 1}


def test_infinite_hammock_hits_budget():
    kron = parse_quiver("a 1 2 2")
    with pytest.raises(BudgetExceeded):
        left_hammock(Z("1", 0), kron, budget=50)
    with pytest.raises(NotDynkinError):
        DynkinStructure(kron)


def test_nakayama(a2):
    assert nakayama(Z("1", 0), a2) == Z("2", 0)
    assert nakayama(Z("2", 0), a2) == Z("1", 1)
    assert nakayama(Z("1", 4), preset("A1")) == Z("1", 4)


def test_shifts(a2):
    assert shift_F(Z("1", 0), a2) == Z("2", 2)
    assert shift_F(Z("2", 2), a2) == Z("1", 5)
    assert shift_F(Z("1", 0), preset("A1")) == Z("1", 2)
    assert shift_one(Z("1", 0), a2) == Z("2", 1)
    assert F_orbit_representative(Z("2", 2), a2) == Z("1", 0)


@pytest.mark.parametrize("name", list(FD_SIZES))
def test_fundamental_domain_sizes(name):
    st = DynkinStructure(preset(name))
    assert len(st.fundamental_domain) == FD_SIZES[name]


def test_a2_fundamental_domain(st_a2):
    assert set(st_a2.domain_vertices()) == {Z("1", 0), Z("2", 0), Z("1", 1), Z("2", 1), Z("1", 2)}


@pytest.mark.parametrize("name", DYNKIN)
def test_domain_meets_each_orbit_once(name):
    st = DynkinStructure(preset(name))
    fd = st.fundamental_domain
    for v in st.domain_window(-3, 3).vertices(st.quiver):
        assert len(st.orbit_in(v, fd)) == 1
        assert st.orbit_rep(v) in fd


@pytest.mark.parametrize("name", DYNKIN + ["A3:alternating", "D4:outward"])
def test_shifts_commute_with_tau(name):
    q = parse_quiver("preset:" + name)
    st = DynkinStructure(q)
    for v in Window.levels(q, -2, 2).vertices(q):
        for fn in (st.nu, st.shift_one, st.shift_F):
            assert fn(v.tau()) == fn(v).tau()
        assert st.nu_inv(st.nu(v)) == v
        assert st.shift_F(st.shift_F(v, 2), -2) == v


def test_cluster_hammock_table(a2):
    h = cluster_hammock(Z("1", 0), a2)
    nonzero = {Z("1", 0): -1, Z("1", 1): 1, Z("2", 1): 1, Z("2", 2): -1, Z("2", 3): 1, Z("1", 4): 1, Z("1", 5): -1}
    for v in Window.levels(a2, 0, 5).vertices(a2):
        assert h(v) == nonzero.get(v, 0)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "A4", "D4"])
def test_hammock_lemma(name):
    st = DynkinStructure(preset(name))
    for x in st.domain_vertices():
        h = st.cluster_hammock(x)
        assert check_F_invariance(h, 3, st)
        w = st.domain_window(0, 3)
        vals = h.on_window(w)
        assert {v for v, c in vals.items() if c < 0} == set(st.orbit_in(x, w))
        assert all(c == -1 for c in vals.values() if c < 0)
        assert vals == hammock_lemma_prediction(x, st, w)
        hf = st.cluster_hammock(st.shift_F(x))
        assert hf.on_window(w) == vals


@pytest.mark.parametrize("name", ["A4", "D4", "A3:alternating"])
def test_hammock_counts_sectional_paths(name):
    q = parse_quiver("preset:" + name)
    st = DynkinStructure(q)
    for p in st.domain_vertices():
        h = st.hammock(p)
        for y in Window.levels(q, p.level, p.level + q.n + 1).vertices(q):
            c = sectional_path_count(p, y, q)
            if c:
                assert h(y) == c
            if h(y):
                assert is_path(p, y, q)


def test_f_invariance_detects_corruption(st_a2, a2):
    h = st_a2.cluster_hammock(Z("1", 0))
    table = h.on_window(st_a2.domain_window(0, 3))
    assert check_F_invariance(table, 2, st_a2, level=0)
    table[Z("2", 1)] += 1
    assert not check_F_invariance(table, 2, st_a2, level=0)
    a1 = DynkinStructure(preset("A1"))
    assert check_F_invariance(ClusterFunction.from_values(a1.quiver, 0, {"1": 1}), 2, a1)


def test_valued_b3_is_experimental():
    q = preset("B3")
    with pytest.raises(NotDynkinError):
        DynkinStructure(q)
    st = DynkinStructure(q, experimental=True)
    assert st.experimental
    assert len(st.fundamental_domain) == 12
