"""Confined sets, (partial) tilting sets, exchange and the functions d_T."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .functions import ClusterFunction
from .hammocks import DynkinStructure, HammockError
from .quiver import (
    Window,
    ZVertex,
    all_slices,
    slice_with_unique_source,
    sort_vertices,
)


class TiltingError(ValueError):
    pass


class MutationAnomaly(RuntimeError):
    """The exchange property failed (should not happen for valid input)."""


@dataclass(frozen=True)
class TiltingSet:
    vertices: Tuple[ZVertex, ...]
    multiplicities: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.multiplicities:
            object.__setattr__(self, "multiplicities", (1,) * len(self.vertices))
        if len(self.multiplicities) != len(self.vertices):
            raise ValueError("one multiplicity per vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("repeated vertex in tilting set")

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def with_multiplicities(self, mult: Sequence[int]) -> "TiltingSet":
        return TiltingSet(self.vertices, tuple(mult))

    def orbit_key(self, structure: DynkinStructure) -> frozenset:
        return frozenset(structure.orbit_rep(v) for v in self.vertices)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.vertices)


@dataclass(frozen=True)
class MutationResult:
    removed: ZVertex
    inserted: ZVertex
    new_set: TiltingSet


def parse_set(text: str) -> List[ZVertex]:
    from .quiver import parse_vertex

    text = text.strip()
    if not text:
        return []
    return [parse_vertex(t) for t in text.split(",")]


# ---------------------------------------------------------------------------
# confinement

def confined_hull(levels: Dict[str, int], structure: DynkinStructure) -> Window:
    """Convex hull of a slice ``S`` and ``τS[1] = νS``."""
    upper = {}
    for b, l in levels.items():
        v = structure.nu(ZVertex(b, l))
        upper[v.base] = v.level
    return Window(tuple((b, levels[b], upper[b]) for b in structure.quiver.vertices))


def is_confined(vertices: Iterable[ZVertex], structure: DynkinStructure):
    """``(True, slice_levels)`` if some slice S has the set inside hull(S, τS[1]).

    The search covers every slice whose levels can bracket the set, so a
    negative answer is definitive.
    """
    vs = list(vertices)
    q = structure.quiver
    if not vs:
        return True, {b: 0 for b in q.vertices}
    lo = min(v.level for v in vs)
    hi = max(v.level for v in vs)
    n = q.n
    max_shift = max(c for _, c in structure._nu.values())
    # any witness has all levels within n-1 of its root, and the hull is
    # max_shift + n - 1 levels deep at most
    roots = range(lo - (2 * n + max_shift), hi + 2 * n + 1)
    for levels in all_slices(q, roots):
        hull = confined_hull(levels, structure)
        if all(v in hull for v in vs):
            return True, levels
    return False, None


def h_vanishes(x: ZVertex, y: ZVertex, structure: DynkinStructure) -> bool:
    """``h_x(y) == 0`` by direct evaluation of the extension."""
    return structure.cluster_hammock(x)(y) == 0


def pairwise_vanishing(vertices: Sequence[ZVertex], structure: DynkinStructure) -> bool:
    for x in vertices:
        for y in vertices:
            if x != y and not h_vanishes(x, y, structure):
                return False
    return True


def is_partial_tilting(vertices: Iterable[ZVertex], structure: DynkinStructure) -> bool:
    vs = list(vertices)
    return pairwise_vanishing(vs, structure) and is_confined(vs, structure)[0]


def is_tilting(vertices: Iterable[ZVertex], structure: DynkinStructure) -> bool:
    vs = list(vertices)
    return len(vs) == structure.quiver.n and is_partial_tilting(vs, structure)


def confined_representatives(vertices: Sequence[ZVertex], structure: DynkinStructure) -> Optional[List[ZVertex]]:
    """F-translates of ``vertices`` forming a confined set, if any exist.

    Tries, for each member ``x``, the fundamental domain hull(S, S[1]) with
    ``S`` the slice whose unique source is ``ν⁻¹x``; the other members are
    moved into that domain and tested against hull(S, τS[1]).
    """
    vs = list(vertices)
    if not vs:
        return []
    q = structure.quiver
    reps = {structure.orbit_rep(v) for v in vs}
    if len(reps) != len(vs):
        return None
    for x in sort_vertices(vs, q):
        levels = slice_with_unique_source(structure.nu_inv(x), q)
        upper = {}
        for b, l in levels.items():
            v = structure.shift_one(ZVertex(b, l))
            upper[v.base] = v.level
        domain = Window(tuple((b, levels[b], upper[b]) for b in q.vertices))
        hull = confined_hull(levels, structure)
        moved = []
        for v in vs:
            cands = structure.orbit_in(v, domain)
            if len(cands) != 1:
                break
            moved.append(cands[0])
        else:
            if all(v in hull for v in moved):
                return moved
    return None


# ---------------------------------------------------------------------------
# enumeration

def compatibility_graph(vertices: Sequence[ZVertex], structure: DynkinStructure) -> Dict[ZVertex, set]:
    """``x ~ y`` when ``h_x(y) = h_y(x) = 0``."""
    adj = {v: set() for v in vertices}
    for i, x in enumerate(vertices):
        hx = structure.cluster_hammock(x)
        for y in vertices[i + 1:]:
            if hx(y) == 0 and structure.cluster_hammock(y)(x) == 0:
                adj[x].add(y)
                adj[y].add(x)
    return adj


def _cliques(order: List[ZVertex], adj: Dict[ZVertex, set], size: int):
    def grow(clique: List[ZVertex], cands: List[ZVertex]):
        if len(clique) == size:
            yield tuple(clique)
            return
        for k, v in enumerate(cands):
            if len(clique) + len(cands) - k < size:
                return
            yield from grow(clique + [v], [w for w in cands[k + 1:] if w in adj[v]])

    yield from grow([], list(order))


def enumerate_tilting_sets(structure: DynkinStructure) -> List[TiltingSet]:
    """All tilting sets up to F, one per class, in a deterministic order.

    Candidates are |Δ₀|-subsets of the level-0 fundamental domain with
    pairwise vanishing cluster-hammock functions; each is returned with
    confined F-translates of its members.
    """
    q = structure.quiver
    domain = structure.domain_vertices()
    adj = compatibility_graph(domain, structure)
    out = []
    for clique in _cliques(domain, adj, q.n):
        placed = confined_representatives(clique, structure)
        if placed is None:
            raise HammockError(f"compatible set {clique} has no confined position")
        out.append(TiltingSet(tuple(sort_vertices(placed, q))))
    return out


def tilting_counts(structure: DynkinStructure) -> Dict[str, int]:
    """Number of tilting sets up to F, and how many are already confined as
    subsets of the level-0 fundamental domain."""
    sets = enumerate_tilting_sets(structure)
    as_placed = sum(
        1 for t in sets if is_confined([structure.orbit_rep(v) for v in t], structure)[0]
    )
    return {"orbit_classes": len(sets), "confined_in_domain": as_placed}


# ---------------------------------------------------------------------------
# exchange and d_T

def mutate(T: TiltingSet, x: ZVertex, structure: DynkinStructure) -> MutationResult:
    """Exchange ``x`` for the unique other F-orbit on which every h_y (y in T∖x) vanishes."""
    if x not in T.vertices:
        raise TiltingError(f"{x} is not in the tilting set")
    rest = [v for v in T.vertices if v != x]
    free = [
        z for z in structure.domain_vertices()
        if all(structure.cluster_hammock(y)(z) == 0 for y in rest)
    ]
    xr = structure.orbit_rep(x)
    if len(free) != 2 or xr not in free:
        raise MutationAnomaly(
            f"expected two free F-orbits including {xr}, found {[str(v) for v in free]}"
        )
    other = free[0] if free[1] == xr else free[1]
    mult = dict(zip(T.vertices, T.multiplicities))
    # prefer keeping the remaining members in place
    placed = None
    for k in (0, -1, 1, -2, 2):
        cand = structure.shift_F(other, k)
        if is_confined(rest + [cand], structure)[0]:
            placed = rest + [cand]
            inserted = cand
            break
    if placed is None:
        placed = confined_representatives(rest + [other], structure)
        if placed is None:
            raise MutationAnomaly("exchanged set admits no confined position")
        inserted = placed[-1]
        rest_map = {structure.orbit_rep(v): v for v in rest}
        placed_rest = placed[:-1]
        mult = {pv: mult[rest_map[structure.orbit_rep(pv)]] for pv in placed_rest}
        rest = placed_rest
    mult[inserted] = mult.pop(x, 1)
    verts = sort_vertices(rest + [inserted], structure.quiver)
    new = TiltingSet(tuple(verts), tuple(mult[v] for v in verts))
    return MutationResult(removed=x, inserted=inserted, new_set=new)


def mutation_graph(sets: Sequence[TiltingSet], structure: DynkinStructure) -> List[Tuple[int, int]]:
    """Undirected exchange edges between tilting sets (indices into ``sets``)."""
    index = {t.orbit_key(structure): k for k, t in enumerate(sets)}
    edges = set()
    for k, t in enumerate(sets):
        for x in t.vertices:
            res = mutate(t, x, structure)
            j = index[res.new_set.orbit_key(structure)]
            edges.add((min(k, j), max(k, j)))
    return sorted(edges)


def d_T(T: TiltingSet, structure: DynkinStructure, level: int = 0) -> ClusterFunction:
    """The function Σ n_x h_x of a partial tilting set with multiplicities."""
    q = structure.quiver
    active = [v for v, n in zip(T.vertices, T.multiplicities) if n]
    if any(n < 0 for n in T.multiplicities):
        raise TiltingError("multiplicities must be non-negative")
    if not is_partial_tilting(active, structure):
        raise TiltingError(f"{T} is not a partial tilting set")
    vals = {b: 0 for b in q.vertices}
    for v, n in zip(T.vertices, T.multiplicities):
        if n:
            lv = structure.cluster_hammock(v).level_values(level)
            for b in q.vertices:
                vals[b] += n * lv[b]
    return ClusterFunction.from_values(q, level, vals)


def brute_force_confinable(orbit_reps: Sequence[ZVertex], structure: DynkinStructure, reach: int = 1) -> bool:
    """Whether some choice of F-translates (within ``reach`` steps) is confined."""
    shifts = range(-reach, reach + 1)
    for ks in product(shifts, repeat=len(orbit_reps)):
        moved = [structure.shift_F(v, k) for v, k in zip(orbit_reps, ks)]
        if is_confined(moved, structure)[0]:
            return True
    return False
