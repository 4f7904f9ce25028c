"""Left hammock functions, the Nakayama shift and cluster-hammock functions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .functions import ClusterFunction
from .quiver import (
    QuiverSpec,
    Window,
    ZVertex,
    dynkin_type,
    is_path,
    mesh,
    sort_vertices,
)


class HammockError(RuntimeError):
    pass


class BudgetExceeded(HammockError):
    """The hammock support outgrew the budget (infinite for non-Dynkin Δ)."""


class NotDynkinError(ValueError):
    pass


@dataclass(frozen=True)
class HammockTable:
    source: ZVertex
    values: Tuple[Tuple[ZVertex, int], ...]

    def as_dict(self) -> Dict[ZVertex, int]:
        return dict(self.values)

    @property
    def support(self) -> List[ZVertex]:
        return [v for v, _ in self.values]

    def __call__(self, v: ZVertex) -> int:
        return self.as_dict().get(v, 0)


def default_budget(q: QuiverSpec) -> int:
    # generous for Dynkin: two fundamental domains hold at most n(h+2) vertices
    # and h <= 2n - 2 for simply-laced types, so 10·n·2n covers them
    return 10 * 2 * q.n * (2 * q.n + 2)


def left_hammock(p: ZVertex, q: QuiverSpec, budget: Optional[int] = None) -> HammockTable:
    """The left hammock function h'_p with its (finite) support.

    Values are computed level by level in a linear extension of ZΔ. A vertex
    gets a value only when some arrow into it starts at a positive value; one
    all-zero level therefore ends the computation.
    """
    if budget is None:
        budget = default_budget(q)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    order = q.topological_order
    vals: Dict[ZVertex, int] = {p: 1}
    level = p.level
    while True:
        any_positive = False
        for xi in order:
            z = ZVertex(xi, level)
            if z == p:
                any_positive = True
                continue
            preds = mesh(z, q)
            if not any(vals.get(y, 0) > 0 for y, _ in preds):
                continue
            val = -vals.get(z.tau(), 0) + sum(m * vals.get(y, 0) for y, m in preds)
            if val < 0:
                raise HammockError(f"negative hammock value {val} at {z} for source {p}")
            if val > 0:
                vals[z] = val
                any_positive = True
                if len(vals) > budget:
                    raise BudgetExceeded(
                        f"support of h'_{p} exceeds budget {budget}; the hammock is probably infinite"
                    )
        if not any_positive:
            break
        level += 1
    return HammockTable(p, tuple((v, vals[v]) for v in sort_vertices(vals, q)))


def nakayama_from_table(table: HammockTable, q: QuiverSpec) -> ZVertex:
    support = table.support
    top = support[-1]  # last in a linear extension, so the only candidate
    for y in support:
        if not is_path(y, top, q):
            raise HammockError(f"hammock of {table.source} has no unique maximal vertex")
    return top


def nakayama(p: ZVertex, q: QuiverSpec, budget: Optional[int] = None) -> ZVertex:
    return nakayama_from_table(left_hammock(p, q, budget), q)


class DynkinStructure:
    """ν, [1], F, fundamental domains and cluster-hammock functions for a Dynkin ZΔ.

    ν is read off the hammock supports at level 0; since it commutes with τ,
    ``ν(ξ, i) = (σ(ξ), i + c(ξ))`` for a permutation σ and offsets c.
    Valued quivers with finite hammocks (the B_n presets) are accepted with
    ``experimental=True``.
    """

    def __init__(self, q: QuiverSpec, experimental: bool = False, budget: Optional[int] = None):
        self.quiver = q
        self.type = dynkin_type(q)
        if self.type is None and not experimental:
            raise NotDynkinError(f"{q} is not a simply-laced Dynkin quiver")
        self.experimental = self.type is None
        self._nu: Dict[str, Tuple[str, int]] = {}
        self.hammocks: Dict[str, HammockTable] = {}
        for xi in q.vertices:
            table = left_hammock(ZVertex(xi, 0), q, budget)
            top = nakayama_from_table(table, q)
            self.hammocks[xi] = table
            self._nu[xi] = (top.base, top.level)
        self._nu_inv = {b: (a, c) for a, (b, c) in self._nu.items()}
        if len(self._nu_inv) != q.n:
            raise HammockError("Nakayama shift is not a bijection")
        self._h: Dict[ZVertex, ClusterFunction] = {}
        self._reps: Dict[ZVertex, ZVertex] = {}
        self.fundamental_domain = self.domain_window(0, 1)
        self._fd_levels = (self.fundamental_domain.min_level, self.fundamental_domain.max_level)

    # -- shifts ------------------------------------------------------------

    def nu(self, v: ZVertex) -> ZVertex:
        b, c = self._nu[v.base]
        return ZVertex(b, v.level + c)

    def nu_inv(self, v: ZVertex) -> ZVertex:
        a, c = self._nu_inv[v.base]
        return ZVertex(a, v.level - c)

    def shift_one(self, v: ZVertex) -> ZVertex:
        """[1] = ν τ⁻¹."""
        return self.nu(v.tau(-1))

    def shift_F(self, v: ZVertex, k: int = 1) -> ZVertex:
        """F = ν τ⁻², applied ``k`` times (negative ``k`` uses F⁻¹ = τ² ν⁻¹)."""
        for _ in range(k):
            v = self.nu(v.tau(-2))
        for _ in range(-k):
            v = self.nu_inv(v).tau(2)
        return v

    def hammock(self, p: ZVertex) -> HammockTable:
        """h'_p, obtained from the level-0 table by translation."""
        base = self.hammocks[p.base]
        return HammockTable(p, tuple((ZVertex(v.base, v.level + p.level), x) for v, x in base.values))

    # -- windows -----------------------------------------------------------

    def shifted_slice(self, level: int, k: int) -> Dict[str, int]:
        """Levels of the slice F^k(Δ₀ × {level}), by base."""
        res = {}
        for xi in self.quiver.vertices:
            v = self.shift_F(ZVertex(xi, level), k)
            res[v.base] = v.level
        return res

    def domain_window(self, level: int, forward: int = 1, backward: int = 0) -> Window:
        """Union of F-fundamental domains ``F^j [S, FS)`` for ``-backward <= j < forward``.

        ``S`` is the slice Δ₀ × {level}; one domain is the convex hull of ``S``
        and ``S[1] = τ F S``.
        """
        lo = self.shifted_slice(level, -backward)
        hi = self.shifted_slice(level, forward)
        return Window(tuple((b, lo[b], hi[b] - 1) for b in self.quiver.vertices))

    def orbit_rep(self, v: ZVertex) -> ZVertex:
        """The member of the F-orbit of ``v`` inside the level-0 fundamental domain."""
        rep = self._reps.get(v)
        if rep is not None:
            return rep
        fd = self.fundamental_domain
        lo, hi = self._fd_levels
        w = v
        while w.level > hi:
            w = self.shift_F(w, -1)
        while w.level < lo:
            w = self.shift_F(w, 1)
        for cand in (w, self.shift_F(w, -1), self.shift_F(w, 1)):
            if cand in fd:
                self._reps[v] = cand
                return cand
        raise HammockError(f"no orbit representative found for {v}")

    def orbit_in(self, v: ZVertex, window: Window) -> List[ZVertex]:
        """All members of the F-orbit of ``v`` that lie in ``window``."""
        rep = self.orbit_rep(v)
        res = []
        lo, hi = window.min_level, window.max_level
        w = rep
        while w.level >= lo:
            if w in window:
                res.append(w)
            w = self.shift_F(w, -1)
        w = self.shift_F(rep, 1)
        while w.level <= hi:
            if w in window:
                res.append(w)
            w = self.shift_F(w, 1)
        return sort_vertices(res, self.quiver)

    def domain_vertices(self) -> List[ZVertex]:
        return self.fundamental_domain.vertices(self.quiver)

    # -- cluster-hammock functions ------------------------------------------

    def cluster_hammock(self, x: ZVertex) -> ClusterFunction:
        f = self._h.get(x)
        if f is None:
            f = cluster_hammock(x, self.quiver)
            self._h[x] = f
        return f


def cluster_hammock(x: ZVertex, q: QuiverSpec) -> ClusterFunction:
    """h_x: the extension of ``-1`` at ``x`` and ``0`` on the rest of its level slice."""
    vals = {b: (-1 if b == x.base else 0) for b in q.vertices}
    return ClusterFunction.from_values(q, x.level, vals)


@lru_cache(maxsize=64)
def structure_for(q: QuiverSpec, experimental: bool = False) -> DynkinStructure:
    return DynkinStructure(q, experimental=experimental)


def shift_F(v: ZVertex, q: QuiverSpec) -> ZVertex:
    return structure_for(q).shift_F(v)


def shift_one(v: ZVertex, q: QuiverSpec) -> ZVertex:
    return structure_for(q).shift_one(v)


def F_orbit_representative(v: ZVertex, q: QuiverSpec) -> ZVertex:
    return structure_for(q).orbit_rep(v)


def check_F_invariance(f, periods: int, structure: DynkinStructure, level: Optional[int] = None) -> bool:
    """``f(v) == f(Fv)`` for every ``v`` in ``periods`` consecutive fundamental domains.

    ``f`` may be a ClusterFunction or a plain ``{ZVertex: int}`` table; for a
    table, vertices whose F-shift is missing count as failures.
    """
    q = structure.quiver
    if isinstance(f, ClusterFunction):
        start = f.anchor.level if level is None else level
        lookup = f
    else:
        table = dict(f)
        start = min(v.level for v in table) if level is None else level

        def lookup(v):
            return table[v]

    window = structure.domain_window(start, periods)
    try:
        return all(lookup(v) == lookup(structure.shift_F(v)) for v in window.vertices(q))
    except KeyError:
        return False


def hammock_lemma_prediction(x: ZVertex, structure: DynkinStructure, window: Window) -> Dict[ZVertex, int]:
    """Values of h_x on ``window`` as predicted from hammocks alone.

    ``-1`` on the F-orbit of ``x``, ``h'_{τ⁻¹x}`` transported along F on the
    F-shifts of the hammock of ``τ⁻¹x``, and ``0`` elsewhere.
    """
    q = structure.quiver
    pred = {v: 0 for v in window.vertices(q)}
    for v in structure.orbit_in(x, window):
        pred[v] = -1
    p = x.tau(-1)
    table = structure.hammock(p)
    lo, hi = window.min_level, window.max_level
    # shift the hammock by F^k for every k that can reach the window
    k = 0
    while True:
        moved = [(structure.shift_F(v, k), c) for v, c in table.values]
        if min(v.level for v, _ in moved) > hi:
            break
        for v, c in moved:
            if v in window:
                pred[v] = c
        k += 1
    k = -1
    while True:
        moved = [(structure.shift_F(v, k), c) for v, c in table.values]
        if max(v.level for v, _ in moved) < lo:
            break
        for v, c in moved:
            if v in window:
                pred[v] = c
        k -= 1
    return pred
