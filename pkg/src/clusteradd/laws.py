"""Rectangle rules, the wing lemma and sectional negative neighbours on ZA_n.

Vertices of ZA_n are drawn on a grid: the path vertices give rows 1..n
and ``u`` is a horizontal coordinate with arrows ``(u, r) -> (u+1, r±1)``
and ``τ(u, r) = (u-2, r)``. Every law is also checked in its mirrored form
(rows reversed) and its reversed form (``u`` negated), both of which
preserve cluster-additivity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .functions import ClusterFunction, check_additive, check_cluster_additive, neg_part, pos_part
from .hammocks import DynkinStructure
from .quiver import QuiverSpec, Window, ZVertex, dynkin_type, mesh, mesh_closed_vertices

GridPoint = Tuple[int, int]


class LawError(ValueError):
    pass


class TypeAGrid:
    def __init__(self, q: QuiverSpec):
        t = dynkin_type(q)
        if t is None or not t.startswith("A"):
            raise LawError(f"{q} is not of type A")
        self.quiver = q
        self.n = q.n
        nb = q.neighbours
        ends = [v for v in q.vertices if len(nb[v]) <= 1]
        rows = [ends[0]]
        while len(rows) < self.n:
            rows.append(next(w for w in nb[rows[-1]] if w not in rows))
        self.rows = rows
        self.row_of = {b: k + 1 for k, b in enumerate(rows)}
        succ = {(s, t) for s, t, _, _ in q.merged_arrows}
        off = [0]
        for a, b in zip(rows, rows[1:]):
            off.append(off[-1] + (1 if (a, b) in succ else -1))
        self.offset = {k + 1: o for k, o in enumerate(off)}

    def to_grid(self, v: ZVertex) -> GridPoint:
        r = self.row_of[v.base]
        return (2 * v.level + self.offset[r], r)

    def to_vertex(self, p: GridPoint) -> ZVertex:
        u, r = p
        if not 1 <= r <= self.n:
            raise LawError(f"row {r} outside 1..{self.n}")
        d = u - self.offset[r]
        if d % 2:
            raise LawError(f"{p} is not a grid vertex")
        return ZVertex(self.rows[r - 1], d // 2)

    def valid(self, p: GridPoint) -> bool:
        u, r = p
        return 1 <= r <= self.n and (u - self.offset[r]) % 2 == 0

    def frame(self, mirror: bool, direction: int) -> Callable[[GridPoint], GridPoint]:
        """Map local coordinates to grid coordinates (an involution)."""
        n = self.n

        def tr(p: GridPoint) -> GridPoint:
            u, r = p
            return (direction * u, n + 1 - r if mirror else r)

        return tr


@dataclass
class LawReport:
    law: str
    coordinates: Dict[str, object]
    expected: Optional[int]
    observed: Optional[int]
    passed: bool
    skipped: bool = False
    note: str = ""

    def as_json(self) -> dict:
        return {
            "law": self.law,
            "coordinates": {k: str(v) for k, v in self.coordinates.items()},
            "expected": self.expected,
            "observed": self.observed,
            "passed": self.passed,
            "skipped": self.skipped,
            "note": self.note,
        }


RECTANGLE_LAWS = {
    "basic": "rectangle",
    "extended": "rectangle-extended",
    "double": "rectangle-double",
}


def rectangle_check(
    f: ClusterFunction,
    x: ZVertex,
    s: int,
    t: int,
    variant: str = "basic",
    grid: Optional[TypeAGrid] = None,
    mirror: bool = False,
    direction: int = 1,
) -> LawReport:
    """Both sides of a rectangle rule at ``x`` with arms ``s`` (upwards) and ``t`` (downwards).

    ``basic`` needs both arms inside the grid. ``extended`` needs the up
    arm to end on row 1 and goes one step further past the boundary;
    ``double`` needs both arms to end on the boundary rows.
    """
    if variant not in RECTANGLE_LAWS:
        raise LawError(f"unknown rectangle variant {variant!r}")
    if s < 1 or t < 1:
        raise LawError("arms need s, t >= 1")
    grid = grid or TypeAGrid(f.quiver)
    n = grid.n
    tr = grid.frame(mirror, direction)
    u, r = tr(grid.to_grid(x))
    fx = f(x)
    if fx > 0:
        raise LawError(f"f({x}) = {fx} > 0")
    top, bottom = r - s, r + t
    if variant == "basic" and not (top >= 1 and bottom <= n):
        raise LawError("rectangle leaves the grid")
    if variant == "extended" and not (top == 1 and bottom <= n):
        raise LawError("extended rectangle needs the up arm to end on the boundary row")
    if variant == "double" and not (top == 1 and bottom == n):
        raise LawError("double rectangle needs both arms to end on boundary rows")

    def val(p: GridPoint) -> int:
        return f(grid.to_vertex(tr(p)))

    a = [val((u + i, r - i)) for i in range(1, s + 1)]
    b = [val((u + j, r + j)) for j in range(1, t + 1)]
    total = neg_part(fx)
    if variant == "basic":
        y = (u + s + t, r - s + t)
        total += sum(neg_part(v) for v in a[:-1]) + pos_part(a[-1])
        total += sum(neg_part(v) for v in b[:-1]) + pos_part(b[-1])
    elif variant == "extended":
        y = (u + s + 1 + t, r - s - 1 + t)
        total += sum(neg_part(v) for v in a)
        total += sum(neg_part(v) for v in b[:-1]) + pos_part(b[-1])
    else:
        y = (u + s + t + 2, r - s + t)
        total += sum(neg_part(v) for v in a) + sum(neg_part(v) for v in b)
    yv = grid.to_vertex(tr(y))
    obs = f(yv)
    ok = obs == total and obs >= neg_part(fx)
    coords = {"x": x, "s": s, "t": t, "y": yv, "mirror": mirror, "direction": direction}
    return LawReport(RECTANGLE_LAWS[variant], coords, total, obs, ok)


def wing_check(
    f: ClusterFunction,
    p: ZVertex,
    s: int,
    t: int,
    grid: Optional[TypeAGrid] = None,
    mirror: bool = False,
    direction: int = 1,
) -> LawReport:
    """The wing lemma with ``p = p[1]`` on the boundary row and apex ``y = p[s+t+1]``.

    Instances whose sign hypothesis fails come back with ``skipped=True``.
    """
    if s < 0 or t < 1:
        raise LawError("wing needs s >= 0 and t >= 1")
    grid = grid or TypeAGrid(f.quiver)
    tr = grid.frame(mirror, direction)
    up, rp = tr(grid.to_grid(p))
    m = s + t + 1
    if rp != 1:
        raise LawError("p[1] must lie on the boundary row")
    if m > grid.n:
        raise LawError(f"wing of rank {m} does not fit in A_{grid.n}")
    uy = up + m - 1

    def at(pt: GridPoint) -> ZVertex:
        return grid.to_vertex(tr(pt))

    pk = {k: at((uy - (m - k), k)) for k in range(1, m + 1)}
    qj = {j: at((uy + (m - j), j)) for j in range(1, m + 1)}
    coords = {"p": p, "s": s, "t": t, "y": pk[m], "q": qj[t], "mirror": mirror, "direction": direction}
    middle = [f(pk[s + i]) for i in range(1, t + 1)]
    if (s >= 1 and f(pk[s]) > 0) or min(middle) < 0 or f(pk[m]) > 0:
        return LawReport("wing", coords, None, None, True, skipped=True, note="hypothesis signs not met")
    expected = -min(middle)
    observed = f(qj[t])
    ok = observed == expected
    # non-negativity between p[s+1] and [1+t]q, apex excluded
    lo_u, lo_r = uy - t, s + 1
    hi_u, hi_r = uy + s, t + 1
    bad = []
    for u in range(lo_u, hi_u + 1):
        for r in range(1, grid.n + 1):
            if not grid.valid(tr((u, r))):
                continue
            if u - lo_u >= abs(r - lo_r) and hi_u - u >= abs(hi_r - r):
                v = at((u, r))
                if v != pk[m] and f(v) < 0:
                    bad.append(v)
    note = "" if not bad else "negative inside the wing at " + ",".join(map(str, bad))
    return LawReport("wing", coords, expected, observed, ok and not bad, note=note)


def _rays(grid: TypeAGrid, z: ZVertex) -> Iterator[ZVertex]:
    u, r = grid.to_grid(z)
    for k in range(1, grid.n):
        for du, dr in ((k, -k), (k, k), (-k, -k), (-k, k)):
            pt = (u + du, r + dr)
            if 1 <= pt[1] <= grid.n:
                yield grid.to_vertex(pt)


def negative_neighbor(f: ClusterFunction, z: ZVertex, grid: Optional[TypeAGrid] = None) -> ZVertex:
    """A vertex ``z' != z`` with ``f(z') <= 0`` joined to ``z`` by a sectional path.

    Sectional paths in ZA_n are the straight diagonal rays, so the search
    walks the four rays from ``z``, nearest vertices first and successors
    before predecessors.
    """
    grid = grid or TypeAGrid(f.quiver)
    if grid.n < 2:
        raise LawError("negative_neighbor needs n >= 2")
    if f(z) > 0:
        raise LawError(f"f({z}) = {f(z)} > 0")
    for v in _rays(grid, z):
        if f(v) <= 0:
            return v
    raise RuntimeError(f"no non-positive sectional neighbour of {z}; the function may not be cluster-additive")


# ---------------------------------------------------------------------------
# randomized runs

@dataclass
class LawRun:
    law: str
    trials: int
    checked: int = 0
    skipped: int = 0
    failures: List[LawReport] = field(default_factory=list)
    by_law: Dict[str, int] = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return len(self.failures)

    def summary(self) -> str:
        parts = " ".join(f"{k}={v}" for k, v in sorted(self.by_law.items()))
        return (
            f"law={self.law} trials={self.trials} checked={self.checked} "
            f"skipped={self.skipped} failed={self.failed}" + (f" {parts}" if parts else "")
        )


def rectangle_instances(f: ClusterFunction, grid: TypeAGrid, levels: range) -> Iterator[LawReport]:
    n = grid.n
    for direction in (1, -1):
        for mirror in (False, True):
            tr = grid.frame(mirror, direction)
            for i in levels:
                for b in grid.rows:
                    x = ZVertex(b, i)
                    _, r = tr(grid.to_grid(x))
                    positive = f(x) > 0
                    for s in range(1, r):
                        for t in range(1, n - r + 1):
                            variants = ["basic"]
                            if r - s == 1:
                                variants.append("extended")
                                if r + t == n:
                                    variants.append("double")
                            for var in variants:
                                if var == "basic" and mirror:
                                    continue  # the basic rule is symmetric in its arms
                                if positive:
                                    coords = {"x": x, "s": s, "t": t, "mirror": mirror, "direction": direction}
                                    yield LawReport(RECTANGLE_LAWS[var], coords, None, None, True,
                                                    skipped=True, note="f(x) > 0")
                                    continue
                                yield rectangle_check(f, x, s, t, var, grid, mirror, direction)


def wing_instances(f: ClusterFunction, grid: TypeAGrid, levels: range) -> Iterator[LawReport]:
    n = grid.n
    for direction in (1, -1):
        for mirror in (False, True):
            tr = grid.frame(mirror, direction)
            for i in levels:
                for b in grid.rows:
                    p = ZVertex(b, i)
                    if tr(grid.to_grid(p))[1] != 1:
                        continue
                    for m in range(2, n + 1):
                        for t in range(1, m):
                            yield wing_check(f, p, m - 1 - t, t, grid, mirror, direction)


def run_laws(
    q: QuiverSpec,
    law: str,
    trials: int,
    seed: int,
    value_range: Tuple[int, int] = (-3, 3),
) -> LawRun:
    """Check every applicable instance on ``trials`` random cluster-additive functions."""
    if law not in ("rectangle", "wing"):
        raise LawError(f"unknown law {law!r}")
    grid = TypeAGrid(q)
    rng = np.random.default_rng(seed)
    lo, hi = value_range
    levels = range(-grid.n - 2, grid.n + 3)
    run = LawRun(law, trials)
    gen = rectangle_instances if law == "rectangle" else wing_instances
    for _ in range(trials):
        vals = rng.integers(lo, hi + 1, size=q.n)
        f = ClusterFunction.from_values(q, 0, {b: int(v) for b, v in zip(q.vertices, vals)})
        for rep in gen(f, grid, levels):
            if rep.skipped:
                run.skipped += 1
                continue
            run.checked += 1
            run.by_law[rep.law] = run.by_law.get(rep.law, 0) + 1
            if not rep.passed:
                run.failures.append(rep)
    return run


# ---------------------------------------------------------------------------
# elementary facts

@dataclass
class FactCounts:
    functions: int = 0
    nonneg_additive: int = 0
    tau_bound: int = 0
    one_signed_zero: int = 0
    exceptions: List[str] = field(default_factory=list)


def elementary_facts(f: ClusterFunction, window: Window, structure: Optional[DynkinStructure] = None,
                     counts: Optional[FactCounts] = None) -> FactCounts:
    """Three basic facts about a cluster-additive ``f`` on ``window``.

    * where ``f`` is non-negative, cluster-additive and additive coincide;
    * ``f(z) < 0`` forces ``f(τz) >= -f(z)``;
    * with a Dynkin ``structure``: ``f <= 0`` or ``f >= 0`` on the window
      (expected to span two fundamental domains) forces ``f = 0`` there.
    """
    c = counts if counts is not None else FactCounts()
    q = f.quiver
    c.functions += 1
    vals = f.on_window(window)
    # on a non-negative Dynkin window only zero survives, so test mesh by mesh
    for z in mesh_closed_vertices(window, q):
        around = [z, z.tau()] + [y for y, _ in mesh(z, q)]
        if all(vals[v] >= 0 for v in around):
            c.nonneg_additive += 1
            mini = Window.spanning(around)
            sub = {v: vals.get(v, 0) for v in mini.vertices(q)}
            plain = [m for m in check_additive(sub, mini, q) if m.z == z]
            clustered = [m for m in check_cluster_additive(sub, mini, q) if m.z == z]
            if bool(plain) != bool(clustered):
                c.exceptions.append(f"additivity mismatch at {z} for {f!r}")
    for z, v in vals.items():
        if v < 0:
            c.tau_bound += 1
            if f(z.tau()) < -v:
                c.exceptions.append(f"f(τ{z}) < -f({z}) for {f!r}")
    if structure is not None:
        signs = set((v > 0) - (v < 0) for v in vals.values())
        if signs <= {0, 1} or signs <= {0, -1}:
            c.one_signed_zero += 1
            if signs != {0} and signs:
                c.exceptions.append(f"one-signed non-zero function {f!r}")
    return c
