"""Finite quivers, the stable translation quiver ZΔ built on them, and slices.

ZΔ is never materialised. A vertex is a pair ``(base, level)`` and every
structural question (meshes, paths, slices) is answered from the generating
quiver on demand.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple


class QuiverError(ValueError):
    """Raised for malformed quiver input (cycles, duplicates, bad weights)."""


class ZVertex(NamedTuple):
    base: str
    level: int

    def __str__(self) -> str:
        return f"{self.base}:{self.level}"

    def tau(self, k: int = 1) -> "ZVertex":
        """Apply the translation ``k`` times (negative ``k`` applies its inverse)."""
        return ZVertex(self.base, self.level - k)


def parse_vertex(text: str) -> ZVertex:
    base, sep, level = text.strip().rpartition(":")
    if not sep or not base:
        raise QuiverError(f"expected base:level, got {text!r}")
    try:
        return ZVertex(base, int(level))
    except ValueError:
        raise QuiverError(f"bad level in {text!r}") from None


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    weight: int = 1
    # weight carried by the arrow (η, i) -> (ξ, i+1) of ZΔ; equal to ``weight``
    # unless the quiver is valued non-symmetrically (B_n presets)
    dual_weight: Optional[int] = None

    @property
    def star_weight(self) -> int:
        return self.weight if self.dual_weight is None else self.dual_weight


@dataclass(frozen=True)
class QuiverSpec:
    """A finite directed quiver Δ without oriented cycles.

    Parallel arrows are allowed; they are merged into a single weighted arrow
    for every computation, so ``a x y`` twice and ``a x y 2`` give the same ZΔ.
    """

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise QuiverError(f"duplicate vertex {v!r}")
            if ":" in v or not v or any(c.isspace() for c in v):
                raise QuiverError(f"invalid vertex id {v!r}")
            seen.add(v)
        for a in self.arrows:
            if a.source not in seen or a.target not in seen:
                raise QuiverError(f"arrow {a.source}->{a.target} uses an undeclared vertex")
            if a.source == a.target:
                raise QuiverError(f"cycle detected: loop at {a.source!r}")
            if a.weight < 1 or a.star_weight < 1:
                raise QuiverError(f"weight < 1 on arrow {a.source}->{a.target}")
        self.topological_order  # raises on cycles

    @cached_property
    def index(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def merged_arrows(self) -> Tuple[Tuple[str, str, int, int], ...]:
        acc: Dict[Tuple[str, str], List[int]] = {}
        for a in self.arrows:
            w = acc.setdefault((a.source, a.target), [0, 0])
            w[0] += a.weight
            w[1] += a.star_weight
        return tuple((s, t, w, ws) for (s, t), (w, ws) in acc.items())

    @cached_property
    def key(self) -> tuple:
        """Identity of the generated ZΔ (ignores arrow encoding and name)."""
        return (self.vertices, tuple(sorted(self.merged_arrows)))

    @cached_property
    def topological_order(self) -> Tuple[str, ...]:
        indeg = {v: 0 for v in self.vertices}
        succ: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for s, t, _, _ in self.merged_arrows:
            indeg[t] += 1
            succ[s].append(t)
        order: List[str] = []
        ready = [v for v in self.vertices if indeg[v] == 0]
        while ready:
            v = ready.pop(0)
            order.append(v)
            for t in succ[v]:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
            ready.sort(key=self.index.__getitem__)
        if len(order) != len(self.vertices):
            raise QuiverError("cycle detected in quiver")
        return tuple(order)

    @cached_property
    def topo_rank(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.topological_order)}

    @cached_property
    def in_arrows(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        """``ζ -> ξ`` arrows by target, with the weight of ``(ζ,i) -> (ξ,i)``."""
        res: Dict[str, List[Tuple[str, int]]] = {v: [] for v in self.vertices}
        for s, t, w, _ in self.merged_arrows:
            res[t].append((s, w))
        return {v: tuple(a) for v, a in res.items()}

    @cached_property
    def out_arrows(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        """``ξ -> η`` arrows by source, with the weight of ``(η,i-1) -> (ξ,i)``."""
        res: Dict[str, List[Tuple[str, int]]] = {v: [] for v in self.vertices}
        for s, t, _, ws in self.merged_arrows:
            res[s].append((t, ws))
        return {v: tuple(a) for v, a in res.items()}

    @cached_property
    def succ_arrows(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        res: Dict[str, List[Tuple[str, int]]] = {v: [] for v in self.vertices}
        for s, t, w, _ in self.merged_arrows:
            res[s].append((t, w))
        return {v: tuple(a) for v, a in res.items()}

    @cached_property
    def pred_star_arrows(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        res: Dict[str, List[Tuple[str, int]]] = {v: [] for v in self.vertices}
        for s, t, _, ws in self.merged_arrows:
            res[t].append((s, ws))
        return {v: tuple(a) for v, a in res.items()}

    @cached_property
    def neighbours(self) -> Dict[str, Tuple[str, ...]]:
        res: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for s, t, _, _ in self.merged_arrows:
            res[s].append(t)
            res[t].append(s)
        return {v: tuple(n) for v, n in res.items()}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def is_symmetric(self) -> bool:
        return all(w == ws for _, _, w, ws in self.merged_arrows)

    def __len__(self) -> int:
        return len(self.vertices)

    def __str__(self) -> str:
        return self.name or to_text(self).strip().replace("\n", "; ")


def to_text(q: QuiverSpec) -> str:
    lines = [f"v {v}" for v in q.vertices]
    for a in q.arrows:
        if a.dual_weight is not None and a.dual_weight != a.weight:
            lines.append(f"a {a.source} {a.target} {a.weight} {a.dual_weight}")
        elif a.weight != 1:
            lines.append(f"a {a.source} {a.target} {a.weight}")
        else:
            lines.append(f"a {a.source} {a.target}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# presets

_PRESET_RE = re.compile(r"^([ABDE])(\d+)$")
_NAMED_ORIENTATIONS = ("linear", "reverse", "alternating", "inward", "outward")


def _preset_edges(family: str, n: int) -> Tuple[List[str], List[Tuple[str, str]], Optional[str]]:
    """Vertices, undirected edges in canonical order, and the branch vertex."""
    verts = [str(k) for k in range(1, n + 1)]
    if family in ("A", "B"):
        if n < 1 or (family == "B" and n < 2):
            raise QuiverError(f"unknown preset {family}{n}")
        return verts, [(str(k), str(k + 1)) for k in range(1, n)], None
    if family == "D":
        if n < 4:
            raise QuiverError(f"unknown preset D{n} (need n >= 4)")
        edges = [(str(k), str(k + 1)) for k in range(1, n - 2)]
        edges += [(str(n - 2), str(n - 1)), (str(n - 2), str(n))]
        return verts, edges, str(n - 2)
    if family == "E":
        if n not in (6, 7, 8):
            raise QuiverError(f"unknown preset E{n}")
        # Bourbaki labelling: chain 1-3-4-5-...-n with 2 attached to 4
        edges = [("1", "3"), ("3", "4"), ("2", "4")]
        edges += [(str(k), str(k + 1)) for k in range(4, n)]
        return verts, edges, "4"
    raise QuiverError(f"unknown preset {family}{n}")


def _orient(edges, orientation: str, branch: Optional[str]) -> List[Tuple[str, str]]:
    if orientation in ("linear", "reverse", "alternating") or set(orientation) <= {"<", ">"}:
        if orientation == "linear":
            marks = ">" * len(edges)
        elif orientation == "reverse":
            marks = "<" * len(edges)
        elif orientation == "alternating":
            marks = "".join("><"[k % 2] for k in range(len(edges)))
        else:
            marks = orientation
        if len(marks) != len(edges):
            raise QuiverError(f"orientation {orientation!r} needs {len(edges)} marks")
        return [(u, v) if m == ">" else (v, u) for (u, v), m in zip(edges, marks)]
    if orientation in ("inward", "outward"):
        # orient every edge towards (or away from) the branch vertex, or
        # towards the last vertex when there is no branch point
        centre = branch
        adj: Dict[str, List[str]] = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if centre is None:
            centre = edges[-1][1] if edges else None
        depth = {centre: 0}
        stack = [centre]
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in depth:
                    depth[v] = depth[u] + 1
                    stack.append(v)
        res = []
        for u, v in edges:
            far, near = (u, v) if depth[u] > depth[v] else (v, u)
            res.append((far, near) if orientation == "inward" else (near, far))
        return res
    raise QuiverError(f"unknown orientation {orientation!r}")


def preset(name: str, orientation: Optional[str] = None) -> QuiverSpec:
    """Dynkin presets ``A<n>``, ``D<n>``, ``E6/7/8`` and the valued ``B<n>``.

    ``orientation`` is one of ``linear``, ``reverse``, ``alternating``,
    ``inward``, ``outward`` or an explicit string of ``>``/``<`` marks, one per
    edge in canonical order. Defaults: ``linear`` for A and B, ``inward``
    (towards the branch vertex) for D and E.
    """
    m = _PRESET_RE.match(name.strip().upper())
    if not m:
        raise QuiverError(f"unknown preset {name!r}")
    family, n = m.group(1), int(m.group(2))
    verts, edges, branch = _preset_edges(family, n)
    if orientation is None:
        orientation = "inward" if family in ("D", "E") else "linear"
    oriented = _orient(edges, orientation, branch)
    label = f"{family}{n}:{orientation}"
    if family == "B":
        # valued B_n: the last edge carries valuation (2, 1); with the default
        # orientation n -> n-1 this is the picture of ZB_3 with 1 -> 2 <- 3
        if orientation == "linear":
            oriented[-1] = (str(n), str(n - 1))
        arrows = []
        for k, (s, t) in enumerate(oriented):
            if k == len(oriented) - 1:
                w, ws = (2, 1) if s == str(n) else (1, 2)
                arrows.append(Arrow(s, t, w, ws))
            else:
                arrows.append(Arrow(s, t))
        return QuiverSpec(tuple(verts), tuple(arrows), name=label)
    return QuiverSpec(tuple(verts), tuple(Arrow(s, t) for s, t in oriented), name=label)


def parse_quiver(text: str) -> QuiverSpec:
    """Parse quiver file content or a ``preset:<TYPE><n>[:orientation]`` string.

    File format: ``v <id>`` declares a vertex, ``a <src> <dst> [weight
    [dual_weight]]`` an arrow, ``#`` starts a comment. Vertices named by an
    arrow before being declared are declared implicitly.
    """
    stripped = text.strip()
    if stripped.startswith("preset:"):
        parts = stripped[len("preset:"):].split(":")
        if len(parts) > 2 or not parts[0]:
            raise QuiverError(f"bad preset syntax {stripped!r}")
        return preset(parts[0], parts[1] if len(parts) == 2 else None)

    verts: List[str] = []
    declared = set()
    arrows: List[Arrow] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("preset:"):
            return parse_quiver(line)
        tok = line.split()
        if tok[0] == "v" and len(tok) == 2:
            if tok[1] in declared:
                raise QuiverError(f"line {lineno}: duplicate vertex {tok[1]!r}")
            declared.add(tok[1])
            verts.append(tok[1])
        elif tok[0] == "a" and 3 <= len(tok) <= 5:
            try:
                nums = [int(t) for t in tok[3:]]
            except ValueError:
                raise QuiverError(f"line {lineno}: weights must be integers") from None
            for v in tok[1:3]:
                if v not in declared:
                    declared.add(v)
                    verts.append(v)
            w = nums[0] if nums else 1
            ws = nums[1] if len(nums) > 1 else None
            if w < 1 or (ws is not None and ws < 1):
                raise QuiverError(f"line {lineno}: weight < 1")
            arrows.append(Arrow(tok[1], tok[2], w, ws))
        else:
            raise QuiverError(f"line {lineno}: cannot parse {raw!r}")
    if not verts:
        raise QuiverError("quiver has no vertices")
    return QuiverSpec(tuple(verts), tuple(arrows))


# ---------------------------------------------------------------------------
# ZΔ structure

def mesh(z: ZVertex, q: QuiverSpec) -> List[Tuple[ZVertex, int]]:
    """Mesh predecessors ``y`` of ``z`` with the multiplicity of ``y -> z``."""
    xi, i = z
    res = [(ZVertex(s, i), w) for s, w in q.in_arrows[xi]]
    res += [(ZVertex(t, i - 1), ws) for t, ws in q.out_arrows[xi]]
    return res


def successors(y: ZVertex, q: QuiverSpec) -> List[Tuple[ZVertex, int]]:
    """Direct successors of ``y`` in ZΔ with arrow multiplicities."""
    xi, i = y
    res = [(ZVertex(t, i), w) for t, w in q.succ_arrows[xi]]
    res += [(ZVertex(s, i + 1), ws) for s, ws in q.pred_star_arrows[xi]]
    return res


def level_slice(q: QuiverSpec, i: int) -> frozenset:
    """The slice Δ₀ × {i}."""
    return frozenset(ZVertex(v, i) for v in q.vertices)


def sort_vertices(vs: Iterable[ZVertex], q: QuiverSpec) -> List[ZVertex]:
    """Sort by level, then topological position of the base (a linear extension of ZΔ)."""
    rank = q.topo_rank
    return sorted(vs, key=lambda v: (v.level, rank[v.base]))


@lru_cache(maxsize=200_000)
def _reachable(q: QuiverSpec, a: ZVertex, b: ZVertex) -> bool:
    if a == b:
        return True
    if b.level < a.level:
        return False
    if b.level == a.level and q.topo_rank[b.base] <= q.topo_rank[a.base]:
        return False
    return any(_reachable(q, y, b) for y, _ in successors(a, q))


def is_path(a: ZVertex, b: ZVertex, q: QuiverSpec) -> bool:
    """True when there is a (possibly empty) path from ``a`` to ``b`` in ZΔ."""
    return _reachable(q, a, b)


@lru_cache(maxsize=200_000)
def _sectional(q: QuiverSpec, prev: Optional[ZVertex], cur: ZVertex, b: ZVertex) -> int:
    if cur == b:
        return 1
    if cur.level > b.level:
        return 0
    total = 0
    for y, m in successors(cur, q):
        if prev is not None and y == prev.tau(-1):
            continue
        if not _reachable(q, y, b):
            continue
        total += m * _sectional(q, cur, y, b)
    return total


def sectional_path_count(a: ZVertex, b: ZVertex, q: QuiverSpec) -> int:
    """Number of paths ``a -> ... -> b`` with no segment ``y -> z -> τ⁻¹y``.

    Arrows of multiplicity ``m`` contribute ``m`` parallel paths.
    """
    if not _reachable(q, a, b):
        return 0
    return _sectional(q, None, a, b)


# ---------------------------------------------------------------------------
# Dynkin classification

def dynkin_type(q: QuiverSpec) -> Optional[str]:
    """``"A3"``, ``"D4"``, ``"E6"``... for simply-laced Dynkin trees, else ``None``."""
    if any(w != 1 or ws != 1 for _, _, w, ws in q.merged_arrows):
        return None
    n = q.n
    edges = {frozenset((s, t)) for s, t, _, _ in q.merged_arrows}
    if len(edges) != len(q.merged_arrows) or len(edges) != n - 1:
        return None
    # connected?
    seen = {q.vertices[0]}
    stack = [q.vertices[0]]
    while stack:
        u = stack.pop()
        for v in q.neighbours[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != n:
        return None
    degrees = {v: len(q.neighbours[v]) for v in q.vertices}
    branches = [v for v, d in degrees.items() if d >= 3]
    if not branches:
        return f"A{n}"
    if len(branches) > 1 or degrees[branches[0]] != 3:
        return None
    centre = branches[0]
    arms = []
    for start in q.neighbours[centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [v for v in q.neighbours[cur] if v != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


# ---------------------------------------------------------------------------
# general slices and windows

def is_slice(levels: Dict[str, int], q: QuiverSpec) -> bool:
    """A section meeting each τ-orbit once whose vertices are joined by arrows of ZΔ."""
    if set(levels) != set(q.vertices):
        return False
    return all(levels[s] - levels[t] in (0, 1) for s, t, _, _ in q.merged_arrows)


def slice_sources(levels: Dict[str, int], q: QuiverSpec) -> List[ZVertex]:
    """Vertices of the slice quiver all of whose slice arrows point away."""
    res = []
    for v in q.vertices:
        lv = levels[v]
        # arrow ζ->v inside the slice iff same level; v->η inside slice goes
        # (η, l) -> (v, l+1) iff l_v = l_η + 1
        if any(levels[s] == lv for s, _ in q.in_arrows[v]):
            continue
        if any(levels[t] == lv - 1 for t, _ in q.out_arrows[v]):
            continue
        res.append(ZVertex(v, lv))
    return res


def slice_sinks(levels: Dict[str, int], q: QuiverSpec) -> List[ZVertex]:
    res = []
    for v in q.vertices:
        lv = levels[v]
        if any(levels[t] == lv for t, _ in q.out_arrows[v]):
            continue
        if any(levels[s] == lv + 1 for s, _ in q.in_arrows[v]):
            continue
        res.append(ZVertex(v, lv))
    return res


def slice_with_unique_source(x: ZVertex, q: QuiverSpec) -> Dict[str, int]:
    """The slice through ``x`` in which ``x`` is the only source (Δ a tree)."""
    levels = {x.base: x.level}
    stack = [x.base]
    while stack:
        u = stack.pop()
        for t, _ in q.out_arrows[u]:
            if t not in levels:
                levels[t] = levels[u]
                stack.append(t)
        for s, _ in q.in_arrows[u]:
            if s not in levels:
                levels[s] = levels[u] + 1
                stack.append(s)
    if len(levels) != q.n:
        raise QuiverError("quiver is not connected")
    return levels


def slice_with_unique_sink(x: ZVertex, q: QuiverSpec) -> Dict[str, int]:
    levels = {x.base: x.level}
    stack = [x.base]
    while stack:
        u = stack.pop()
        for t, _ in q.out_arrows[u]:
            if t not in levels:
                levels[t] = levels[u] - 1
                stack.append(t)
        for s, _ in q.in_arrows[u]:
            if s not in levels:
                levels[s] = levels[u]
                stack.append(s)
    if len(levels) != q.n:
        raise QuiverError("quiver is not connected")
    return levels


def all_slices(q: QuiverSpec, root_levels: Iterable[int]) -> Iterator[Dict[str, int]]:
    """Every slice whose first vertex sits at one of ``root_levels`` (Δ a tree)."""
    root = q.vertices[0]
    # spanning-tree order of edges from the root
    order: List[Tuple[str, str, int]] = []  # (parent, child, +1 if parent->child)
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for t, _ in q.out_arrows[u]:
            if t not in seen:
                seen.add(t)
                order.append((u, t, 1))
                stack.append(t)
        for s, _ in q.in_arrows[u]:
            if s not in seen:
                seen.add(s)
                order.append((u, s, -1))
                stack.append(s)
    if len(seen) != q.n:
        raise QuiverError("quiver is not connected")
    for r in root_levels:
        for bits in range(1 << len(order)):
            levels = {root: r}
            for k, (p, c, d) in enumerate(order):
                b = (bits >> k) & 1
                # p->c arrow: l_p - l_c in {0,1}; c->p arrow: l_c - l_p in {0,1}
                levels[c] = levels[p] - b if d == 1 else levels[p] + b
            if is_slice(levels, q):
                yield levels


@dataclass(frozen=True)
class Window:
    """A finite viewport: an inclusive level range for each base vertex."""

    ranges: Tuple[Tuple[str, int, int], ...]

    @classmethod
    def from_ranges(cls, ranges: Dict[str, Tuple[int, int]]) -> "Window":
        return cls(tuple((b, lo, hi) for b, (lo, hi) in ranges.items()))

    @classmethod
    def levels(cls, q: QuiverSpec, lo: int, hi: int) -> "Window":
        return cls(tuple((v, lo, hi) for v in q.vertices))

    @classmethod
    def spanning(cls, vs: Iterable[ZVertex]) -> "Window":
        acc: Dict[str, List[int]] = {}
        for b, l in vs:
            r = acc.setdefault(b, [l, l])
            r[0] = min(r[0], l)
            r[1] = max(r[1], l)
        return cls(tuple((b, lo, hi) for b, (lo, hi) in acc.items()))

    @cached_property
    def _map(self) -> Dict[str, Tuple[int, int]]:
        return {b: (lo, hi) for b, lo, hi in self.ranges}

    def __contains__(self, v) -> bool:
        r = self._map.get(v[0])
        return r is not None and r[0] <= v[1] <= r[1]

    def vertices(self, q: QuiverSpec) -> List[ZVertex]:
        return sort_vertices(
            (ZVertex(b, l) for b, lo, hi in self.ranges for l in range(lo, hi + 1)), q
        )

    def __len__(self) -> int:
        return sum(max(0, hi - lo + 1) for _, lo, hi in self.ranges)

    def union(self, other: "Window") -> "Window":
        acc = dict(self._map)
        for b, lo, hi in other.ranges:
            if b in acc:
                acc[b] = (min(acc[b][0], lo), max(acc[b][1], hi))
            else:
                acc[b] = (lo, hi)
        return Window.from_ranges(acc)

    @property
    def min_level(self) -> int:
        return min(lo for _, lo, _ in self.ranges)

    @property
    def max_level(self) -> int:
        return max(hi for _, _, hi in self.ranges)


def hull_between_slices(lower: Dict[str, int], upper: Dict[str, int]) -> Window:
    """Convex hull of two slices with ``lower <= upper`` base by base."""
    return Window(tuple((b, lower[b], upper[b]) for b in lower))


def mesh_closed_vertices(window: Window, q: QuiverSpec) -> List[ZVertex]:
    """Vertices ``z`` of the window whose translate ``τz`` also lies in it."""
    return [z for z in window.vertices(q) if z.tau() in window]
