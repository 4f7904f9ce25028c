"""Cluster-additive functions on ZΔ.

A function is stored as its values on one slice Δ₀ × {i}; every other value
is produced by the mesh recurrence ``f(z) + f(τz) = Σ m_yz f(y)⁺`` run
forwards (sources of Δ first) or backwards (sinks first), one level at a
time, and memoised.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .quiver import (
    QuiverError,
    QuiverSpec,
    Window,
    ZVertex,
    is_slice,
    mesh,
    mesh_closed_vertices,
    slice_sinks,
    slice_sources,
)


def pos_part(z: int) -> int:
    return z if z > 0 else 0


def neg_part(z: int) -> int:
    return -z if z < 0 else 0


class MismatchedQuiverError(ValueError):
    pass


class ReflectionError(ValueError):
    pass


@dataclass(frozen=True)
class SliceAssignment:
    level: int
    values: Tuple[Tuple[str, int], ...]

    @classmethod
    def from_dict(cls, level: int, values: Mapping[str, int]) -> "SliceAssignment":
        return cls(level, tuple((b, int(v)) for b, v in values.items()))

    def as_dict(self) -> Dict[str, int]:
        return dict(self.values)


class ClusterFunction:
    """The unique cluster-additive extension of integer values on a slice.

    Instances memoise computed levels and are not thread-safe; use one
    instance per worker.
    """

    def __init__(self, quiver: QuiverSpec, anchor: SliceAssignment):
        values = anchor.as_dict()
        missing = set(quiver.vertices) - set(values)
        extra = set(values) - set(quiver.vertices)
        if missing or extra:
            raise QuiverError(
                f"slice values must cover exactly the vertices of Δ "
                f"(missing {sorted(missing)}, unknown {sorted(extra)})"
            )
        self.quiver = quiver
        self.anchor = anchor
        self._order = quiver.topological_order
        self._levels: Dict[int, Dict[str, int]] = {anchor.level: dict(values)}
        self._lo = self._hi = anchor.level

    @classmethod
    def from_values(cls, quiver: QuiverSpec, level: int, values: Mapping[str, int]) -> "ClusterFunction":
        return cls(quiver, SliceAssignment.from_dict(level, values))

    @classmethod
    def zero(cls, quiver: QuiverSpec, level: int = 0) -> "ClusterFunction":
        return cls.from_values(quiver, level, {v: 0 for v in quiver.vertices})

    @classmethod
    def from_slice(cls, quiver: QuiverSpec, values: Mapping[ZVertex, int]) -> "ClusterFunction":
        """Extend values given on an arbitrary slice (not necessarily Δ₀ × {i}).

        The slice is pushed forward by cluster-reflections at sources until
        it becomes a level slice.
        """
        levels = {v.base: v.level for v in values}
        if len(levels) != len(values) or not is_slice(levels, quiver):
            raise ReflectionError("vertices do not form a slice of ZΔ")
        vals = {v.base: int(x) for v, x in values.items()}
        top = max(levels.values())
        while min(levels.values()) < top:
            low = min(levels.values())
            src = next(s for s in slice_sources(levels, quiver) if s.level == low)
            levels, vals = _reflect(quiver, levels, vals, src)
        return cls.from_values(quiver, top, vals)

    # -- evaluation ------------------------------------------------------

    def _forward(self) -> None:
        q = self.quiver
        prev = self._levels[self._hi]
        cur: Dict[str, int] = {}
        for xi in self._order:
            val = -prev[xi]
            for s, w in q.in_arrows[xi]:
                c = cur[s]
                if c > 0:
                    val += w * c
            for t, ws in q.out_arrows[xi]:
                c = prev[t]
                if c > 0:
                    val += ws * c
            cur[xi] = val
        self._hi += 1
        self._levels[self._hi] = cur

    def _backward(self) -> None:
        q = self.quiver
        nxt = self._levels[self._lo]
        cur: Dict[str, int] = {}
        for xi in reversed(self._order):
            # mesh at (ξ, lo): f(ξ,lo) + f(ξ,lo-1) = Σ_{ζ->ξ} f(ζ,lo)⁺ + Σ_{ξ->η} f(η,lo-1)⁺
            val = -nxt[xi]
            for s, w in q.in_arrows[xi]:
                c = nxt[s]
                if c > 0:
                    val += w * c
            for t, ws in q.out_arrows[xi]:
                c = cur[t]
                if c > 0:
                    val += ws * c
            cur[xi] = val
        self._lo -= 1
        self._levels[self._lo] = cur

    def level_values(self, i: int) -> Dict[str, int]:
        while i > self._hi:
            self._forward()
        while i < self._lo:
            self._backward()
        return self._levels[i]

    def __call__(self, v: ZVertex) -> int:
        return self.level_values(v[1])[v[0]]

    evaluate = __call__

    def on_window(self, window: Window) -> Dict[ZVertex, int]:
        return {v: self(v) for v in window.vertices(self.quiver)}

    def on_slice(self, levels: Mapping[str, int]) -> Dict[ZVertex, int]:
        return {ZVertex(b, l): self(ZVertex(b, l)) for b, l in levels.items()}

    def restrict(self, level: int) -> SliceAssignment:
        return SliceAssignment(level, tuple((v, self.level_values(level)[v]) for v in self.quiver.vertices))

    def reanchor(self, level: int) -> "ClusterFunction":
        return ClusterFunction(self.quiver, self.restrict(level))

    def scaled(self, c: int) -> "ClusterFunction":
        """``c * f``; cluster-additive for ``c >= 0`` only."""
        if c < 0:
            raise ValueError("only non-negative multiples stay cluster-additive")
        a = self.anchor
        return ClusterFunction(self.quiver, SliceAssignment(a.level, tuple((b, c * v) for b, v in a.values)))

    def cached_vertices(self) -> Iterable[ZVertex]:
        for i in range(self._lo, self._hi + 1):
            for b in self._order:
                yield ZVertex(b, i)

    def __repr__(self) -> str:
        vals = ",".join(f"{b}={v}" for b, v in self.anchor.values)
        return f"ClusterFunction({self.quiver}, level={self.anchor.level}, {vals})"


def extend(q: QuiverSpec, anchor: SliceAssignment) -> ClusterFunction:
    return ClusterFunction(q, anchor)


def evaluate(f: ClusterFunction, v: ZVertex) -> int:
    return f(v)


# ---------------------------------------------------------------------------
# reflections

def _reflect(q: QuiverSpec, levels: Dict[str, int], vals: Dict[str, int], x: ZVertex):
    levels = dict(levels)
    vals = dict(vals)
    if x in slice_sources(levels, q):
        target = x.tau(-1)
        m = mesh(target, q)
    elif x in slice_sinks(levels, q):
        target = x.tau()
        m = mesh(x, q)
    else:
        raise ReflectionError(f"{x} is neither a source nor a sink of the slice")
    total = -vals[x.base]
    for y, w in m:
        if levels.get(y.base) != y.level:
            raise ReflectionError(f"mesh member {y} is not on the slice")
        total += w * pos_part(vals[y.base])
    levels[x.base] = target.level
    vals[x.base] = total
    return levels, vals


def cluster_reflection(
    q: QuiverSpec, values: Mapping[ZVertex, int], x: ZVertex
) -> Dict[ZVertex, int]:
    """Reflect slice values at a source (forward) or sink (backward) ``x``.

    Returns the values on the new slice, in which ``x`` is replaced by
    ``τ⁻¹x`` (source) or ``τx`` (sink).
    """
    levels = {v.base: v.level for v in values}
    if not is_slice(levels, q) or len(levels) != len(values):
        raise ReflectionError("vertices do not form a slice of ZΔ")
    if levels.get(x.base) != x.level:
        raise ReflectionError(f"{x} is not on the slice")
    vals = {v.base: int(c) for v, c in values.items()}
    levels, vals = _reflect(q, levels, vals, x)
    return {ZVertex(b, levels[b]): vals[b] for b in q.vertices}


# ---------------------------------------------------------------------------
# checks

@dataclass(frozen=True)
class MeshViolation:
    z: ZVertex
    tau_z: ZVertex
    predecessors: Tuple[Tuple[ZVertex, int], ...]
    lhs: int
    rhs: int

    def __str__(self) -> str:
        preds = " ".join(f"{y}x{m}" for y, m in self.predecessors)
        return f"mesh at {self.z}: f(z)+f(tau z) = {self.lhs} but sum m f(y)+ = {self.rhs} [{preds}]"


ValueSource = Union[ClusterFunction, Mapping[ZVertex, int]]


def _lookup(values: ValueSource, v: ZVertex) -> int:
    if isinstance(values, ClusterFunction):
        return values(v)
    try:
        return values[v]
    except KeyError:
        raise KeyError(f"value missing for mesh member {v}") from None


def _check(values: ValueSource, window: Window, q: QuiverSpec, truncate: bool) -> List[MeshViolation]:
    out = []
    for z in mesh_closed_vertices(window, q):
        preds = mesh(z, q)
        lhs = _lookup(values, z) + _lookup(values, z.tau())
        if truncate:
            rhs = sum(m * pos_part(_lookup(values, y)) for y, m in preds)
        else:
            rhs = sum(m * _lookup(values, y) for y, m in preds)
        if lhs != rhs:
            out.append(MeshViolation(z, z.tau(), tuple(preds), lhs, rhs))
    return out


def check_cluster_additive(values: ValueSource, window: Window, q: QuiverSpec) -> List[MeshViolation]:
    """Meshes inside ``window`` (``z`` and ``τz`` both in it) that fail the recurrence."""
    return _check(values, window, q, truncate=True)


def check_additive(values: ValueSource, window: Window, q: QuiverSpec) -> List[MeshViolation]:
    """As :func:`check_cluster_additive` but without the positive-part truncation."""
    return _check(values, window, q, truncate=False)


def _same_quiver(fs: Sequence[ClusterFunction]) -> QuiverSpec:
    if not fs:
        raise ValueError("need at least one function")
    q = fs[0].quiver
    for f in fs[1:]:
        if f.quiver.key != q.key:
            raise MismatchedQuiverError("functions live on different quivers")
    return q


def compatible(f: ClusterFunction, g: ClusterFunction, window: Window) -> bool:
    q = _same_quiver([f, g])
    return all(f(v) * g(v) >= 0 for v in window.vertices(q))


def pairwise_compatible(fs: Sequence[ClusterFunction], window: Window) -> bool:
    q = _same_quiver(fs)
    for v in window.vertices(q):
        vals = [f(v) for f in fs]
        if min(vals) < 0 < max(vals):
            return False
    return True


@dataclass
class CombinationResult:
    values: Dict[ZVertex, int]
    is_cluster_additive: bool
    violations: List[MeshViolation]
    predicted: bool  # what the compatibility / order criterion says


def sum_functions(fs: Sequence[ClusterFunction], window: Window) -> CombinationResult:
    """Pointwise sum on ``window`` with its mesh check and the compatibility verdict."""
    q = _same_quiver(fs)
    vals = {v: sum(f(v) for f in fs) for v in window.vertices(q)}
    bad = check_cluster_additive(vals, window, q)
    return CombinationResult(vals, not bad, bad, pairwise_compatible(fs, window))


def leq(g: ClusterFunction, f: ClusterFunction, window: Window) -> bool:
    """The partial order ``g <= f``: ``g⁺ <= f⁺`` and ``g⁻ <= f⁻`` on the window."""
    q = _same_quiver([f, g])
    for v in window.vertices(q):
        a, b = g(v), f(v)
        if pos_part(a) > pos_part(b) or neg_part(a) > neg_part(b):
            return False
    return True


def difference(f: ClusterFunction, g: ClusterFunction, window: Window) -> CombinationResult:
    """Pointwise ``f - g`` with its mesh check and the ``g <= f`` verdict."""
    q = _same_quiver([f, g])
    vals = {v: f(v) - g(v) for v in window.vertices(q)}
    bad = check_cluster_additive(vals, window, q)
    return CombinationResult(vals, not bad, bad, leq(g, f, window))


def combination(terms: Sequence[Tuple[int, ClusterFunction]], q: QuiverSpec, level: int = 0) -> ClusterFunction:
    """The cluster-additive function whose slice values are ``Σ c·f`` at ``level``.

    Only equal to the pointwise combination when that combination is itself
    cluster-additive (compatible non-negative terms).
    """
    vals = {b: 0 for b in q.vertices}
    for c, f in terms:
        if f.quiver.key != q.key:
            raise MismatchedQuiverError("functions live on different quivers")
        lv = f.level_values(level)
        for b in q.vertices:
            vals[b] += c * lv[b]
    return ClusterFunction.from_values(q, level, vals)


def l1_norm_on_slice(f: ClusterFunction, level: int) -> int:
    return sum(abs(v) for v in f.level_values(level).values())
