"""Greedy decomposition into cluster-hammock functions and the exhaustive scanner."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice, product
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .functions import ClusterFunction, check_cluster_additive, neg_part
from .hammocks import DynkinStructure, structure_for
from .quiver import QuiverSpec, Window, ZVertex, sort_vertices
from .tilting import confined_representatives, pairwise_vanishing

DECOMPOSED = "decomposed"
RESIDUAL_NONZERO = "residual-nonzero"
WINDOW_EXHAUSTED = "window-exhausted"


@dataclass
class Decomposition:
    terms: Dict[ZVertex, int]
    residual_norm: int
    status: str
    mode: str = "theorem"
    steps: List[Tuple[ZVertex, int]] = field(default_factory=list)
    verified: bool = False
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == DECOMPOSED and self.verified and not self.problems

    def as_json(self) -> dict:
        return {
            "status": self.status,
            "mode": self.mode,
            "verified": self.verified,
            "residual_norm": self.residual_norm,
            "terms": [{"vertex": str(v), "coefficient": c} for v, c in self.terms.items()],
            "steps": [{"vertex": str(v), "coefficient": c} for v, c in self.steps],
            "problems": list(self.problems),
        }


def search_order(window: Window, level: int, q: QuiverSpec) -> List[ZVertex]:
    """Outward from ``level``: by distance, forward before backward, then base order."""
    rank = q.topo_rank
    return sorted(
        window.vertices(q),
        key=lambda v: (abs(v.level - level), 0 if v.level >= level else 1, rank[v.base]),
    )


def decompose(
    f: ClusterFunction,
    max_domains: int = 3,
    structure: Optional[DynkinStructure] = None,
) -> Decomposition:
    """Write ``f`` as Σ n_x h_x by repeatedly removing ``f(z)⁻ h_z`` at a negative ``z``.

    Every step is checked: the residual must stay cluster-additive on the
    window, ``f(z)⁻ h_z <= f`` and ``f(z) = f(Fz)`` must hold, and the norm
    on the anchor slice must drop. A successful result is re-summed and
    compared against ``f`` before ``verified`` is set.
    """
    if max_domains < 1:
        raise ValueError("max_domains must be >= 1")
    q = f.quiver
    st = structure if structure is not None else structure_for(q)
    mode = "theorem" if st.type and st.type.startswith("A") else "conjectural"
    level = f.anchor.level
    window = st.domain_window(level, max_domains, max_domains)
    order = search_order(window, level, q)
    anchor_slice = [ZVertex(b, level) for b in q.vertices]

    original = {v: f(v) for v in order}
    residual = dict(original)
    terms: Dict[ZVertex, int] = {}
    steps: List[Tuple[ZVertex, int]] = []
    problems: List[str] = []
    norm = sum(abs(residual[v]) for v in anchor_slice)
    status = None

    while True:
        z = next((v for v in order if residual[v] < 0), None)
        if z is None:
            status = DECOMPOSED if not any(residual.values()) else WINDOW_EXHAUSTED
            break
        c = neg_part(residual[z])
        h = st.cluster_hammock(z)
        fz = st.shift_F(z)
        if fz in window and residual[fz] != residual[z]:
            problems.append(f"value at {z} differs from value at F{z}")
        for v in order:
            hv = c * h(v)
            r = residual[v]
            if (hv > 0 and hv > max(r, 0)) or (hv < 0 and hv < min(r, 0)):
                problems.append(f"{c}*h_{z} is not below the residual at {v}")
                break
        for v in order:
            residual[v] -= c * h(v)
        rep = st.orbit_rep(z)
        terms[rep] = terms.get(rep, 0) + c
        steps.append((z, c))
        if check_cluster_additive(residual, window, q):
            status = RESIDUAL_NONZERO
            break
        new_norm = sum(abs(residual[v]) for v in anchor_slice)
        if new_norm >= norm and any(residual.values()):
            problems.append(f"norm did not drop after removing {c}*h_{z}")
            status = RESIDUAL_NONZERO
            break
        norm = new_norm

    result = Decomposition(
        terms=dict(sorted(terms.items(), key=lambda kv: (kv[0].level, q.topo_rank[kv[0].base]))),
        residual_norm=sum(abs(x) for x in residual.values()),
        status=status,
        mode=mode,
        steps=steps,
        problems=problems,
    )
    if status == DECOMPOSED:
        result.verified = _verify(result, original, window, st, f)
    return result


def _verify(d: Decomposition, original: Dict[ZVertex, int], window: Window,
            st: DynkinStructure, f: ClusterFunction) -> bool:
    q = st.quiver
    reps = list(d.terms)
    for v in window.vertices(q):
        if sum(c * st.cluster_hammock(x)(v) for x, c in d.terms.items()) != original[v]:
            d.problems.append(f"re-summation differs from the input at {v}")
            return False
    placed = confined_representatives(reps, st)
    if placed is None or not pairwise_vanishing(placed, st):
        d.problems.append("term vertices do not form a partial tilting set")
        return False
    for x, c in d.terms.items():
        if neg_part(f(x)) != c:
            d.problems.append(f"coefficient {c} at {x} differs from f({x})⁻ = {neg_part(f(x))}")
            return False
    return True


# ---------------------------------------------------------------------------
# conjecture properties

@dataclass
class PropertyReport:
    f_invariant: bool
    negative_locus_tilting: bool
    hammock_sum: bool
    negative_orbits: List[ZVertex]
    residual: int

    def as_tuple(self) -> Tuple[bool, bool, bool]:
        return (self.f_invariant, self.negative_locus_tilting, self.hammock_sum)


def conjecture_properties(
    f: Union[ClusterFunction, Mapping[ZVertex, int]],
    window: Optional[Window] = None,
    structure: Optional[DynkinStructure] = None,
    quiver: Optional[QuiverSpec] = None,
) -> PropertyReport:
    """Check F-invariance, the shape of the negative locus and ``f = Σ f(x)⁻ h_x``.

    A plain value table must be cluster-additive on ``window``; otherwise a
    ValueError is raised before any property is examined.
    """
    if isinstance(f, ClusterFunction):
        q = f.quiver
        st = structure if structure is not None else structure_for(q)
        if window is None:
            window = st.domain_window(f.anchor.level, 2, 1)
        lookup = f
    else:
        if window is None:
            raise ValueError("a window is required for value tables")
        q = quiver if quiver is not None else (structure.quiver if structure else None)
        if q is None:
            raise ValueError("quiver or structure required for value tables")
        st = structure if structure is not None else structure_for(q)
        table = dict(f)
        if check_cluster_additive(table, window, q):
            raise ValueError("value table is not cluster-additive on the window")

        def lookup(v):
            return table.get(v, 0)

    verts = window.vertices(q)
    f_inv = all(lookup(v) == lookup(st.shift_F(v)) for v in verts if st.shift_F(v) in window)

    negative = [v for v in verts if lookup(v) < 0]
    reps = sort_vertices({st.orbit_rep(v) for v in negative}, q)
    locus = {w for r in reps for w in st.orbit_in(r, window)}
    placed = confined_representatives(reps, st) if reps else []
    tilting = (
        locus == set(negative)
        and placed is not None
        and pairwise_vanishing(placed, st)
    )

    residual = 0
    for v in verts:
        s = sum(-lookup(r) * st.cluster_hammock(r)(v) for r in reps)
        residual += abs(lookup(v) - s)
    return PropertyReport(f_inv, tilting, residual == 0, reps, residual)


# ---------------------------------------------------------------------------
# scanning

@dataclass
class ScanReport:
    total: int = 0
    decomposed: int = 0
    anomalies: int = 0
    anomaly_anchors: List[Tuple[int, ...]] = field(default_factory=list)
    first_index: int = 0
    last_index: int = -1

    def summary(self) -> str:
        return f"anchors={self.total} decomposed={self.decomposed} anomalies={self.anomalies}"

    def as_json(self) -> dict:
        return {
            "anchors": self.total,
            "decomposed": self.decomposed,
            "anomalies": self.anomalies,
            "anomaly_anchors": [list(a) for a in self.anomaly_anchors],
            "first_index": self.first_index,
            "last_index": self.last_index,
        }


def parse_shard(text: str) -> Tuple[int, int]:
    """``"i/n"`` with ``0 <= i < n``."""
    try:
        i, n = (int(p) for p in text.split("/"))
    except ValueError:
        raise ValueError(f"bad shard {text!r}, expected i/n") from None
    if n < 1 or not 0 <= i < n:
        raise ValueError(f"bad shard {text!r}, need 0 <= i < n")
    return i, n


def shard_bounds(total: int, shard: Optional[Tuple[int, int]]) -> Tuple[int, int]:
    if shard is None:
        return 0, total
    i, n = shard
    return total * i // n, total * (i + 1) // n


def default_workers() -> int:
    env = os.environ.get("CLUSTER_QUIVER_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError:
            raise ValueError(f"CLUSTER_QUIVER_THREADS must be an integer, got {env!r}") from None
        if k < 1:
            raise ValueError("CLUSTER_QUIVER_THREADS must be >= 1")
        return k
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover
        return max(1, os.cpu_count() or 1)


_worker_state: Dict[str, object] = {}


def _init_worker(q: QuiverSpec, max_domains: int, level: int) -> None:
    _worker_state["structure"] = DynkinStructure(q)
    _worker_state["args"] = (max_domains, level)


def _check_anchor(anchor: Tuple[int, ...]) -> bool:
    st: DynkinStructure = _worker_state["structure"]
    max_domains, level = _worker_state["args"]
    q = st.quiver
    f = ClusterFunction.from_values(q, level, dict(zip(q.vertices, anchor)))
    return decompose(f, max_domains, st).ok


def conjecture_scan(
    q: QuiverSpec,
    lo: int,
    hi: int,
    max_domains: int = 3,
    workers: Optional[int] = None,
    shard: Optional[Tuple[int, int]] = None,
    cursor: Optional[Union[str, Path]] = None,
    level: int = 0,
) -> ScanReport:
    """Decompose every anchor in ``[lo, hi]^Δ₀`` (lexicographic, base order).

    ``shard=(i, n)`` restricts to the i-th of n contiguous index ranges.
    With a ``cursor`` file the index of the last finished anchor is stored
    after each one, and a rerun resumes after it; counts in the report then
    cover only the anchors processed in this run.
    """
    structure_for(q)  # reject non-Dynkin input early
    n = q.n
    values = range(lo, hi + 1)
    total = len(values) ** n if lo <= hi else 0
    start, stop = shard_bounds(total, shard)
    cursor_path = Path(cursor) if cursor is not None else None
    if cursor_path is not None and cursor_path.exists():
        text = cursor_path.read_text().strip()
        if text:
            start = max(start, int(text) + 1)
    report = ScanReport(first_index=start, last_index=start - 1)
    if start >= stop:
        return report

    anchors = list(islice(product(values, repeat=n), start, stop))
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(anchors) > 1:
        pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(q, max_domains, level))
        results: Iterable[bool] = pool.map(_check_anchor, anchors, chunksize=max(1, len(anchors) // (8 * workers)))
    else:
        pool = None
        _init_worker(q, max_domains, level)
        results = map(_check_anchor, anchors)
    try:
        for idx, (anchor, ok) in enumerate(zip(anchors, results), start):
            report.total += 1
            if ok:
                report.decomposed += 1
            else:
                report.anomalies += 1
                report.anomaly_anchors.append(anchor)
            report.last_index = idx
            if cursor_path is not None:
                cursor_path.write_text(f"{idx}\n")
    finally:
        if pool is not None:
            pool.shutdown()
    return report
