"""Text formats: TSV value tables, vertex sets, DOT renderings."""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .quiver import QuiverSpec, Window, ZVertex, parse_vertex, sort_vertices, successors

MAX_DOT_VERTICES = 500
TSV_HEADER = "base\tlevel\tvalue"


class FormatError(ValueError):
    pass


def format_tsv(values: Mapping[ZVertex, int], q: QuiverSpec) -> str:
    lines = [TSV_HEADER]
    for v in sort_vertices(values, q):
        lines.append(f"{v.base}\t{v.level}\t{values[v]}")
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> Dict[ZVertex, int]:
    out: Dict[ZVertex, int] = {}
    for k, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#") or line == TSV_HEADER:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(f"line {k}: expected base<TAB>level<TAB>value")
        try:
            v = ZVertex(parts[0], int(parts[1]))
            out[v] = int(parts[2])
        except ValueError:
            raise FormatError(f"line {k}: level and value must be integers") from None
    return out


def parse_slice_values(text: str) -> Dict[str, int]:
    """``"1=-1,2=0"`` to ``{"1": -1, "2": 0}``."""
    out: Dict[str, int] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, val = part.partition("=")
        if not sep:
            raise FormatError(f"bad slice value {part!r}, expected base=value")
        try:
            out[key.strip()] = int(val)
        except ValueError:
            raise FormatError(f"value in {part!r} is not an integer") from None
    return out


def format_vertex_set(vs: Iterable[ZVertex]) -> str:
    return ",".join(str(v) for v in vs)


def parse_vertex_set(text: str) -> List[ZVertex]:
    try:
        return [parse_vertex(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise FormatError(str(e)) from None


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def window_dot(
    q: QuiverSpec,
    window: Window,
    values: Optional[Mapping[ZVertex, int]] = None,
    highlight: Iterable[ZVertex] = (),
    name: str = "window",
) -> str:
    """The part of ZΔ inside ``window`` as a DOT digraph, labels ``base:level=value``."""
    verts = window.vertices(q)
    if len(verts) > MAX_DOT_VERTICES:
        raise FormatError(f"window has {len(verts)} vertices; DOT export is limited to {MAX_DOT_VERTICES}")
    marked = set(highlight)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for v in verts:
        label = str(v) if values is None else f"{v}={values[v]}"
        attrs = [f"label={_quote(label)}"]
        if v in marked:
            attrs.append("style=filled")
        lines.append(f"  {_quote(str(v))} [{', '.join(attrs)}];")
    for v in verts:
        for w, m in successors(v, q):
            if w in window:
                extra = f" [label={_quote(str(m))}]" if m != 1 else ""
                lines.append(f"  {_quote(str(v))} -> {_quote(str(w))}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_dot(labels: Sequence[str], edges: Iterable[Tuple[int, int]], name: str = "mutation") -> str:
    """An undirected graph (e.g. the exchange graph of tilting sets)."""
    lines = [f"graph {_quote(name)} {{"]
    for k, lab in enumerate(labels):
        lines.append(f"  n{k} [label={_quote(lab)}];")
    for a, b in edges:
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
