"""Command line front end.

Exit codes: 0 when everything checked passes, 1 when a check, scan or law
run finds a violation, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .decomposition import conjecture_scan, decompose, default_workers, parse_shard
from .functions import ClusterFunction, check_additive, check_cluster_additive
from .hammocks import DynkinStructure, HammockError, NotDynkinError, left_hammock, nakayama_from_table
from .io import (
    FormatError,
    format_tsv,
    format_vertex_set,
    graph_dot,
    parse_slice_values,
    parse_tsv,
    parse_vertex_set,
    window_dot,
)
from .laws import LawError, run_laws
from .quiver import QuiverError, QuiverSpec, Window, ZVertex, dynkin_type, parse_quiver, parse_vertex
from .tilting import (
    MutationAnomaly,
    TiltingError,
    TiltingSet,
    d_T,
    enumerate_tilting_sets,
    is_confined,
    is_partial_tilting,
    mutate,
    mutation_graph,
    tilting_counts,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

# options whose values may legitimately start with "-"
_VALUE_OPTIONS = ("--range", "--at", "--slice-values", "--set", "--level")


class UsageError(Exception):
    pass


def load_quiver(spec: str) -> QuiverSpec:
    if spec.startswith("preset:"):
        return parse_quiver(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"quiver file {spec!r} not found (use preset:A3 etc. for presets)")
    return parse_quiver(path.read_text())


def parse_range(text: str):
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected lo:hi") from None
    return lo, hi


def _structure(q: QuiverSpec, args) -> DynkinStructure:
    return DynkinStructure(q, experimental=getattr(args, "experimental", False))


def _function(q: QuiverSpec, args) -> ClusterFunction:
    raw = parse_slice_values(args.slice_values)
    if any(":" in k for k in raw):
        return ClusterFunction.from_slice(q, {parse_vertex(k): v for k, v in raw.items()})
    return ClusterFunction.from_values(q, args.level, raw)


def _window(q: QuiverSpec, level: int, k: int, dynkin: bool, structure=None) -> Window:
    """``k`` fundamental domains from ``level`` for Dynkin quivers, ``k+1`` levels otherwise."""
    if k < 1:
        raise UsageError("--window must be >= 1")
    if dynkin:
        st = structure or DynkinStructure(q)
        return st.domain_window(level, k)
    return Window.levels(q, level, level + k)


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _dump(obj) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True))


def _parse_set(q: QuiverSpec, text: str, mult: Optional[str] = None) -> TiltingSet:
    vs = parse_vertex_set(text)
    for v in vs:
        if v.base not in q.index:
            raise UsageError(f"unknown base vertex {v.base!r}")
    if mult:
        try:
            ms = tuple(int(m) for m in mult.split(","))
        except ValueError:
            raise UsageError("--mult must be comma-separated integers") from None
        if len(ms) != len(vs):
            raise UsageError("--mult needs one entry per set member")
        return TiltingSet(tuple(vs), ms)
    return TiltingSet(tuple(vs))


# -- subcommands -------------------------------------------------------------

def cmd_extend(args) -> int:
    q = load_quiver(args.quiver)
    f = _function(q, args)
    window = _window(q, f.anchor.level, args.window, dynkin_type(q) is not None)
    values = f.on_window(window)
    if args.format == "json":
        _dump({"values": [{"vertex": str(v), "value": x} for v, x in values.items()]})
    elif args.format == "dot":
        _emit(window_dot(q, window, values))
    else:
        _emit(format_tsv(values, q))
    return EXIT_OK


def cmd_eval(args) -> int:
    q = load_quiver(args.quiver)
    f = _function(q, args)
    values = {v: f(v) for v in parse_vertex_set(args.at)}
    _emit(format_tsv(values, q))
    return EXIT_OK


def cmd_check(args) -> int:
    q = load_quiver(args.quiver)
    values = parse_tsv(Path(args.values).read_text())
    if not values:
        raise UsageError("no values to check")
    window = Window.spanning(values)
    missing = [v for v in window.vertices(q) if v not in values]
    if missing:
        raise UsageError(f"value table has holes, e.g. at {missing[0]}")
    bad = (check_additive if args.additive else check_cluster_additive)(values, window, q)
    for m in bad:
        _emit(str(m))
    kind = "additive" if args.additive else "cluster-additive"
    _emit(f"meshes={len(window) - q.n} violations={len(bad)} {kind}={'yes' if not bad else 'no'}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_hammock(args) -> int:
    q = load_quiver(args.quiver)
    p = parse_vertex(args.at)
    if args.cluster:
        return _cluster_hammock(q, p, args)
    table = left_hammock(p, q, args.budget)
    values = table.as_dict()
    if args.dot:
        _emit(window_dot(q, Window.spanning(values), {v: values.get(v, 0) for v in Window.spanning(values).vertices(q)},
                         highlight=[p]))
    else:
        _emit(format_tsv(values, q))
        _emit(f"# nakayama\t{nakayama_from_table(table, q)}")
    return EXIT_OK


def _cluster_hammock(q: QuiverSpec, x: ZVertex, args) -> int:
    st = _structure(q, args)
    window = st.domain_window(x.level, args.window)
    values = st.cluster_hammock(x).on_window(window)
    if args.dot:
        _emit(window_dot(q, window, values, highlight=st.orbit_in(x, window)))
    else:
        _emit(format_tsv(values, q))
    return EXIT_OK


def cmd_cluster_hammock(args) -> int:
    q = load_quiver(args.quiver)
    return _cluster_hammock(q, parse_vertex(args.at), args)


def cmd_tilting(args) -> int:
    q = load_quiver(args.quiver)
    st = _structure(q, args)
    if args.action == "enumerate":
        sets = enumerate_tilting_sets(st)
        if args.count_only:
            _emit(str(len(sets)))
        elif args.json:
            counts = tilting_counts(st)
            _dump({"count": len(sets), "counts": counts, "sets": [[str(v) for v in t] for t in sets]})
        elif args.dot:
            _emit(graph_dot([str(t) for t in sets], mutation_graph(sets, st)))
        else:
            for t in sets:
                _emit(str(t))
        return EXIT_OK
    if args.set is None:
        raise UsageError(f"tilting {args.action} needs --set")
    T = _parse_set(q, args.set)
    if args.action == "check":
        confined, witness = is_confined(list(T), st)
        partial = is_partial_tilting(list(T), st)
        full = partial and len(T) == q.n
        if args.json:
            _dump({
                "confined": confined,
                "witness": witness,
                "partial_tilting": partial,
                "tilting": full,
            })
        else:
            _emit(f"confined={'yes' if confined else 'no'}")
            if witness:
                _emit("witness=" + format_vertex_set(ZVertex(b, l) for b, l in witness.items()))
            _emit(f"partial_tilting={'yes' if partial else 'no'}")
            _emit(f"tilting={'yes' if full else 'no'}")
        return EXIT_OK if partial else EXIT_VIOLATION
    # mutate
    if args.at is None:
        raise UsageError("tilting mutate needs --at")
    x = parse_vertex(args.at)
    if not is_partial_tilting(list(T), st) or len(T) != q.n:
        raise UsageError(f"{T} is not a tilting set")
    try:
        res = mutate(T, x, st)
    except TiltingError as e:
        raise UsageError(str(e)) from None
    except MutationAnomaly as e:
        _emit(f"anomaly: {e}")
        return EXIT_VIOLATION
    if args.json:
        _dump({"removed": str(res.removed), "inserted": str(res.inserted),
               "new_set": [str(v) for v in res.new_set]})
    else:
        _emit(f"removed\t{res.removed}")
        _emit(f"inserted\t{res.inserted}")
        _emit(f"new_set\t{res.new_set}")
    return EXIT_OK


def cmd_dt(args) -> int:
    q = load_quiver(args.quiver)
    st = _structure(q, args)
    T = _parse_set(q, args.set, args.mult)
    try:
        f = d_T(T, st)
    except TiltingError as e:
        raise UsageError(str(e)) from None
    window = st.domain_window(0, args.window)
    values = f.on_window(window)
    if args.format == "json":
        _dump({"values": [{"vertex": str(v), "value": x} for v, x in values.items()]})
    elif args.format == "dot":
        _emit(window_dot(q, window, values, highlight=T.vertices))
    else:
        _emit(format_tsv(values, q))
    return EXIT_OK


def cmd_decompose(args) -> int:
    q = load_quiver(args.quiver)
    st = _structure(q, args)
    f = _function(q, args)
    d = decompose(f, args.max_domains, st)
    if args.json:
        _dump(d.as_json())
    else:
        for x, c in d.terms.items():
            _emit(f"{x}\t{c}")
        _emit(f"status={d.status} mode={d.mode} verified={'yes' if d.verified else 'no'} "
              f"terms={len(d.terms)} residual={d.residual_norm}")
        for p in d.problems:
            _emit(f"problem: {p}")
    return EXIT_OK if d.ok else EXIT_VIOLATION


def cmd_scan(args) -> int:
    q = load_quiver(args.quiver)
    lo, hi = parse_range(args.range)
    shard = parse_shard(args.shard) if args.shard else None
    workers = args.workers if args.workers is not None else default_workers()
    if workers < 1:
        raise UsageError("--workers must be >= 1")
    rep = conjecture_scan(q, lo, hi, args.max_domains, workers, shard, args.cursor)
    if args.json:
        _dump(rep.as_json())
    else:
        for a in rep.anomaly_anchors:
            _emit("anomaly\t" + ",".join(f"{b}={v}" for b, v in zip(q.vertices, a)))
        _emit(rep.summary())
    return EXIT_VIOLATION if rep.anomalies else EXIT_OK


def cmd_laws(args) -> int:
    q = load_quiver(args.quiver)
    lo, hi = parse_range(args.range)
    if args.trials < 0:
        raise UsageError("--trials must be >= 0")
    run = run_laws(q, args.law, args.trials, args.seed, (lo, hi))
    if args.json:
        _dump({
            "law": run.law, "trials": run.trials, "checked": run.checked,
            "skipped": run.skipped, "failed": run.failed, "by_law": run.by_law,
            "failures": [r.as_json() for r in run.failures],
        })
    else:
        for r in run.failures:
            _emit(json.dumps(r.as_json(), sort_keys=True))
        _emit(run.summary())
    return EXIT_VIOLATION if run.failures else EXIT_OK


def cmd_export_dot(args) -> int:
    q = load_quiver(args.quiver)
    dynkin = dynkin_type(q) is not None
    if args.slice_values:
        f = _function(q, args)
        window = _window(q, f.anchor.level, args.window, dynkin)
        values: Optional[Dict[ZVertex, int]] = f.on_window(window)
    else:
        window = _window(q, args.level, args.window, dynkin)
        values = None
    _emit(window_dot(q, window, values))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusteradd", description="Cluster-additive functions on stable translation quivers ZΔ.")
    sub = p.add_subparsers(dest="command", required=True)

    def quiver_opt(sp):
        sp.add_argument("--quiver", required=True, help="preset:<TYPE><n>[:orientation] or a quiver file")

    def function_opts(sp, required=True):
        sp.add_argument("--level", type=int, default=0, help="level of the anchor slice")
        sp.add_argument("--slice-values", required=required,
                        help="anchor values, e.g. 1=-1,2=0 (or b:l=v on an arbitrary slice)")

    sp = sub.add_parser("extend", help="extend slice values to a window")
    quiver_opt(sp)
    function_opts(sp)
    sp.add_argument("--window", type=int, default=1, help="fundamental domains (Dynkin) or extra levels")
    sp.add_argument("--format", choices=("tsv", "json", "dot"), default="tsv")
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("eval", help="evaluate at given vertices")
    quiver_opt(sp)
    function_opts(sp)
    sp.add_argument("--at", required=True, help="vertices b:l[,b:l...]")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("check", help="mesh-check a TSV value table")
    quiver_opt(sp)
    sp.add_argument("--values", required=True, help="TSV file with base, level, value columns")
    sp.add_argument("--additive", action="store_true", help="check plain additivity instead")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("hammock", help="left hammock function h'_p")
    quiver_opt(sp)
    sp.add_argument("--at", required=True)
    sp.add_argument("--cluster", action="store_true", help="cluster-hammock function h_x instead")
    sp.add_argument("--dot", action="store_true")
    sp.add_argument("--budget", type=int, default=None, help="support size limit")
    sp.add_argument("--window", type=int, default=1, help="fundamental domains shown with --cluster")
    sp.add_argument("--experimental", action="store_true", help="allow valued quivers")
    sp.set_defaults(func=cmd_hammock)

    sp = sub.add_parser("cluster-hammock", help="cluster-hammock function h_x")
    quiver_opt(sp)
    sp.add_argument("--at", required=True)
    sp.add_argument("--window", type=int, default=1)
    sp.add_argument("--dot", action="store_true")
    sp.add_argument("--experimental", action="store_true")
    sp.set_defaults(func=cmd_cluster_hammock)

    sp = sub.add_parser("tilting", help="tilting sets: enumerate, check, mutate")
    sp.add_argument("action", choices=("enumerate", "check", "mutate"))
    quiver_opt(sp)
    sp.add_argument("--set", help="vertices b:l,b:l,...")
    sp.add_argument("--at", help="member to exchange (mutate)")
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--dot", action="store_true", help="print the exchange graph (enumerate)")
    sp.add_argument("--experimental", action="store_true")
    sp.set_defaults(func=cmd_tilting)

    sp = sub.add_parser("dt", help="the function d_T of a tilting set")
    quiver_opt(sp)
    sp.add_argument("--set", required=True)
    sp.add_argument("--mult", help="multiplicities, one per member")
    sp.add_argument("--window", type=int, default=1)
    sp.add_argument("--format", choices=("tsv", "json", "dot"), default="tsv")
    sp.add_argument("--experimental", action="store_true")
    sp.set_defaults(func=cmd_dt)

    sp = sub.add_parser("decompose", help="decompose into cluster-hammock functions")
    quiver_opt(sp)
    function_opts(sp)
    sp.add_argument("--max-domains", type=int, default=3)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--experimental", action="store_true")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("scan", help="decompose every anchor in a value range")
    quiver_opt(sp)
    sp.add_argument("--range", required=True, help="lo:hi")
    sp.add_argument("--max-domains", type=int, default=3)
    sp.add_argument("--shard", help="i/n: the i-th (0-based) of n index ranges")
    sp.add_argument("--cursor", help="file holding the last finished anchor index")
    sp.add_argument("--workers", type=int, default=None,
                    help="process count (default: CLUSTER_QUIVER_THREADS or all CPUs)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("laws", help="randomized rectangle / wing checks on ZA_n")
    quiver_opt(sp)
    sp.add_argument("--law", choices=("rectangle", "wing"), required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--range", default="-3:3", help="anchor value range lo:hi")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_laws)

    sp = sub.add_parser("export-dot", help="DOT rendering of a window")
    quiver_opt(sp)
    function_opts(sp, required=False)
    sp.add_argument("--window", type=int, default=1)
    sp.set_defaults(func=cmd_export_dot)
    return p


def _glue_values(argv: Sequence[str]) -> List[str]:
    """Turn ``--range -2:2`` into ``--range=-2:2`` so argparse keeps the value."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, QuiverError, FormatError, NotDynkinError, LawError, TiltingError,
            HammockError, ValueError, OSError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
