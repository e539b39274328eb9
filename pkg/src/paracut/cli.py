"""Command-line harness: solve, sweep, peel, and benchmark from the shell.

Subcommands: ``dsp``, ``conductance-star``, ``envelope``, ``greedy``,
``greedypp``, ``bench``.  Every run emits a JSON report (and derived
table/CSV views); wall times cover the whole run from graph load to
report emission.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import reports
from .errors import (
    CapacityOverflowError,
    ContractViolationError,
    DegenerateInputError,
    GraphFormatError,
    ValidationError,
)
from .graph import InputGraph, NodeSubset, load_edge_list, load_node_weights
from .ipc import ipc_maximize, ipc_minimize, verify_certificate, write_trace_csv
from .network import build_conductance_network, build_dsp_network
from .parametric import fully_parametric, leftmost_breakpoint, write_envelope_csv
from .peeling import charikar_greedy, greedy_pp

USER_ERRORS = (
    GraphFormatError,
    ValidationError,
    DegenerateInputError,
    CapacityOverflowError,
    ContractViolationError,
    OSError,
)


def _add_common(parser):
    parser.add_argument("graph", help="edge-list file ('u v' or 'u v w' lines)")
    parser.add_argument("--weighted", action="store_true", help="third column is an integer edge weight")
    parser.add_argument("--precision", type=int, default=4, metavar="K", help="decimal places for reported values (default 4)")
    parser.add_argument("--node-weights", metavar="FILE", help="per-node weight file ('id q' lines, original ids)")
    parser.add_argument("--output", metavar="DIR", help="directory for JSON/CSV artifacts")
    parser.add_argument("--format", choices=["json", "csv", "table"], default="table", help="stdout rendering (default table)")


def _load(args) -> InputGraph:
    graph = load_edge_list(args.graph, weighted=args.weighted)
    if getattr(args, "node_weights", None):
        graph = load_node_weights(graph, args.node_weights)
    return graph


def _emit(args, report: dict, files: dict[str, str] | None = None) -> None:
    if args.format == "json":
        print(reports.dump_json(report))
    elif args.format == "csv":
        print(reports.render_csv([report]), end="")
    else:
        print(reports.render_table([report]))
    if args.output:
        outdir = Path(args.output)
        outdir.mkdir(parents=True, exist_ok=True)
        stem = f"{report['dataset']}.{report['algorithm'].replace(':', '-')}"
        (outdir / f"{stem}.json").write_text(reports.dump_json(report) + "\n")
        for name, content in (files or {}).items():
            (outdir / f"{stem}.{name}").write_text(content)


def _read_id_list(path: str) -> list[int]:
    ids = []
    for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for tok in stripped.split():
            try:
                ids.append(int(tok))
            except ValueError:
                raise GraphFormatError(f"non-integer id {tok!r}", line_no)
    return ids


def _seed_from_args(graph: InputGraph, args) -> NodeSubset:
    """Seed set from a partition file (larger part) or an explicit id list."""
    if getattr(args, "partition", None):
        parts = _read_id_list(args.partition)
        if len(parts) != graph.n:
            raise GraphFormatError(
                f"partition has {len(parts)} entries but the graph has {graph.n} nodes"
            )
        parts_arr = np.asarray(parts)
        labels, counts = np.unique(parts_arr, return_counts=True)
        if labels.size < 2:
            raise GraphFormatError("partition must have at least two parts")
        seed_label = labels[np.argmax(counts)]
        return NodeSubset.from_bool_array(parts_arr == seed_label)
    if getattr(args, "seed_ids", None):
        originals = _read_id_list(args.seed_ids)
        lookup = {int(o): i for i, o in enumerate(graph.orig_ids)}
        try:
            dense = [lookup[o] for o in originals]
        except KeyError as exc:
            raise GraphFormatError(f"seed id {exc.args[0]} not present in the graph")
        return NodeSubset.from_indices(graph.n, dense)
    raise ValidationError("provide --partition or --seed-ids for the seed set")


def _restrict_component(graph: InputGraph, args, keep_also=None):
    """Resolve --component (a node id or 'largest') into an induced subgraph."""
    ncomp, labels = graph.connected_components()
    if ncomp == 1:
        return graph, None
    choice = getattr(args, "component", None)
    if choice is None:
        raise ValidationError(
            f"graph has {ncomp} components; the seeded ratio is trivially 0 on a "
            "disconnected graph. Pass --component largest (or a node id) to pick one."
        )
    if choice == "largest":
        target = int(np.argmax(np.bincount(labels)))
    else:
        lookup = {int(o): i for i, o in enumerate(graph.orig_ids)}
        if int(choice) not in lookup:
            raise ValidationError(f"--component node id {choice} not in the graph")
        target = int(labels[lookup[int(choice)]])
    keep = NodeSubset.from_bool_array(labels == target)
    return graph.induced_subgraph(keep), keep


def cmd_dsp(args) -> int:
    t0 = time.perf_counter()
    graph = _load(args)
    start_set = None
    if args.start_set_ids:
        lookup = {int(o): i for i, o in enumerate(graph.orig_ids)}
        start_set = NodeSubset.from_indices(
            graph.n, [lookup[i] for i in _read_id_list(args.start_set_ids)]
        )
    start_lambda = Fraction(args.start_lambda) if args.start_lambda else None
    result = ipc_maximize(graph, start_set=start_set, start_lambda=start_lambda)
    wall = time.perf_counter() - t0
    report = reports.make_report(
        dataset=Path(args.graph).stem,
        n=graph.n,
        m=graph.m,
        algorithm="ipc",
        ratio=result.ratio,
        set_size=len(result.optimal_set),
        iterations=result.lambdas_explored,
        wall_time=wall,
        cut_solves=result.cut_solve_count,
        certified=result.certified,
        precision=args.precision,
        subset_ids=graph.original_ids(result.optimal_set),
        config={"weighted": args.weighted, "precision": args.precision},
    )
    import io

    buf = io.StringIO()
    write_trace_csv(result, buf, precision=args.precision)
    _emit(args, report, {"trace.csv": buf.getvalue()})
    return 0


def cmd_conductance_star(args) -> int:
    t0 = time.perf_counter()
    graph = _load(args)
    graph, kept = _restrict_component(graph, args)
    seed = _seed_from_args(graph, args)
    if len(seed) == graph.n:
        raise GraphFormatError("the candidate side of the partition is empty")
    graph = graph.with_degree_weights()  # q_i = d_i for the seeded ratio
    result = ipc_minimize(graph, seed)
    certified = verify_certificate(graph, result.optimal_set, "min", seed)
    wall = time.perf_counter() - t0
    report = reports.make_report(
        dataset=Path(args.graph).stem,
        n=graph.n,
        m=graph.m,
        algorithm="conductance-star",
        ratio=result.ratio,
        set_size=len(result.optimal_set),
        iterations=result.lambdas_explored,
        wall_time=wall,
        cut_solves=result.cut_solve_count,
        certified=certified,
        precision=args.precision,
        subset_ids=graph.original_ids(result.optimal_set),
        config={
            "weighted": args.weighted,
            "precision": args.precision,
            "seed_size": len(seed),
            "component_restricted": kept is not None,
        },
    )
    import io

    buf = io.StringIO()
    write_trace_csv(result, buf, precision=args.precision)
    _emit(args, report, {"trace.csv": buf.getvalue()})
    return 0


def cmd_envelope(args) -> int:
    t0 = time.perf_counter()
    graph = _load(args)
    if args.problem == "dsp":
        net = build_dsp_network(graph)
        lo = Fraction(0)
        hi = max(Fraction(int(d), 2 * int(q)) for d, q in zip(graph.degrees, graph.q))
        if hi <= lo:
            hi = Fraction(1)
    else:
        graph, _ = _restrict_component(graph, args)
        seed = _seed_from_args(graph, args)
        graph = graph.with_degree_weights()
        net = build_conductance_network(graph, seed)
        lo, hi = Fraction(0), Fraction(1)
    if args.interval:
        lo, hi = Fraction(args.interval[0]), Fraction(args.interval[1])
    env = fully_parametric(net, lo, hi, precision=Fraction(1, 10**args.precision))
    wall = time.perf_counter() - t0

    import io

    buf = io.StringIO()
    write_envelope_csv(env, buf, precision=args.precision)
    left = leftmost_breakpoint(env) if len(env) else None
    report = reports.make_report(
        dataset=Path(args.graph).stem,
        n=graph.n,
        m=graph.m,
        algorithm=f"envelope-{args.problem}",
        ratio=left.lam if left else Fraction(0),
        set_size=left.set_size if left else 0,
        iterations=len(env),
        wall_time=wall,
        cut_solves=env.cut_solve_count,
        precision=args.precision,
        config={
            "interval": [str(lo), str(hi)],
            "precision": args.precision,
            "problem": args.problem,
        },
        extra={"breakpoints": len(env)},
    )
    _emit(args, report, {"envelope.csv": buf.getvalue()})
    return 0


def _cmd_peel(args, plus: bool) -> int:
    t0 = time.perf_counter()
    graph = _load(args)
    if plus:
        subset, dens, history = greedy_pp(graph, args.iterations)
        algorithm = f"greedypp:{args.iterations}"
    else:
        subset, dens = charikar_greedy(graph)
        history = [dens]
        algorithm = "greedy"
    wall = time.perf_counter() - t0
    report = reports.make_report(
        dataset=Path(args.graph).stem,
        n=graph.n,
        m=graph.m,
        algorithm=algorithm,
        ratio=dens,
        set_size=len(subset),
        iterations=len(history),
        wall_time=wall,
        precision=args.precision,
        subset_ids=graph.original_ids(subset),
        config={"weighted": args.weighted, "precision": args.precision},
    )
    lines = ["iteration,best_density"]
    lines += [
        f"{k + 1},{reports.format_ratio(d, args.precision)}"
        for k, d in enumerate(history)
    ]
    _emit(args, report, {"iterations.csv": "\n".join(lines) + "\n"})
    return 0


def _bench_cell(spec: dict, algorithm: str, precision: int) -> dict:
    """One isolated benchmark cell; loads its own graph copy."""
    t0 = time.perf_counter()
    graph = load_edge_list(spec["path"], weighted=bool(spec.get("weighted", False)))
    extra = {}
    if algorithm == "ipc":
        res = ipc_maximize(graph)
        ratio, size, iters, solves = (
            res.ratio,
            len(res.optimal_set),
            res.lambdas_explored,
            res.cut_solve_count,
        )
        extra["certified"] = res.certified
    elif algorithm == "greedy":
        subset, ratio = charikar_greedy(graph)
        size, iters, solves = len(subset), 1, 0
    elif algorithm.startswith("greedypp"):
        k = int(algorithm.split(":", 1)[1]) if ":" in algorithm else 100
        subset, ratio, _ = greedy_pp(graph, k)
        size, iters, solves = len(subset), k, 0
    elif algorithm == "envelope":
        net = build_dsp_network(graph)
        hi = max(Fraction(int(d), 2 * int(q)) for d, q in zip(graph.degrees, graph.q))
        env = fully_parametric(net, 0, hi if hi > 0 else 1)
        left = leftmost_breakpoint(env)
        ratio, size, iters, solves = left.lam, left.set_size, len(env), env.cut_solve_count
        extra["breakpoints"] = len(env)
    else:
        raise ValidationError(f"unknown algorithm {algorithm!r}")
    wall = time.perf_counter() - t0
    return reports.make_report(
        dataset=spec["name"],
        n=graph.n,
        m=graph.m,
        algorithm=algorithm,
        ratio=ratio,
        set_size=size,
        iterations=iters,
        wall_time=wall,
        cut_solves=solves,
        precision=precision,
        config={"path": spec["path"]},
        extra=extra,
    )


def cmd_bench(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    datasets = manifest.get("datasets", [])
    algorithms = manifest.get("algorithms", [])
    reps = int(manifest.get("repetitions", 1))
    outdir = Path(args.output or "bench-out")
    outdir.mkdir(parents=True, exist_ok=True)

    cells = [(spec, algo) for spec in datasets for algo in algorithms]
    results: list[dict] = []
    ok = True

    def run_cell(spec, algo):
        best = None
        for _ in range(max(reps, 1)):
            rep = _bench_cell(spec, algo, args.precision)
            if best is None or rep["wall_time_s"] < best["wall_time_s"]:
                best = rep
        return best

    if args.workers > 1 and cells:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [pool.submit(run_cell, spec, algo) for spec, algo in cells]
            outcomes = []
            for (spec, algo), fut in zip(cells, futures):
                try:
                    outcomes.append(fut.result())
                except Exception as exc:  # cell failure must not stop the run
                    outcomes.append(_failed_cell(spec, algo, exc))
                    ok = False
    else:
        outcomes = []
        for spec, algo in cells:
            try:
                outcomes.append(run_cell(spec, algo))
            except Exception as exc:
                outcomes.append(_failed_cell(spec, algo, exc))
                ok = False
    results.extend(outcomes)

    ipc_by_dataset = {
        r["dataset"]: r for r in results if r["algorithm"] == "ipc" and "error" not in r
    }
    summary_rows = []
    for r in results:
        row = {
            "dataset": r["dataset"],
            "algorithm": r["algorithm"],
            "value": r.get("ratio_decimal", ""),
            "wall_time_s": r.get("wall_time_s", ""),
            "status": "failed" if "error" in r else "ok",
        }
        base = ipc_by_dataset.get(r["dataset"])
        if base and "error" not in r:
            opt = Fraction(*map(int, base["ratio_exact"].split("/")))
            val = Fraction(*map(int, r["ratio_exact"].split("/")))
            gap = (opt - val) / opt if opt else Fraction(0)
            row["gap_vs_ipc"] = f"{float(100 * gap):.2f}%"
            if base["wall_time_s"] > 0:
                row["sdf"] = f"{r['wall_time_s'] / base['wall_time_s']:.2f}x"
        summary_rows.append(row)
        stem = f"{r['dataset']}.{r['algorithm'].replace(':', '-')}"
        (outdir / f"{stem}.json").write_text(reports.dump_json(r) + "\n")

    import csv as _csv

    fields = ["dataset", "algorithm", "value", "wall_time_s", "gap_vs_ipc", "sdf", "status"]
    with open(outdir / "summary.csv", "w", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in summary_rows:
            writer.writerow({k: row.get(k, "") for k in fields})
    widths = {k: max(len(k), *(len(str(r.get(k, ""))) for r in summary_rows)) if summary_rows else len(k) for k in fields}
    lines = ["  ".join(k.ljust(widths[k]) for k in fields)]
    for row in summary_rows:
        lines.append("  ".join(str(row.get(k, "")).ljust(widths[k]) for k in fields))
    table = "\n".join(lines)
    (outdir / "summary.txt").write_text(table + "\n")
    print(table)
    return 0 if ok else 1


def _failed_cell(spec, algo, exc) -> dict:
    return {
        "schema_version": reports.SCHEMA_VERSION,
        "dataset": spec.get("name", spec.get("path", "?")),
        "algorithm": algo,
        "error": f"{type(exc).__name__}: {exc}",
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paracut",
        description="Exact densest-subgraph and seeded-conductance solvers via parametric min-cuts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dsp", help="certified densest subgraph")
    _add_common(p)
    p.add_argument("--start-lambda", metavar="P/Q", help="override the starting ratio")
    p.add_argument("--start-set-ids", metavar="FILE", help="override the starting set (original ids)")
    p.set_defaults(func=cmd_dsp)

    p = sub.add_parser("conductance-star", help="certified seeded conductance (q = degree)")
    _add_common(p)
    p.add_argument("--partition", metavar="FILE", help="partition file, line i = part of node i; the larger part is the seed")
    p.add_argument("--seed-ids", metavar="FILE", help="explicit seed set (original ids)")
    p.add_argument("--component", metavar="ID|largest", help="restrict a disconnected graph to one component")
    p.set_defaults(func=cmd_conductance_star)

    p = sub.add_parser("envelope", help="all breakpoints of the parametric sweep")
    _add_common(p)
    p.add_argument("--problem", choices=["dsp", "conductance-star"], default="dsp")
    p.add_argument("--interval", nargs=2, metavar=("LO", "HI"), help="λ interval (rationals), default [0, max d/2q] or [0, 1]")
    p.add_argument("--partition", metavar="FILE")
    p.add_argument("--seed-ids", metavar="FILE")
    p.add_argument("--component", metavar="ID|largest")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("greedy", help="single-pass greedy peeling baseline")
    _add_common(p)
    p.set_defaults(func=lambda a: _cmd_peel(a, plus=False))

    p = sub.add_parser("greedypp", help="iterated load-peeling baseline")
    _add_common(p)
    p.add_argument("--iterations", type=int, default=100)
    p.set_defaults(func=lambda a: _cmd_peel(a, plus=True))

    p = sub.add_parser("bench", help="run a benchmark manifest")
    p.add_argument("manifest", help="JSON manifest: datasets, algorithms, repetitions")
    p.add_argument("--output", metavar="DIR", help="report directory (default bench-out)")
    p.add_argument("--precision", type=int, default=4)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
