"""
Command line for the kernels and the benchmark harness.

    python cli.py matmul --n 256 --algo strassen --cutoff 32
    python cli.py mr-matmul --n 64 --reducers 4 --workers 4 --fault-plan 1:2
    python cli.py bench --suite smoke
"""

import argparse
import sys
import time
from pathlib import Path

import pandas as pd

from kernelsrc.defaults import BLOCKED_CUTOFF, FW_BASE_BLOCK, STRASSEN_CUTOFF, SUITE_PROFILES
from kernelsrc.src.bench import (
    KERNELS, LatencyModel, SuiteSpec, amdahl_bound, integer_valued, latency_table, run_suite, verify,
)
from kernelsrc.src.bfs import bfs_parallel, bfs_seq
from kernelsrc.src.errors import (
    CheckpointCorruptError, JobError, NoWorkersAvailableError, VerificationError,
)
from kernelsrc.src.floyd_warshall import (
    DistanceMatrix, FwConfig, count_block_touches, count_sweep_touches, fw_iterative, fw_recursive,
)
from kernelsrc.src.generators import gen_distances, gen_graph, gen_matrix
from kernelsrc.src.graph import format_edges, read_graph, read_weighted_edges
from kernelsrc.src.mapreduce import JobConfig, parse_fault_plan
from kernelsrc.src.matmul import matmul_blocked, matmul_naive, matmul_parallel, matmul_strassen
from kernelsrc.src.matrix import format_matrix, read_matrix, write_matrix
from kernelsrc.src.mr_matmul import mr_matmul_with_report
from utilities import REPORTS_ROOT, logger, suite_results_path

DOMAIN_ERRORS = (ValueError, VerificationError, JobError, NoWorkersAvailableError, CheckpointCorruptError)


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# ------------------------------------------------------------
# Subcommands
# ------------------------------------------------------------
def cmd_matmul(args) -> int:
    if args.a and args.b:
        a, b = read_matrix(args.a), read_matrix(args.b)
    else:
        a, b = gen_matrix(args.n, args.seed), gen_matrix(args.n, args.seed + 1)

    if args.algo == "naive":
        (c, stats), secs = _timed(lambda: matmul_naive(a, b))
    elif args.algo == "parallel":
        c, secs = _timed(lambda: matmul_parallel(a, b, args.threads))
        stats = None
    elif args.algo == "blocked":
        c, secs = _timed(lambda: matmul_blocked(a, b, args.threads, args.cutoff or BLOCKED_CUTOFF))
        stats = None
    else:
        (c, stats), secs = _timed(lambda: matmul_strassen(a, b, args.cutoff or STRASSEN_CUTOFF, args.threads))

    if args.algo != "naive":
        expected, _ = matmul_naive(a, b)
        verify(KERNELS[f"matmul_{args.algo}"], c, expected, exact=integer_valued(a.data, b.data))
    print(f"matmul_{args.algo} n={a.n} threads={args.threads}: {secs:.6f} s")
    if stats is not None:
        print(f"scalar multiplications: {stats.scalar_multiplications}, additions: {stats.scalar_additions}")
    if args.out:
        write_matrix(c, args.out)
    elif a.n <= 8:
        print(format_matrix(c), end="")
    return 0


def cmd_bfs(args) -> int:
    g = read_graph(args.graph) if args.graph else gen_graph(args.n, args.density, args.seed)
    if args.algo == "seq":
        res, secs = _timed(lambda: bfs_seq(g, args.source))
    else:
        res, secs = _timed(lambda: bfs_parallel(g, args.source, args.threads))
        verify(KERNELS["bfs_parallel"], res, bfs_seq(g, args.source))
    print(f"bfs_{args.algo} n={g.vertex_count} arcs={g.edge_count} threads={args.threads}: {secs:.6f} s")
    print(f"reached {len(res.reached)} vertices in {len(res.frontiers)} levels")
    if args.out:
        pd.DataFrame({"vertex": range(g.vertex_count), "level": res.level, "parent": res.parent}).to_csv(
            args.out, index=False)
    return 0


def cmd_apsp(args) -> int:
    if args.graph:
        n, edges = read_weighted_edges(args.graph)
        w = DistanceMatrix.from_edges(n, edges)
    else:
        w = gen_distances(args.n, args.density, args.seed)
    cfg = FwConfig(args.block or FW_BASE_BLOCK)
    if args.algo == "iterative":
        d, secs = _timed(lambda: fw_iterative(w))
    else:
        d, secs = _timed(lambda: fw_recursive(w, cfg))
        verify(KERNELS["fw_recursive"], d, fw_iterative(w), exact=integer_valued(w.dist))
    print(f"fw_{args.algo} n={w.n} block={cfg.base_block_order}: {secs:.6f} s")
    if args.touches:
        rec, it = count_block_touches(w, cfg), count_sweep_touches(w, cfg)
        print(f"block touches: recursive={rec} iterative={it} ratio={it / rec:.2f}")
    if args.out:
        pd.DataFrame(d.dist).to_csv(args.out, index=False, header=False)
    return 0


def cmd_mr_matmul(args) -> int:
    a, b = gen_matrix(args.n, args.seed), gen_matrix(args.n, args.seed + 1)
    cfg = JobConfig(
        num_workers=args.workers,
        num_map_tasks=args.map_tasks,
        max_missed_pings=args.max_missed_pings,
        checkpoint_interval=args.checkpoint_interval,
        fault_plan=parse_fault_plan(args.fault_plan),
        kill_master_at_checkpoint=args.kill_master_at_checkpoint,
        seed=args.seed,
    )
    (c, report), secs = _timed(lambda: mr_matmul_with_report(a, b, args.reducers, cfg))
    verify(KERNELS["mr_matmul"], c, matmul_naive(a, b)[0], exact=integer_valued(a.data, b.data))
    print(f"mr_matmul n={a.n} reducers={args.reducers} workers={args.workers}: {secs:.6f} s")
    print(report.to_text())
    if args.report:
        report.to_csv(args.report)
    return 0


def cmd_bench(args) -> int:
    if args.suite in SUITE_PROFILES:
        spec = SuiteSpec.from_profile(args.suite)
    else:
        spec = SuiteSpec.from_json(args.suite)
    if args.n:
        spec.sizes = args.n
    if args.threads:
        spec.threads = args.threads
    if args.repeats:
        spec.repeats = args.repeats
    out = Path(args.out) if args.out else suite_results_path(spec.name, args.reports_root)
    records = run_suite(spec, out)
    print(pd.DataFrame([r.as_row() for r in records]).to_string(index=False) if records else "no records")
    print(f"results written to {out}")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "matrix":
        text = format_matrix(gen_matrix(args.n, args.seed, args.value_mode))
    elif args.kind == "graph":
        g = gen_graph(args.n, args.density, args.seed)
        text = format_edges(g.vertex_count, list(g.edges()))
    else:
        text = format_edges(args.n, gen_graph(args.n, args.density, args.seed, weighted=True))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_amdahl(args) -> int:
    rows = [{"alpha": a, "max_speedup": amdahl_bound(a)} for a in args.alpha]
    print(pd.DataFrame(rows).to_string(index=False))
    return 0


def cmd_latency(args) -> int:
    print(latency_table(LatencyModel(clock_ghz=args.clock_ghz)).to_string(index=False))
    return 0


# ------------------------------------------------------------
# Parser
# ------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kernels", description="Multicore kernels and benchmark harness")
    parser.add_argument("--verbose", action="store_true", help="log per-task detail")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, density=False):
        p.add_argument("--n", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)
        if density:
            p.add_argument("--density", type=float, default=0.05)

    p = sub.add_parser("matmul", help="dense matrix multiplication")
    common(p)
    p.add_argument("--algo", choices=["naive", "parallel", "blocked", "strassen"], default="naive")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cutoff", "--block", dest="cutoff", type=int, default=None)
    p.add_argument("--a", help="matrix text file for A")
    p.add_argument("--b", help="matrix text file for B")
    p.add_argument("--out", help="write the product as matrix text")
    p.set_defaults(func=cmd_matmul)

    p = sub.add_parser("bfs", help="breadth-first search")
    common(p, density=True)
    p.add_argument("--algo", choices=["seq", "parallel"], default="seq")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--graph", help="graph edge-list file")
    p.add_argument("--out", help="write vertex levels as CSV")
    p.set_defaults(func=cmd_bfs)

    p = sub.add_parser("apsp", help="all-pairs shortest paths")
    common(p, density=True)
    p.add_argument("--algo", choices=["iterative", "recursive"], default="iterative")
    p.add_argument("--block", "--cutoff", dest="block", type=int, default=None)
    p.add_argument("--touches", action="store_true", help="print the block-touch proxy")
    p.add_argument("--graph", help="weighted edge-list file")
    p.add_argument("--out", help="write distances as CSV")
    p.set_defaults(func=cmd_apsp)

    p = sub.add_parser("mr-matmul", help="matrix multiplication as a MapReduce job")
    common(p)
    p.add_argument("--reducers", type=int, default=4)
    p.add_argument("--workers", "--threads", dest="workers", type=int, default=4)
    p.add_argument("--map-tasks", type=int, default=None)
    p.add_argument("--max-missed-pings", type=int, default=3)
    p.add_argument("--checkpoint-interval", type=int, default=0)
    p.add_argument("--fault-plan", default="", help="worker:after_k_tasks[,...]")
    p.add_argument("--kill-master-at-checkpoint", type=int, default=None)
    p.add_argument("--report", help="write the per-task report as CSV")
    p.set_defaults(func=cmd_mr_matmul)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", default="smoke", help=f"profile ({', '.join(SUITE_PROFILES)}) or JSON suite file")
    p.add_argument("--n", type=int, nargs="+", help="override sizes")
    p.add_argument("--threads", type=int, nargs="+", help="override thread counts")
    p.add_argument("--repeats", type=int)
    p.add_argument("--out", help="CSV path (default: <reports>/<suite>/results.csv)")
    p.add_argument("--reports-root", default=REPORTS_ROOT)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a seeded input")
    p.add_argument("kind", choices=["matrix", "graph", "weighted"])
    common(p, density=True)
    p.add_argument("--value-mode", choices=["integer", "float"], default="integer")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("amdahl", help="Amdahl speedup bound")
    p.add_argument("--alpha", type=float, nargs="+", default=[0.0, 0.5, 0.9, 0.95, 0.99])
    p.set_defaults(func=cmd_amdahl)

    p = sub.add_parser("latency", help="memory hierarchy access times")
    p.add_argument("--clock-ghz", type=float, default=LatencyModel().clock_ghz)
    p.set_defaults(func=cmd_latency)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logger.setLevel("DEBUG")
    try:
        return args.func(args)
    except VerificationError as e:
        logger.error(str(e))
        return 1
    except DOMAIN_ERRORS as e:
        logger.error(f"{args.command}: {e}")
        return 1
    except FileNotFoundError as e:
        logger.error(f"File not found: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
