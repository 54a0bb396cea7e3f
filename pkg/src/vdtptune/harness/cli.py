"""Command line front end.

Subcommands: tune, compare, simulate, sweep, bench. Exit status is 0 on
success, 1 for usage or validation problems, 2 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .. import optimizers
from ..fitness import evaluate, make_objective
from ..optimizers import ALGORITHMS, default_params
from ..sim.scenario import preset_names
from ..sim.transfer import effective_throughput
from ..space import DEFAULT_BOUNDS, VdtpConfig, bound_violations, quantize_for_protocol
from . import reports
from .benchfuncs import BENCH_FUNCTIONS, bench_bounds, get_function, random_search
from .campaign import (
    ExperimentConfig,
    load_experiment_config,
    qos_seed,
    resolve_scenario,
    run_campaign,
    run_seed,
)
from .sweep import SWEEP_HEADER, parse_grid, render_sweep, run_sweep, sweep_rows
from ..stats import summarize

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # default argparse exits with status 2
        raise UsageError(message)


def _add_common(p: _Parser, runs_default=None, defer=False):
    # defer=True leaves everything None so a config file's values are only
    # overridden by flags the user actually typed
    d = (lambda v: None) if defer else (lambda v: v)
    p.add_argument("--scenario", default=d("urban"), help=f"preset ({', '.join(preset_names())}) or a scenario .cfg path (default urban)")
    p.add_argument("--seed", type=int, default=d(1), help="master seed (default 1)")
    p.add_argument("--budget", type=int, default=d(1000), help="objective evaluations per run (default 1000)")
    p.add_argument("--runs", type=int, default=None if defer else runs_default, help=f"independent runs (default {runs_default})")
    p.add_argument("--workers", type=int, default=d(1), help="parallel worker processes (default 1)")
    p.add_argument("--out", default=d("results"), help="output directory (default ./results)")
    p.add_argument("--replications", type=int, default=d(10), help="simulation replications per evaluation (default 10)")


def build_parser() -> _Parser:
    parser = _Parser(prog="vdtptune", description="Tune chunked-transfer protocol parameters against a simulated vehicular channel.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tune", help="one optimizer run; writes trace and best-config files")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    _add_common(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("compare", help="multi-run campaign over several algorithms with statistics")
    p.add_argument("--algorithms", default=None, help="comma-separated algorithm list (default all)")
    p.add_argument("--config", default=None, help="experiment .cfg file; explicit flags override its values")
    _add_common(p, runs_default=30, defer=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="score one explicit configuration")
    p.add_argument("--chunk", type=float, required=True, help="chunk size in bytes")
    p.add_argument("--attempts", type=float, required=True, help="transmission attempts per request")
    p.add_argument("--timeout", type=float, required=True, help="retransmission timeout in seconds")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="one-at-a-time parameter sweep from a grid file")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--grid", required=True, help="grid file: 'param = v1 v2 ...' per line")
    _add_common(p, runs_default=5)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="optimizer check on an analytic function")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--function", default="sphere", help=f"one of {', '.join(sorted(BENCH_FUNCTIONS))}")
    p.add_argument("--dims", type=int, default=3)
    _add_common(p, runs_default=20)
    p.set_defaults(func=cmd_bench)

    return parser


def cmd_tune(args) -> int:
    scenario = resolve_scenario(args.scenario)
    params = default_params(args.algorithm)
    objective = make_objective(scenario, args.replications, args.seed)
    rec = optimizers.run(params, objective, DEFAULT_BOUNDS, seed=args.seed, max_evaluations=args.budget)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / reports.trace_filename(args.algorithm, 0)
    reports.write_trace_csv(trace_path, rec.trace)

    best = rec.best_config
    report = evaluate(best, scenario, n=args.replications, seed=qos_seed(args.seed))
    chunk, attempts, timeout = quantize_for_protocol(best)
    payload = {
        "algorithm": args.algorithm,
        "scenario": scenario.name,
        "seed": args.seed,
        "budget": args.budget,
        "evaluations": rec.evaluations,
        "best_eval_index": rec.best_eval_index,
        "best_fitness_search": rec.best_fitness,
        "best_position": [float(v) for v in rec.best_position],
        "best_config": {
            "chunk_bytes": chunk,
            "total_attempts": attempts,
            "retransmission_time_s": timeout,
        },
        "rescored_fitness": report.fitness,
        "rescore_replications": report.n,
    }
    best_path = out / f"best_{args.algorithm}.json"
    with open(best_path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")

    print(f"{args.algorithm} on {scenario.name}: best fitness {rec.best_fitness:.6f} "
          f"at evaluation {rec.best_eval_index}/{rec.evaluations}")
    print(f"best config: chunk={chunk} B, attempts={attempts}, timeout={timeout} s")
    print(f"wrote {trace_path} and {best_path}")
    return 0


def _campaign_config(args) -> ExperimentConfig:
    overrides = {
        "scenario": args.scenario,
        "runs": args.runs,
        "max_evaluations": args.budget,
        "replications": args.replications,
        "master_seed": args.seed,
        "output_dir": args.out,
        "workers": args.workers,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.config:
        if args.algorithms is not None:
            names = [t.strip().lower() for t in args.algorithms.split(",") if t.strip()]
            overrides["algorithms"] = tuple(default_params(n) for n in names)
        return load_experiment_config(args.config, **overrides)
    names = [t.strip().lower() for t in (args.algorithms or ",".join(ALGORITHMS)).split(",") if t.strip()]
    if len(names) < 2:
        raise UsageError("compare needs at least 2 algorithms")
    overrides["algorithms"] = tuple(default_params(n) for n in names)
    return ExperimentConfig(**overrides)


def cmd_compare(args) -> int:
    config = _campaign_config(args)
    if len(config.algorithms) < 2:
        raise UsageError("compare needs at least 2 algorithms")

    def progress(alg, run_index, rec):
        print(f"  [{alg} run {run_index}] best {rec.best_fitness:.6f} after {rec.evaluations} evaluations")

    result = run_campaign(config, progress=progress)
    written = reports.write_campaign_outputs(result, config.output_dir)

    print()
    print(reports.render_summary(result))
    print()
    print(reports.render_tests(result))
    print()
    print(reports.render_ranks(result))
    print()
    print(reports.render_qos(reports.qos_rows(result)))
    print()
    print(reports.render_timing(result))
    print(f"\nwrote {len(written)} files under {config.output_dir}")
    return 0


def cmd_simulate(args) -> int:
    config = VdtpConfig(args.chunk, args.attempts, args.timeout)
    violations = bound_violations(config, DEFAULT_BOUNDS)
    if violations:
        raise UsageError("; ".join(violations))
    scenario = resolve_scenario(args.scenario)
    report = evaluate(config, scenario, n=args.replications, seed=args.seed)

    print(f"scenario {scenario.name}, config chunk={args.chunk:g} B attempts={args.attempts:g} timeout={args.timeout:g} s")
    header = f"{'rep':>3}  {'time_s':>10}  {'lost':>8}  {'data_kB':>10}  {'kB_per_s':>10}  {'refused':>7}"
    print(header)
    print("-" * len(header))
    for i, o in enumerate(report.replications):
        print(f"{i:>3}  {o.transmission_time_s:>10.3f}  {o.lost_packets:>8.2f}  "
              f"{o.data_transferred_kbytes:>10.1f}  {effective_throughput(o):>10.2f}  {o.refused_sessions:>7}")
    mean_tp = sum(effective_throughput(o) for o in report.replications) / len(report.replications)
    print(f"fitness over {report.n} replications: {report.fitness:.6f}")
    print(f"mean effective throughput: {mean_tp:.2f} kB/s")
    return 0


def cmd_sweep(args) -> int:
    grid_path = Path(args.grid)
    if not grid_path.exists():
        raise UsageError(f"grid file not found: {args.grid}")
    grid = parse_grid(grid_path.read_text())
    result = run_sweep(
        args.algorithm,
        grid,
        args.scenario,
        runs=args.runs,
        master_seed=args.seed,
        max_evaluations=args.budget,
        replications=args.replications,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    reports.write_csv(csv_path, SWEEP_HEADER, sweep_rows(result))
    print(render_sweep(result))
    print(f"\nwrote {csv_path}")
    return 0


def cmd_bench(args) -> int:
    fn = get_function(args.function)
    bounds = bench_bounds(args.dims)
    params = default_params(args.algorithm)
    bests = []
    baseline = []
    for r in range(args.runs):
        seed = run_seed(args.seed, r)
        rec = optimizers.run(params, fn, bounds, seed=seed, max_evaluations=args.budget)
        bests.append(rec.best_fitness)
        baseline.append(random_search(fn, bounds, seed=seed, max_evaluations=args.budget).best_fitness)

    s = summarize(bests)
    b = summarize(baseline)
    print(f"{args.algorithm} on {args.function} ({args.dims}-D, budget {args.budget}, {args.runs} runs)")
    print(f"  best fitness: mean {s.mean:.4g}  std {s.std_dev:.4g}  min {s.minimum:.4g}  "
          f"median {s.median:.4g}  max {s.maximum:.4g}")
    print(f"  random search baseline median: {b.median:.4g}")
    wins = sum(1 for x, y in zip(bests, baseline) if x < y)
    print(f"  beats random search in {wins}/{args.runs} paired runs")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        raise
    except Exception as exc:
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
