"""Command-line interface.

Subcommands: ``generate`` (scenario -> instance file), ``run`` (one algorithm
on one instance), ``bench`` (multi-seed experiment with CSV + SVG outputs),
``oracle`` (exhaustive optimum for small instances). Exit codes: 0 success,
2 invalid input or configuration, 3 exhaustive-search guard violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, plots
from .baselines import SearchSpaceError, exhaustive_search
from .rng import RandomStream
from .sensing import build_coverage_table


def _cmd_generate(args) -> int:
    scenario = bench.load_scenario(args.scenario)
    seed = args.seed if args.seed is not None else scenario.seed
    instance = bench.generate_instance(scenario, RandomStream(seed))
    bench.write_instance(instance, args.out)
    print(f"wrote {args.out}: {instance.sensor_count} sensors, {instance.target_count} targets")
    return 0


def _cmd_run(args) -> int:
    instance = bench.read_instance(args.instance)
    table = build_coverage_table(instance)
    history, assignment = bench.run_single(table, args.algo, args.pop, args.iters, args.seed)
    record = bench.RunRecord(run_id=0, seed=args.seed, history=history)
    bench.write_runs_csv([record], args.out)
    print(
        f"{args.algo}: covered {record.final_nct}/{instance.target_count} targets "
        f"(start {record.initial_nct}); trace written to {args.out}"
    )
    if args.plot is not None:
        plots.save_deployment_svg(instance, assignment, args.plot)
        print(f"deployment figure written to {args.plot}")
    return 0


def _cmd_bench(args) -> int:
    scenario = bench.load_scenario(args.scenario)
    overrides = {}
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        scenario = bench.Scenario(**{**scenario.__dict__, **overrides})
    records, summary = bench.run_experiment(scenario, args.algo, fixed_instance=args.fixed_instance)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bench.write_runs_csv(records, out_dir / "runs.csv")
    bench.write_summary_csv([summary], out_dir / "summary.csv")
    plots.save_convergence_svg(records, out_dir / "convergence.svg")
    print(
        f"{summary.algorithm} on {summary.scenario}: mean {summary.mean:.1f} "
        f"+/- {summary.std:.1f} (min {summary.min}, max {summary.max}) over {summary.runs} runs"
    )
    print(f"outputs in {out_dir}: runs.csv, summary.csv, convergence.svg")
    return 0


def _cmd_oracle(args) -> int:
    instance = bench.read_instance(args.instance)
    table = build_coverage_table(instance)
    result = exhaustive_search(table)
    print(f"optimum: {result.fitness}/{instance.target_count} targets")
    print(f"assignment: {list(result.assignment)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antcover",
        description="Directional sensor network coverage optimization benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random instance from a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--out", required=True, help="instance JSON output path")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("run", help="run one algorithm on an instance file")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.add_argument("--algo", required=True, choices=bench.ALGORITHMS)
    p.add_argument("--pop", type=int, default=50, help="population size (default 50)")
    p.add_argument("--iters", type=int, default=100, help="iteration budget (default 100)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--out", required=True, help="convergence CSV output path")
    p.add_argument("--plot", default=None, help="also write a deployment SVG here")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("bench", help="run a multi-seed experiment from a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--algo", required=True, choices=bench.ALGORITHMS)
    p.add_argument("--runs", type=int, default=None, help="override the scenario run count")
    p.add_argument("--seed", type=int, default=None, help="override the scenario master seed")
    p.add_argument(
        "--fixed-instance",
        action="store_true",
        help="reuse one deployment for all runs instead of redrawing per run",
    )
    p.add_argument("--out-dir", required=True, help="directory for CSV and SVG outputs")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive optimum of a small instance")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SearchSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
