"""Command-line entry point.

Exit codes of ``solve``: 0 solved, 1 proved unsolvable, 2 resource limit,
3 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench as bench_mod
from .ground import GroundingBudgetExceeded
from .heuristics import HEURISTICS
from .ilg import build_ilg, to_dot
from .novelty import MODES, WL_FEATURES
from .pddl import PDDLError
from .search import Outcome, write_plan
from .symcheck import run_symcheck

EXIT_CODES = {Outcome.SOLVED: 0, Outcome.UNSOLVABLE: 1, Outcome.RESOURCE_LIMIT: 2}
EXIT_INPUT_ERROR = 3


def _optional_limit(value: str) -> float | None:
    return None if value.lower() in ("none", "inf", "0") else float(value)


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wl-iterations", type=int, default=2, metavar="L",
                   help="WL refinement rounds (default: 2)")
    p.add_argument("--wl-feature", choices=WL_FEATURES, default="pair",
                   help="novelty feature identity: (colour, count) pairs or colours")
    p.add_argument("--time-limit", type=_optional_limit, default=300.0, metavar="SEC",
                   help="per-search time limit in seconds, 'none' for unlimited (default: 300)")
    p.add_argument("--memory-limit", type=_optional_limit, default=4096.0, metavar="MB",
                   help="resident memory limit in MB, 'none' for unlimited (default: 4096)")
    p.add_argument("--max-expansions", type=int, default=None)
    p.add_argument("--max-atoms", type=int, default=bench_mod.DEFAULT_MAX_ATOMS)
    p.add_argument("--max-actions", type=int, default=bench_mod.DEFAULT_MAX_ACTIONS)


def _base_config(args, **kw) -> bench_mod.RunConfig:
    return bench_mod.RunConfig(
        wl_iterations=args.wl_iterations,
        wl_feature=args.wl_feature,
        time_limit=args.time_limit,
        memory_limit=args.memory_limit,
        max_expansions=args.max_expansions,
        max_atoms=args.max_atoms,
        max_actions=args.max_actions,
        **kw,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wlnovelty", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--heuristic", choices=sorted(HEURISTICS), default="ff")
    p.add_argument("--novelty", choices=MODES, default="none")
    p.add_argument("--plan-file", default="sas_plan")
    p.add_argument("--dump-ilg", metavar="PATH",
                   help="write the ILG of the initial state as DOT")
    _add_search_flags(p)

    p = sub.add_parser("bench", help="run configs over a suite and write tables and figures")
    p.add_argument("suite", nargs="?", default=str(bench_mod.BUNDLED_SUITE),
                   help="suite directory (default: the bundled mini-suite)")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--configs", default=None,
                   help="comma-separated config ids such as ff-none,ff-wl "
                        "(default: every heuristic x every novelty)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-plots", action="store_true")
    _add_search_flags(p)

    p = sub.add_parser("report", help="rebuild tables and figures from a runs.csv")
    p.add_argument("runs")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--no-plots", action="store_true")

    p = sub.add_parser("symcheck", help="check WL invariance under random object renamings")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--wl-iterations", type=int, default=2)
    return parser


def format_stats(record: bench_mod.RunRecord, result) -> str:
    s = result.stats
    fields = {
        "domain": record.domain,
        "problem": record.problem,
        "config": record.config,
        "outcome": record.outcome,
        "expansions": s.expansions,
        "evaluations": s.evaluations,
        "generated": s.generated,
        "duplicates": s.duplicates,
        "dead_ends": s.dead_ends,
        "peak_open": s.peak_open,
        "plan_length": "" if record.plan_length is None else record.plan_length,
        "wall_time_s": f"{s.wall_time:.3f}",
    }
    if result.limit:
        fields["limit"] = result.limit
    return " ".join(f"{k}={v}" for k, v in fields.items())


def cmd_solve(args) -> int:
    try:
        cfg = _base_config(args, domain=args.domain, problem=args.problem,
                           heuristic=args.heuristic, novelty=args.novelty)
        task = bench_mod.load_task(cfg)
    except (PDDLError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except GroundingBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES[Outcome.RESOURCE_LIMIT]
    if args.dump_ilg:
        Path(args.dump_ilg).write_text(to_dot(build_ilg(task, task.init)))
    result = bench_mod.search(task, cfg)
    record = bench_mod.to_record(task.domain_name, task.problem_name, cfg, result)
    if result.solved:
        write_plan(result.plan, args.plan_file)
    print(format_stats(record, result))
    return EXIT_CODES[result.outcome]


def cmd_bench(args) -> int:
    configs = args.configs.split(",") if args.configs else bench_mod.all_configs()
    try:
        for c in configs:
            bench_mod.parse_config_id(c)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    base = _base_config(args, domain="", problem="")
    paths = bench_mod.bench(args.suite, configs, args.output, base, args.jobs, not args.no_plots)
    for name, path in paths.items():
        print(f"{name}={path}")
    return 0


def cmd_report(args) -> int:
    records = bench_mod.read_runs(args.runs)
    paths = bench_mod.write_report(records, args.output, plots=not args.no_plots)
    for name, path in paths.items():
        print(f"{name}={path}")
    return 0


def cmd_symcheck(args) -> int:
    try:
        task = bench_mod.load_task(bench_mod.RunConfig(domain=args.domain, problem=args.problem))
    except (PDDLError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = run_symcheck(task, args.pairs, args.seed, args.wl_iterations)
    print(f"passed={report.passed} failed={report.failed} nontrivial={report.nontrivial}")
    return 0 if report.failed == 0 else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"solve": cmd_solve, "bench": cmd_bench, "report": cmd_report,
               "symcheck": cmd_symcheck}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
