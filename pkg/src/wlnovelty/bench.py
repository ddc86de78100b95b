"""Batch runs over a benchmark suite and the coverage/expansion tables.

A suite is a directory with one subdirectory per domain, each holding a
``domain.pddl`` and any number of problem files. Results are written as
CSV files into an output directory:

``runs.csv``
    one record per (problem, config)
``coverage.csv``
    solved problems per domain and config, plus a ``total`` row
``normalised_coverage.csv``
    coverage divided by the number of problems in the domain solved by at
    least one config; the ``total`` row sums the domain values
``expansions.csv``
    for each pair of configs sharing a base heuristic, how often each side
    expands fewer nodes on problems both solve

Everything except the ``wall_time_s`` column of ``runs.csv`` is a pure
function of the search outcomes and therefore reproducible byte for byte.
"""

from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .ground import (DEFAULT_MAX_ACTIONS, DEFAULT_MAX_ATOMS, GroundingBudgetExceeded,
                     GroundTask, ground)
from .heuristics import HEURISTICS
from .novelty import MODES, make_evaluator
from .pddl import PDDLError, load_domain, load_problem
from .search import Limits, Outcome, SearchResult, gbfs, validate

log = logging.getLogger(__name__)

SUITES = Path(__file__).parent / "suites"
BUNDLED_SUITE = SUITES / "mini"
SYMMETRIC_SUITE = SUITES / "symmetric"

# the paired columns compared in the expansion table
EXPANSION_PAIRS = (("none", "at"), ("none", "wl"), ("none", "atwl"), ("at", "wl"))

RUN_COLUMNS = ("domain", "problem", "config", "outcome", "expansions", "evaluations",
               "plan_length", "wall_time_s")


@dataclass(frozen=True)
class RunConfig:
    domain: str
    problem: str
    heuristic: str = "ff"
    novelty: str = "none"
    wl_iterations: int = 2
    wl_feature: str = "pair"
    time_limit: float | None = 300.0
    memory_limit: float | None = 4096.0
    max_expansions: int | None = None
    max_atoms: int = DEFAULT_MAX_ATOMS
    max_actions: int = DEFAULT_MAX_ACTIONS

    def __post_init__(self):
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic '{self.heuristic}'")
        if self.novelty not in MODES:
            raise ValueError(f"unknown novelty '{self.novelty}'")

    @property
    def config_id(self) -> str:
        return config_id(self.heuristic, self.novelty)

    @property
    def limits(self) -> Limits:
        return Limits(time=self.time_limit, memory=self.memory_limit, expansions=self.max_expansions)


@dataclass(frozen=True)
class RunRecord:
    domain: str
    problem: str
    config: str
    outcome: str
    expansions: int
    evaluations: int
    plan_length: int | None
    wall_time_s: float

    @property
    def solved(self) -> bool:
        return self.outcome == Outcome.SOLVED.value


def config_id(heuristic: str, novelty: str) -> str:
    return f"{heuristic}-{novelty}"


def parse_config_id(cid: str) -> tuple[str, str]:
    heuristic, _, novelty = cid.partition("-")
    if heuristic not in HEURISTICS or novelty not in MODES:
        raise ValueError(f"bad config id '{cid}', expected e.g. 'ff-atwl'")
    return heuristic, novelty


def all_configs(heuristics: Iterable[str] = ("gc", "add", "ff"),
                novelties: Iterable[str] = MODES) -> list[str]:
    novelties = list(novelties)
    return [config_id(h, n) for h in heuristics for n in novelties]


def load_task(cfg: RunConfig) -> GroundTask:
    dom = load_domain(cfg.domain)
    return ground(load_problem(cfg.problem, dom), cfg.max_atoms, cfg.max_actions)


def search(task: GroundTask, cfg: RunConfig) -> SearchResult:
    evaluator = make_evaluator(task, cfg.heuristic, cfg.novelty, cfg.wl_iterations, cfg.wl_feature)
    result = gbfs(task, evaluator, cfg.limits)
    if result.solved and not validate(task, result.plan):
        raise AssertionError(f"invalid plan for {cfg.problem} with {cfg.config_id}")
    return result


def to_record(domain: str, problem: str, cfg: RunConfig, result: SearchResult) -> RunRecord:
    return RunRecord(
        domain=domain,
        problem=problem,
        config=cfg.config_id,
        outcome=result.outcome.value,
        expansions=result.stats.expansions,
        evaluations=result.stats.evaluations,
        plan_length=len(result.plan) if result.plan is not None else None,
        wall_time_s=result.stats.wall_time,
    )


# -- suite discovery and execution ------------------------------------------


@dataclass(frozen=True)
class Instance:
    domain: str  # suite-level domain name (directory name)
    domain_file: Path
    problem_file: Path

    @property
    def problem(self) -> str:
        return self.problem_file.stem


def discover(suite: str | Path) -> list[Instance]:
    suite = Path(suite)
    dirs = [suite] if (suite / "domain.pddl").exists() else sorted(p for p in suite.iterdir() if p.is_dir())
    instances = []
    for d in dirs:
        dom_file = d / "domain.pddl"
        if not dom_file.exists():
            log.warning("skipping %s: no domain.pddl", d)
            continue
        for prob in sorted(d.glob("*.pddl")):
            if prob.name != "domain.pddl":
                instances.append(Instance(d.name, dom_file, prob))
    return instances


def _run_instance(inst: Instance, cids: Sequence[str], base: RunConfig) -> list[RunRecord] | None:
    cfg0 = replace(base, domain=str(inst.domain_file), problem=str(inst.problem_file))
    try:
        task = load_task(cfg0)
    except (PDDLError, GroundingBudgetExceeded, OSError) as exc:
        log.warning("skipping %s/%s: %s", inst.domain, inst.problem, exc)
        return None
    records = []
    for cid in cids:
        h, n = parse_config_id(cid)
        cfg = replace(cfg0, heuristic=h, novelty=n)
        records.append(to_record(inst.domain, inst.problem, cfg, search(task, cfg)))
        log.info("%s/%s %s: %s", inst.domain, inst.problem, cid, records[-1].outcome)
    return records


def run_suite(suite: str | Path, configs: Sequence[str], base: RunConfig | None = None,
              jobs: int = 1) -> list[RunRecord]:
    """Run every config on every instance; records come back in suite order."""
    base = base or RunConfig(domain="", problem="")
    instances = discover(suite)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_instance, instances, [configs] * len(instances),
                                    [base] * len(instances)))
    else:
        results = [_run_instance(inst, configs, base) for inst in instances]
    return [r for batch in results if batch for r in batch]


# -- tables ------------------------------------------------------------------


def _domains(records: Sequence[RunRecord]) -> list[str]:
    return sorted({r.domain for r in records})


def _configs(records: Sequence[RunRecord]) -> list[str]:
    return list(dict.fromkeys(r.config for r in records))


def coverage_table(records: Sequence[RunRecord], configs: Sequence[str] | None = None):
    """``{domain: {config: solved count}}`` including a ``total`` row."""
    configs = list(configs or _configs(records))
    table = {d: {c: 0 for c in configs} for d in _domains(records)}
    for r in records:
        if r.solved and r.config in table[r.domain]:
            table[r.domain][r.config] += 1
    table["total"] = {c: sum(table[d][c] for d in table) for c in configs}
    return table


def normalised_coverage_table(records: Sequence[RunRecord], configs: Sequence[str] | None = None):
    configs = list(configs or _configs(records))
    solved_by_any: dict[str, set[str]] = {d: set() for d in _domains(records)}
    for r in records:
        if r.solved and r.config in configs:
            solved_by_any[r.domain].add(r.problem)
    cov = coverage_table(records, configs)
    table = {}
    for d, probs in solved_by_any.items():
        denom = len(probs)
        table[d] = {c: (cov[d][c] / denom if denom else 0.0) for c in configs}
    table["total"] = {c: sum(table[d][c] for d in solved_by_any) for c in configs}
    return table


def expansion_pairs(configs: Sequence[str]) -> list[tuple[str, str]]:
    present = set(configs)
    pairs = []
    for h in HEURISTICS:
        for a, b in EXPANSION_PAIRS:
            x, y = config_id(h, a), config_id(h, b)
            if x in present and y in present:
                pairs.append((x, y))
    return pairs


def expansion_table(records: Sequence[RunRecord], configs: Sequence[str] | None = None):
    """``{domain: {"x<y": n, "y<x": m, ...}}``, counting problems solved by both."""
    configs = list(configs or _configs(records))
    pairs = expansion_pairs(configs)
    by_key = {(r.domain, r.problem, r.config): r for r in records}
    problems = sorted({(r.domain, r.problem) for r in records})
    columns = [f"{x}<{y}" for p in pairs for x, y in (p, p[::-1])]
    table = {d: dict.fromkeys(columns, 0) for d in _domains(records)}
    for d, p in problems:
        for x, y in pairs:
            rx, ry = by_key.get((d, p, x)), by_key.get((d, p, y))
            if not (rx and ry and rx.solved and ry.solved):
                continue
            if rx.expansions < ry.expansions:
                table[d][f"{x}<{y}"] += 1
            elif ry.expansions < rx.expansions:
                table[d][f"{y}<{x}"] += 1
    table["total"] = {c: sum(table[d][c] for d in table) for c in columns}
    return table


# -- CSV ---------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def write_table(table: dict, path: Path) -> None:
    columns = list(next(iter(table.values())).keys()) if table else []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["domain", *columns])
        for row, values in table.items():
            writer.writerow([row, *(_fmt(values[c]) for c in columns)])


def write_runs(records: Sequence[RunRecord], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_COLUMNS)
        for r in records:
            row = asdict(r)
            row["wall_time_s"] = f"{r.wall_time_s:.3f}"
            writer.writerow([_fmt(row[c]) for c in RUN_COLUMNS])


def read_runs(path: str | Path) -> list[RunRecord]:
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(RunRecord(
                domain=row["domain"],
                problem=row["problem"],
                config=row["config"],
                outcome=row["outcome"],
                expansions=int(row["expansions"]),
                evaluations=int(row["evaluations"]),
                plan_length=int(row["plan_length"]) if row["plan_length"] else None,
                wall_time_s=float(row["wall_time_s"]),
            ))
    return records


def write_report(records: Sequence[RunRecord], out_dir: str | Path,
                 configs: Sequence[str] | None = None, plots: bool = True) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    configs = list(configs or _configs(records))
    paths = {
        "runs": out / "runs.csv",
        "coverage": out / "coverage.csv",
        "normalised_coverage": out / "normalised_coverage.csv",
        "expansions": out / "expansions.csv",
    }
    write_runs(records, paths["runs"])
    write_table(coverage_table(records, configs), paths["coverage"])
    write_table(normalised_coverage_table(records, configs), paths["normalised_coverage"])
    write_table(expansion_table(records, configs), paths["expansions"])
    if plots and records:
        from .plots import render_figures

        paths.update(render_figures(records, configs, out / "figures"))
    return paths


def bench(suite: str | Path, configs: Sequence[str], out_dir: str | Path,
          base: RunConfig | None = None, jobs: int = 1, plots: bool = True) -> dict[str, Path]:
    start = time.perf_counter()
    records = run_suite(suite, configs, base, jobs)
    log.info("bench finished %d runs in %.1fs", len(records), time.perf_counter() - start)
    return write_report(records, out_dir, configs, plots)

