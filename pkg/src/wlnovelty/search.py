"""Eager greedy best-first search.

Successors are evaluated when generated and queued by ``(key, insertion
order)``; the goal test happens at expansion. A state is evaluated at most
once: the first path to reach it is kept and never reopened. States whose
key is infinite are dead ends and are dropped.
"""

from __future__ import annotations

import enum
import heapq
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import psutil

from .ground import GroundAction, GroundTask

MEMORY_CHECK_INTERVAL = 1000


class Outcome(enum.Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    RESOURCE_LIMIT = "resource_limit"


@dataclass(frozen=True)
class Limits:
    time: float | None = 300.0  # seconds
    memory: float | None = 4096.0  # MB, resident set size of this process
    expansions: int | None = None


@dataclass
class SearchStats:
    expansions: int = 0
    evaluations: int = 0
    generated: int = 0
    duplicates: int = 0
    dead_ends: int = 0
    peak_open: int = 0
    wall_time: float = 0.0


@dataclass
class SearchResult:
    outcome: Outcome
    plan: list[GroundAction] | None
    stats: SearchStats = field(default_factory=SearchStats)
    limit: str | None = None  # "time", "memory" or "expansions"

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED


def _extract_plan(task: GroundTask, parents: dict, state) -> list[GroundAction]:
    plan = []
    while True:
        parent, action = parents[state]
        if parent is None:
            break
        plan.append(task.actions[action])
        state = parent
    plan.reverse()
    return plan


def gbfs(task: GroundTask, evaluator: Callable[[frozenset], float],
         limits: Limits = Limits()) -> SearchResult:
    stats = SearchStats()
    start = time.perf_counter()
    deadline = start + limits.time if limits.time is not None else math.inf
    process = psutil.Process() if limits.memory is not None else None

    def finish(outcome, plan=None, limit=None) -> SearchResult:
        stats.wall_time = time.perf_counter() - start
        return SearchResult(outcome, plan, stats, limit)

    init = task.init
    parents: dict[frozenset, tuple] = {init: (None, None)}
    key = evaluator(init)
    stats.evaluations += 1
    if key == math.inf:
        stats.dead_ends += 1
        return finish(Outcome.UNSOLVABLE)
    open_list = [(key, 0, init)]
    counter = 1
    goal = task.goal

    while open_list:
        _, _, state = heapq.heappop(open_list)
        if goal <= state:
            return finish(Outcome.SOLVED, _extract_plan(task, parents, state))
        if limits.expansions is not None and stats.expansions >= limits.expansions:
            return finish(Outcome.RESOURCE_LIMIT, limit="expansions")
        if stats.expansions % 64 == 0 and time.perf_counter() > deadline:
            return finish(Outcome.RESOURCE_LIMIT, limit="time")
        if process is not None and stats.expansions % MEMORY_CHECK_INTERVAL == 0:
            if process.memory_info().rss / 2**20 > limits.memory:
                return finish(Outcome.RESOURCE_LIMIT, limit="memory")

        stats.expansions += 1
        for action, succ in task.successors(state):
            stats.generated += 1
            if succ in parents:
                stats.duplicates += 1
                continue
            parents[succ] = (state, action)
            key = evaluator(succ)
            stats.evaluations += 1
            if key == math.inf:
                stats.dead_ends += 1
                continue
            heapq.heappush(open_list, (key, counter, succ))
            counter += 1
        if len(open_list) > stats.peak_open:
            stats.peak_open = len(open_list)

    return finish(Outcome.UNSOLVABLE)


def validate(task: GroundTask, plan: Sequence[GroundAction]) -> bool:
    state = task.init
    for action in plan:
        if not action.pre <= state:
            return False
        state = (state - action.delete) | action.add
    return task.goal <= state


def format_plan(plan: Sequence[GroundAction]) -> str:
    lines = [a.display for a in plan]
    lines.append(f"; cost = {len(plan)} (unit cost)")
    return "\n".join(lines) + "\n"


def write_plan(plan: Sequence[GroundAction], path: str | Path) -> None:
    Path(path).write_text(format_plan(plan))


def read_plan(task: GroundTask, text: str) -> list[GroundAction]:
    """Parse VAL-style plan text back into this task's ground actions."""
    by_name = {a.display: a for a in task.actions}
    plan = []
    for raw in text.splitlines():
        line = raw.split(";", 1)[0].strip().lower()
        if not line:
            continue
        words = line.strip("()").split()
        name = "(" + " ".join(words) + ")"
        if name not in by_name:
            raise ValueError(f"unknown action {name}")
        plan.append(by_name[name])
    return plan
