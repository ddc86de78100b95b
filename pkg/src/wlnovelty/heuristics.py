"""Goal-count, additive and FF heuristics with unit action costs.

``math.inf`` marks states from which the delete relaxation cannot reach the
goal; goal count is never infinite.
"""

from __future__ import annotations

import heapq
import math

from .ground import GroundTask

INF = math.inf


class Heuristic:
    name = "base"

    def __init__(self, task: GroundTask):
        self.task = task
        self.goal = task.goal

    def __call__(self, state) -> float:
        raise NotImplementedError


class GoalCount(Heuristic):
    name = "gc"

    def __call__(self, state) -> int:
        return len(self.goal - state)


class _Relaxed(Heuristic):
    """Shared generalised-Dijkstra sweep over the delete relaxation."""

    def __init__(self, task: GroundTask):
        super().__init__(task)
        acts = task.actions
        self._pre_len = [len(a.pre) for a in acts]
        self._pre = [tuple(a.pre) for a in acts]
        self._add = [tuple(sorted(a.add)) for a in acts]
        self._no_pre = [i for i, a in enumerate(acts) if not a.pre]
        consumers: list[list[int]] = [[] for _ in range(task.n_atoms)]
        for i, a in enumerate(acts):
            for p in a.pre:
                consumers[p].append(i)
        self._consumers = consumers
        self._goal = tuple(sorted(self.goal))

    def _sweep(self, state, supporters: bool):
        """Return ``(cost, supporter)`` lists; supporter only if requested.

        The best supporter of an atom is its achiever of least additive cost,
        lowest action index on ties.
        """
        n = self.task.n_atoms
        cost = [INF] * n
        sup = [-1] * n if supporters else None
        done = [False] * n
        unsat = list(self._pre_len)
        acc = [0] * len(unsat)
        heap = []
        for p in state:
            cost[p] = 0
            heap.append((0, p))
        heapq.heapify(heap)

        add = self._add
        push = heapq.heappush

        def relax(a: int, c: int) -> None:
            for q in add[a]:
                cq = cost[q]
                if c < cq:
                    cost[q] = c
                    if sup is not None:
                        sup[q] = a
                    push(heap, (c, q))
                elif sup is not None and c == cq and a < sup[q]:
                    sup[q] = a

        for a in self._no_pre:
            relax(a, 1)

        goals_left = sum(1 for g in self._goal if cost[g] != 0)
        goal_set = self.goal
        max_goal = 0
        consumers = self._consumers
        while heap:
            c, p = heapq.heappop(heap)
            if done[p] or c > cost[p]:
                continue
            if goals_left == 0 and (sup is None or c >= max_goal):
                # every action of cost <= max_goal has been evaluated by now
                break
            done[p] = True
            if p in goal_set and c > 0:
                goals_left -= 1
                max_goal = c
            for a in consumers[p]:
                acc[a] += c
                unsat[a] -= 1
                if unsat[a] == 0:
                    relax(a, acc[a] + 1)
        return cost, sup

    def _goal_cost(self, cost) -> float:
        total = 0
        for g in self._goal:
            total += cost[g]
        return total


class Additive(_Relaxed):
    name = "add"

    def __call__(self, state) -> float:
        if self.goal <= state:
            return 0
        cost, _ = self._sweep(state, supporters=False)
        return self._goal_cost(cost)


class FF(_Relaxed):
    name = "ff"

    def __call__(self, state) -> float:
        if self.goal <= state:
            return 0
        cost, sup = self._sweep(state, supporters=True)
        if self._goal_cost(cost) == INF:
            return INF
        return len(self.relaxed_plan(state, sup))

    def relaxed_plan(self, state, sup) -> set[int]:
        plan: set[int] = set()
        marked: set[int] = set()
        stack = [g for g in self._goal if g not in state]
        pre = self._pre
        while stack:
            p = stack.pop()
            if p in marked or p in state:
                continue
            marked.add(p)
            a = sup[p]
            if a not in plan:
                plan.add(a)
                stack.extend(pre[a])
        return plan


HEURISTICS = {"gc": GoalCount, "add": Additive, "ff": FF}


def make_heuristic(name: str, task: GroundTask) -> Heuristic:
    try:
        return HEURISTICS[name](task)
    except KeyError:
        raise ValueError(f"unknown heuristic '{name}'") from None


def h_gc(state, task: GroundTask) -> int:
    return GoalCount(task)(state)


def h_add(state, task: GroundTask) -> float:
    return Additive(task)(state)


def h_ff(state, task: GroundTask) -> float:
    return FF(task)(state)
