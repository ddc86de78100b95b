from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from wlnovelty.heuristics import FF, Additive, GoalCount, h_add, h_ff, h_gc, make_heuristic

from conftest import load
from oracles import (make_task, oracle_h_add, oracle_h_ff, oracle_h_plus, random_task,
                     reachable_states)

# p0 -> p1 -> p2
CHAIN = make_task(3, [([0], [1], []), ([1], [2], [])], init=[0], goal=[2])
# one action achieves both goals
TWIN = make_task(3, [([0], [1, 2], [])], init=[0], goal=[1, 2])


def all_states(n):
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            yield frozenset(combo)


def test_goal_count_examples(gripper4):
    assert h_gc(gripper4.goal, gripper4) == 0
    task = make_task(4, [], init=[], goal=[0, 1, 2])
    assert h_gc(frozenset(), task) == 3
    # four balls still in rooma
    assert h_gc(gripper4.init, gripper4) == 4


def test_chain():
    s = frozenset({0})
    assert h_add(s, CHAIN) == 2
    assert h_ff(s, CHAIN) == 2
    assert oracle_h_add(CHAIN, s) == 2


def test_shared_achiever():
    s = frozenset({0})
    assert h_add(s, TWIN) == 2
    assert h_ff(s, TWIN) == 1


def test_goal_states_are_zero():
    for h in (h_gc, h_add, h_ff):
        assert h(frozenset({0, 1, 2}), CHAIN) == 0


def test_unreachable_goal_is_infinite():
    task = make_task(3, [([0], [1], [])], init=[0], goal=[2])
    assert h_add(task.init, task) == math.inf
    assert h_ff(task.init, task) == math.inf
    assert h_gc(task.init, task) == 1


def test_unknown_heuristic():
    with pytest.raises(ValueError):
        make_heuristic("lmcut", CHAIN)


@pytest.mark.parametrize("seed", range(8))
def test_exhaustive_against_oracle(seed):
    rng = random.Random(seed)
    task = random_task(rng, rng.randint(4, 9), rng.randint(3, 10))
    add, ff = Additive(task), FF(task)
    for s in all_states(task.n_atoms):
        assert add(s) == oracle_h_add(task, s), sorted(s)
        assert ff(s) == oracle_h_ff(task, s), sorted(s)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_bounds_and_goal_zero(seed):
    rng = random.Random(seed)
    task = random_task(rng, rng.randint(3, 7), rng.randint(2, 8))
    hs = [GoalCount(task), Additive(task), FF(task)]
    for s in all_states(task.n_atoms):
        gc, add, ff = (h(s) for h in hs)
        goal = task.goal <= s
        assert (gc == 0) == goal and (add == 0) == goal and (ff == 0) == goal
        plus = oracle_h_plus(task, s)
        # infinite exactly when the relaxation cannot reach the goal
        assert (add == math.inf) == (plus == math.inf) == (ff == math.inf)
        if plus != math.inf:
            assert plus <= ff <= add


@pytest.mark.parametrize("domain,problem", [("gripper", "p01"), ("blocksworld", "p01"),
                                            ("childsnack", "p01"), ("chain", "p02")])
def test_bundled_tasks_against_oracle(domain, problem):
    task = load(domain, problem)
    add, ff = Additive(task), FF(task)
    states = sorted(reachable_states(task), key=sorted)
    for s in random.Random(0).sample(states, min(60, len(states))):
        assert add(s) == oracle_h_add(task, s)
        assert ff(s) == oracle_h_ff(task, s)
        assert ff(s) <= add(s)


def test_ff_tie_break_lowest_index():
    # atoms 1 and 2 both cost 1 and reach the goal 3 through different actions
    task = make_task(4, [([0], [1], []), ([0], [2], []), ([2], [3], []), ([1], [3], [])],
                     init=[0], goal=[3])
    ff = FF(task)
    _, sup = ff._sweep(task.init, supporters=True)
    assert sup[3] == 2
    assert ff.relaxed_plan(task.init, sup) == {1, 2}


def test_no_precondition_actions():
    task = make_task(2, [([], [0], []), ([0], [1], [])], init=[], goal=[1])
    assert h_add(frozenset(), task) == 2
    assert h_ff(frozenset(), task) == 2
