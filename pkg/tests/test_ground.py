from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from wlnovelty.ground import (GroundingBudgetExceeded, GroundAction, apply, applicable, ground,
                              is_goal)
from wlnovelty.pddl import parse_domain, parse_problem

from conftest import MINI, SYMMETRIC, lifted, load
from oracles import bfs_reachable_atoms, brute_force_ground, reachable_states

SMALL = [("gripper", "p01"), ("gripper", "p02"), ("blocksworld", "p01"), ("chain", "p01"),
         ("chain", "p02"), ("childsnack", "p01")]


def test_no_schemata():
    dom = parse_domain("(define (domain d) (:predicates (p) (q)))")
    prob = parse_problem("(define (problem t) (:domain d) (:init (p)) (:goal (q)))", dom)
    task = ground(prob)
    assert task.actions == ()
    assert task.state_atoms(task.init) == {("p", ())}
    assert task.state_atoms(task.goal) == {("q", ())}


def test_gripper4_action_count_matches_brute_force():
    prob = lifted("gripper", "p02")
    _, pruned, _ = brute_force_ground(prob)
    task = ground(prob)
    # move: 2x2 room pairs, pick and drop: 4 balls x 2 rooms x 2 grippers each
    assert len(task.actions) == len(pruned) == 36


@pytest.mark.parametrize("domain,problem", SMALL)
def test_grounding_matches_brute_force(domain, problem):
    prob = lifted(domain, problem)
    reached, pruned, _ = brute_force_ground(prob)
    task = ground(prob)
    assert set(task.atoms) == reached
    got = {(a.name, a.args) for a in task.actions}
    assert got == {(name, args) for name, args, *_ in pruned}
    for a in task.actions:
        match = next(i for i in pruned if (i[0], i[1]) == (a.name, a.args))
        assert task.state_atoms(a.pre) == match[2]
        assert task.state_atoms(a.add) == match[3]
        assert task.state_atoms(a.delete) == match[4] - match[3]


@pytest.mark.parametrize("domain,problem", SMALL)
def test_pruning_keeps_every_reachable_atom(domain, problem):
    prob = lifted(domain, problem)
    _, _, instances = brute_force_ground(prob)
    atoms, _ = bfs_reachable_atoms(prob, instances)
    assert atoms <= set(ground(prob).atoms)


def test_statically_false_schema_has_no_instances():
    dom = parse_domain("""(define (domain d) (:predicates (p ?x) (never ?x) (q ?x))
      (:action dead :parameters (?x) :precondition (never ?x) :effect (q ?x))
      (:action live :parameters (?x) :precondition (p ?x) :effect (q ?x)))""")
    prob = parse_problem("(define (problem t) (:domain d) (:objects a b) "
                         "(:init (p a)) (:goal (q a)))", dom)
    task = ground(prob)
    assert [a.name for a in task.actions] == ["live"]


def test_budget_exceeded_reports_counts():
    with pytest.raises(GroundingBudgetExceeded) as err:
        ground(lifted("gripper", "p02"), max_actions=10)
    assert err.value.n_actions > 10
    assert "actions" in str(err.value)


def test_atom_ids_sorted_and_dense(gripper4):
    assert list(gripper4.atoms) == sorted(gripper4.atoms)
    assert len(set(gripper4.atoms)) == gripper4.n_atoms
    assert gripper4.init <= set(range(gripper4.n_atoms))
    assert gripper4.goal <= set(range(gripper4.n_atoms))


def test_add_wins_over_delete():
    dom = parse_domain("""(define (domain d) (:predicates (at ?x))
      (:action go :parameters (?a ?b) :precondition (at ?a)
        :effect (and (at ?b) (not (at ?a)))))""")
    prob = parse_problem("(define (problem t) (:domain d) (:objects x y) "
                         "(:init (at x)) (:goal (at y)))", dom)
    task = ground(prob)
    stay = next(a for a in task.actions if a.args == ("x", "x"))
    assert not stay.add & stay.delete
    assert apply(task.init, stay) == task.init


def test_empty_precondition_always_applicable():
    a = GroundAction("noop", (), frozenset(), frozenset(), frozenset())
    for s in (frozenset(), frozenset({1, 2})):
        assert applicable(s, a)
        assert apply(s, a) == s


def test_pick_applicable_in_gripper_init(gripper2):
    idx = gripper2.atom_index
    pick = next(a for a in gripper2.actions
                if a.display == "(pick ball1 rooma left)")
    assert applicable(gripper2.init, pick)
    assert ("at-robby", ("rooma",)) in gripper2.state_atoms(pick.pre)
    wrong_room = next(a for a in gripper2.actions if a.display == "(pick ball1 roomb left)")
    assert idx[("at-robby", ("roomb",))] in wrong_room.pre
    assert not applicable(gripper2.init, wrong_room)


def test_apply_requires_applicability(gripper2):
    drop = next(a for a in gripper2.actions if a.name == "drop")
    with pytest.raises(ValueError):
        apply(gripper2.init, drop)


def test_add_of_present_atom_appears_once():
    a = GroundAction("x", (), frozenset(), frozenset({3}), frozenset())
    assert apply(frozenset({3, 4}), a) == frozenset({3, 4})


def test_stack_then_unstack_restores(blocks4):
    by_name = {a.display: a for a in blocks4.actions}
    s0 = blocks4.init
    s1 = apply(s0, by_name["(unstack b1 b4)"])
    s2 = apply(s1, by_name["(stack b1 b4)"])
    assert s2 == s0
    s3 = apply(s1, by_name["(put-down b1)"])
    assert apply(s3, by_name["(pick-up b1)"]) == s1


def test_is_goal(gripper2):
    assert is_goal(gripper2.goal, gripper2)
    for g in gripper2.goal:
        assert not is_goal(gripper2.goal - {g}, gripper2)


@pytest.mark.parametrize("domain,problem", SMALL)
def test_successor_index_matches_definition(domain, problem):
    task = load(domain, problem)
    for s in list(reachable_states(task))[:300]:
        expected = [i for i, a in enumerate(task.actions) if a.pre <= s]
        assert task.applicable_actions(s) == expected
        for i, t in task.successors(s):
            assert t <= set(range(task.n_atoms))
            assert t == (s - task.actions[i].delete) | task.actions[i].add


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 40))
def test_random_walks_stay_in_universe(seed, steps):
    task = load("childsnack", "p01")
    rng = random.Random(seed)
    s = task.init
    for _ in range(steps):
        acts = [a for a in task.actions if applicable(s, a)]
        if not acts:
            break
        a = rng.choice(acts)
        assert a.pre <= s
        s = apply(s, a)
        assert s <= set(range(task.n_atoms))


def test_suites_are_bundled():
    assert (MINI / "gripper" / "domain.pddl").exists()
    assert len(list((SYMMETRIC / "childsnack").glob("p*.pddl"))) == 8
