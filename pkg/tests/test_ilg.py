from __future__ import annotations

import random
from collections import Counter

import pytest

from wlnovelty.ground import GroundTask
from wlnovelty.ilg import OB, build_ilg, ilg_from_atoms, to_dot

from conftest import load
from oracles import reachable_states

OBJECTS = ("a", "b", "c")
STATE = {("ontable", ("b",)), ("on", ("c", "b")), ("on", ("b", "a")), ("ontable", ("c",))}
GOAL = {("ontable", ("b",)), ("on", ("c", "b")), ("ontable", ("a",))}


def blocks_scene_task() -> GroundTask:
    atoms = tuple(sorted(STATE | GOAL))
    index = {a: i for i, a in enumerate(atoms)}
    return GroundTask("blocksworld", "blocks-scene", OBJECTS, {o: "object" for o in OBJECTS}, atoms, (),
                      frozenset(index[a] for a in STATE), frozenset(index[a] for a in GOAL))


def test_blocks_scene_nodes_and_tags():
    g = ilg_from_atoms(OBJECTS, STATE, GOAL)
    assert g.n_nodes == 8
    feats = dict(zip(g.names, g.features))
    assert Counter(f[0] for f in g.features) == {"ob": 3, "ag": 2, "ap": 2, "ug": 1}
    assert feats["(ontable b)"] == ("ag", "ontable")
    assert feats["(on c b)"] == ("ag", "on")
    assert feats["(on b a)"] == ("ap", "on")
    assert feats["(ontable c)"] == ("ap", "ontable")
    assert feats["(ontable a)"] == ("ug", "ontable")
    assert all(feats[o] == OB for o in OBJECTS)


def test_blocks_scene_edge_labels():
    g = ilg_from_atoms(OBJECTS, STATE, GOAL)
    node = {n: i for i, n in enumerate(g.names)}
    on_cb = node["(on c b)"]
    assert set(g.adjacency[on_cb]) == {(node["c"], 1), (node["b"], 2)}
    assert (on_cb, 1) in g.adjacency[node["c"]]
    assert (on_cb, 2) in g.adjacency[node["b"]]


def test_build_ilg_agrees_with_raw_atoms():
    task = blocks_scene_task()
    g1 = build_ilg(task, task.init)
    g2 = ilg_from_atoms(OBJECTS, STATE, GOAL)
    assert g1.features == g2.features
    assert g1.adjacency == g2.adjacency


def test_nullary_atom_single_node():
    g = ilg_from_atoms((), {("p", ())}, {("p", ())})
    assert g.features == (("ag", "p"),)
    assert g.edges == ()


def test_unachieved_goal_only():
    g = ilg_from_atoms(("o",), set(), {("q", ("o",))})
    assert g.features == (OB, ("ug", "q"))
    assert set(g.edges) == {(1, 0, 1), (0, 1, 1)}


@pytest.mark.parametrize("domain,problem", [("gripper", "p02"), ("blocksworld", "p02"),
                                            ("childsnack", "p02"), ("chain", "p02")])
def test_structural_invariants(domain, problem):
    task = load(domain, problem)
    rng = random.Random(0)
    states = sorted(reachable_states(task), key=sorted)
    for s in rng.sample(states, min(40, len(states))):
        g = build_ilg(task, s)
        atoms = s | task.goal
        assert g.n_nodes == len(task.objects) + len(atoms)
        assert len(g.edges) == 2 * sum(len(task.atoms[i][1]) for i in atoms)
        edges = set(g.edges)
        assert all((v, u, lab) in edges for u, v, lab in edges)
        max_arity = max(len(a[1]) for a in task.atoms)
        assert all(1 <= lab <= max_arity for _, _, lab in edges)
        for v, f in enumerate(g.features):
            if f != OB:
                labels = Counter(lab for _, lab in g.adjacency[v])
                assert all(c == 1 for c in labels.values())


def test_renaming_gives_isomorphic_graph():
    rng = random.Random(3)
    objs = list(OBJECTS)
    image = objs[:]
    rng.shuffle(image)
    f = dict(zip(objs, image))

    def ren(atoms):
        return {(p, tuple(f[o] for o in args)) for p, args in atoms}

    g1 = ilg_from_atoms(OBJECTS, STATE, GOAL)
    g2 = ilg_from_atoms(OBJECTS, ren(STATE), ren(GOAL))
    pos2 = {n: i for i, n in enumerate(g2.names)}

    def image_name(name):
        if name in f:
            return f[name]
        pred, *args = name.strip("()").split()
        return "(" + " ".join([pred] + [f[a] for a in args]) + ")"

    m = {i: pos2[image_name(n)] for i, n in enumerate(g1.names)}
    assert sorted(m.values()) == list(range(g1.n_nodes))
    for v in range(g1.n_nodes):
        assert g1.features[v] == g2.features[m[v]]
        assert sorted((m[u], lab) for u, lab in g1.adjacency[v]) == sorted(g2.adjacency[m[v]])


def test_dot_dump():
    dot = to_dot(ilg_from_atoms(OBJECTS, STATE, GOAL))
    assert dot.startswith("graph ilg {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == 7  # sum of arities of the five atoms
