"""Instance Learning Graphs of a problem at a given state.

Nodes are the objects plus every atom of ``state | goal``. Atom nodes are
tagged ``ag`` (achieved goal), ``ap`` (achieved non-goal) or ``ug``
(unachieved goal) together with their predicate; object nodes carry ``ob``.
An atom ``P(o1..on)`` is joined to each ``oi`` in both directions by an
edge labelled ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .ground import GroundTask
from .pddl import Atom, format_atom

OB = ("ob",)

NodeFeature = tuple  # ("ob",) or (tag, predicate) with tag in {"ap", "ug", "ag"}


class ProblemAtState(NamedTuple):
    task: GroundTask
    state: frozenset


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    features: tuple[NodeFeature, ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...]  # node -> ((neighbour, label), ...)
    names: tuple[str, ...]

    @property
    def n_nodes(self) -> int:
        return len(self.features)

    @cached_property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((u, v, lab) for u, nbrs in enumerate(self.adjacency) for v, lab in nbrs)


def _node_feature(atom: Atom, in_state: bool, in_goal: bool) -> NodeFeature:
    if in_state and in_goal:
        return ("ag", atom[0])
    if in_state:
        return ("ap", atom[0])
    return ("ug", atom[0])


def _assemble(objects: list[str], atoms: list[Atom], state: set, goal: set) -> LabeledGraph:
    obj_index = {o: i for i, o in enumerate(objects)}
    features: list[NodeFeature] = [OB] * len(objects)
    names = list(objects)
    adjacency: list[list[tuple[int, int]]] = [[] for _ in objects]
    for atom in atoms:
        node = len(features)
        features.append(_node_feature(atom, atom in state, atom in goal))
        names.append(format_atom(atom))
        nbrs = []
        for pos, obj in enumerate(atom[1], start=1):
            o = obj_index[obj]
            nbrs.append((o, pos))
            adjacency[o].append((node, pos))
        adjacency.append(nbrs)
    return LabeledGraph(
        features=tuple(features),
        adjacency=tuple(tuple(n) for n in adjacency),
        names=tuple(names),
    )


def build_ilg(task: GroundTask, state) -> LabeledGraph:
    """ILG of ``task`` with its initial state replaced by ``state``.

    Objects come first in lexicographic order, then atoms by id.
    """
    ids = sorted(state | task.goal)
    atoms = [task.atoms[i] for i in ids]
    state_atoms = {task.atoms[i] for i in state}
    goal_atoms = {task.atoms[i] for i in task.goal}
    return _assemble(list(task.objects), atoms, state_atoms, goal_atoms)


def ilg_from_atoms(objects: Iterable[str], state: Iterable[Atom], goal: Iterable[Atom]) -> LabeledGraph:
    """Same construction from raw atoms; atoms ordered by ``(predicate, args)``."""
    state, goal = set(state), set(goal)
    return _assemble(sorted(set(objects)), sorted(state | goal), state, goal)


def to_dot(graph: LabeledGraph) -> str:
    lines = ["graph ilg {"]
    for i, (feat, name) in enumerate(zip(graph.features, graph.names)):
        label = "ob" if feat == OB else f"{feat[0]}:{feat[1]}"
        shape = "ellipse" if feat == OB else "box"
        lines.append(f'  n{i} [label="{name}\\n{label}", shape={shape}];')
    for u, v, lab in graph.edges:
        if u < v:
            lines.append(f'  n{u} -- n{v} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
