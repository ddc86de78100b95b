"""Object permutations and executable symmetry-invariance checks.

Renaming objects consistently in a state and the goal yields an isomorphic
ILG, so WL features must not change. Permutations are sampled within
classes of objects sharing a type and only kept if they map the goal and
the static atoms onto themselves, so a renamed state is a state of the same
problem.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .ground import GroundTask
from .ilg import ilg_from_atoms
from .pddl import Atom
from .wl import HashStore, refine


@dataclass(frozen=True)
class ObjectPermutation:
    mapping: Mapping[str, str]

    def __post_init__(self):
        if sorted(self.mapping) != sorted(self.mapping.values()):
            raise ValueError("not a bijection over its domain")

    @classmethod
    def identity(cls, objects: Iterable[str]) -> "ObjectPermutation":
        return cls({o: o for o in objects})

    @classmethod
    def swaps(cls, objects: Iterable[str], *pairs: tuple[str, str]) -> "ObjectPermutation":
        m = {o: o for o in objects}
        for a, b in pairs:
            m[a], m[b] = m[b], m[a]
        return cls(m)

    def __call__(self, obj: str) -> str:
        try:
            return self.mapping[obj]
        except KeyError:
            raise ValueError(f"object '{obj}' is outside the permutation domain") from None

    def inverse(self) -> "ObjectPermutation":
        return ObjectPermutation({v: k for k, v in self.mapping.items()})

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())


def permute_atoms(atoms: Iterable[Atom], f: ObjectPermutation) -> frozenset[Atom]:
    return frozenset((pred, tuple(f(o) for o in args)) for pred, args in atoms)


def permute_state(task: GroundTask, state, f: ObjectPermutation) -> frozenset[int]:
    """Rename a state of ``task``; every renamed atom must exist in the task."""
    renamed = permute_atoms(task.state_atoms(state), f)
    index = task.atom_index
    missing = [a for a in renamed if a not in index]
    if missing:
        raise ValueError(f"renamed atom {missing[0]} is not in the atom universe")
    return frozenset(index[a] for a in renamed)


def wl_multiset(objects, state_atoms, goal_atoms, iterations: int, store: HashStore) -> Counter:
    return refine(ilg_from_atoms(objects, state_atoms, goal_atoms), iterations, store)


def check_wl_invariance(task: GroundTask, state, f: ObjectPermutation, iterations: int = 2,
                        store: HashStore | None = None) -> bool:
    """WL multisets of the state and of its renaming (goal renamed too) agree."""
    store = store if store is not None else HashStore()
    atoms = task.state_atoms(state)
    goal = task.state_atoms(task.goal)
    original = wl_multiset(task.objects, atoms, goal, iterations, store)
    renamed = wl_multiset(task.objects, permute_atoms(atoms, f), permute_atoms(goal, f),
                          iterations, store)
    return original == renamed


def static_atoms(task: GroundTask) -> frozenset[int]:
    """Initial atoms no action adds or deletes; they hold in every state."""
    touched = set()
    for a in task.actions:
        touched |= a.add | a.delete
    return task.init - touched


def type_classes(task: GroundTask) -> list[list[str]]:
    """Objects grouped by declared type and static unary atoms.

    Untyped domains encode types as static unary predicates (``ball``,
    ``room``), so those count as type information too.
    """
    unary: dict[str, set[str]] = {}
    for i in static_atoms(task):
        pred, args = task.atoms[i]
        if len(args) == 1:
            unary.setdefault(args[0], set()).add(pred)
    groups: dict[tuple, list[str]] = {}
    for obj in task.objects:
        sig = (task.object_types.get(obj, "object"), tuple(sorted(unary.get(obj, ()))))
        groups.setdefault(sig, []).append(obj)
    return [sorted(g) for _, g in sorted(groups.items())]


def sample_goal_stabilizing(task: GroundTask, rng: random.Random,
                            tries: int = 200) -> ObjectPermutation:
    """Random type-respecting permutation fixing the goal and static atoms.

    Fixing the static atoms keeps renamed states inside the task's state
    space; fixing the goal keeps the renamed problem the same problem.
    Candidates shuffle every class at random, then only the objects absent
    from the goal; the identity is returned if nothing else is found.
    """
    fixed = task.state_atoms(task.goal | static_atoms(task))
    in_goal = {o for i in task.goal for o in task.atoms[i][1]}
    classes = type_classes(task)

    def shuffle(objs: list[str]) -> dict[str, str]:
        image = objs[:]
        rng.shuffle(image)
        return dict(zip(objs, image))

    for attempt in range(2 * tries):
        m: dict[str, str] = {}
        for cls in classes:
            m.update(shuffle([o for o in cls if o not in in_goal]))
            if attempt < tries:
                m.update(shuffle([o for o in cls if o in in_goal]))
            else:
                m.update({o: o for o in cls if o in in_goal})
        f = ObjectPermutation(m)
        if permute_atoms(fixed, f) == fixed:
            return f
    return ObjectPermutation.identity(task.objects)


def random_walk(task: GroundTask, rng: random.Random, steps: int) -> frozenset[int]:
    state = task.init
    for _ in range(steps):
        succs = list(task.successors(state))
        if not succs:
            break
        state = rng.choice(succs)[1]
    return state


@dataclass
class SymcheckReport:
    passed: int = 0
    failed: int = 0
    nontrivial: int = 0  # pairs whose renamed state differs from the original


def run_symcheck(task: GroundTask, pairs: int = 100, seed: int = 0, iterations: int = 2,
                 max_walk: int = 30) -> SymcheckReport:
    rng = random.Random(seed)
    store = HashStore()
    report = SymcheckReport()
    for _ in range(pairs):
        state = random_walk(task, rng, rng.randint(0, max_walk))
        f = sample_goal_stabilizing(task, rng)
        if permute_atoms(task.state_atoms(state), f) != task.state_atoms(state):
            report.nontrivial += 1
        if check_wl_invariance(task, state, f, iterations, store):
            report.passed += 1
        else:
            report.failed += 1
    return report
