"""Grounding of lifted problems and STRIPS transition semantics.

Schemata are instantiated with type-respecting objects inside a
delete-relaxed reachability fixpoint: an instance is produced only once all
of its preconditions are relaxed-reachable from the initial atoms, so
statically false or unreachable instances never appear.

States are ``frozenset[int]`` of atom ids. Ids are assigned in sorted
``(predicate, args)`` order, which makes every id-ordered traversal
canonical; use ``sorted(state)`` where order matters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .pddl import ActionSchema, Atom, LiftedProblem, format_atom

State = frozenset  # frozenset[int]

DEFAULT_MAX_ATOMS = 10**6
DEFAULT_MAX_ACTIONS = 10**7


class GroundingBudgetExceeded(RuntimeError):
    def __init__(self, n_atoms: int, n_actions: int, max_atoms: int, max_actions: int):
        self.n_atoms = n_atoms
        self.n_actions = n_actions
        super().__init__(
            f"grounding budget exceeded: {n_atoms} atoms (limit {max_atoms}), "
            f"{n_actions} actions (limit {max_actions})"
        )


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    pre: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]

    @property
    def display(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"

    def __str__(self) -> str:
        return self.display


@dataclass(frozen=True, eq=False)
class GroundTask:
    domain_name: str
    problem_name: str
    objects: tuple[str, ...]
    object_types: dict[str, str] = field(repr=False)
    atoms: tuple[Atom, ...] = field(repr=False)
    actions: tuple[GroundAction, ...] = field(repr=False)
    init: frozenset[int] = field(repr=False)
    goal: frozenset[int] = field(repr=False)

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @cached_property
    def atom_index(self) -> dict[Atom, int]:
        return {atom: i for i, atom in enumerate(self.atoms)}

    @cached_property
    def atom_names(self) -> tuple[str, ...]:
        return tuple(format_atom(a) for a in self.atoms)

    def state_names(self, state) -> list[str]:
        return [self.atom_names[i] for i in sorted(state)]

    def state_atoms(self, state) -> frozenset[Atom]:
        return frozenset(self.atoms[i] for i in state)

    def state_from_atoms(self, atoms) -> frozenset[int]:
        index = self.atom_index
        return frozenset(index[a] for a in atoms)

    @cached_property
    def _successor_index(self) -> tuple[tuple[int, ...], dict[int, tuple[int, ...]]]:
        # Each action is keyed on one precondition atom that can change value;
        # static atoms hold in every reachable state and filter nothing.
        touched = set()
        for a in self.actions:
            touched |= a.add
            touched |= a.delete
        action_count: dict[int, int] = {}
        for a in self.actions:
            for p in a.pre:
                if p in touched:
                    action_count[p] = action_count.get(p, 0) + 1
        always: list[int] = []
        keyed: dict[int, list[int]] = {}
        for idx, a in enumerate(self.actions):
            fluent = [p for p in a.pre if p in touched]
            if not fluent:
                always.append(idx)
                continue
            key = min(fluent, key=lambda p: (action_count[p], p))
            keyed.setdefault(key, []).append(idx)
        return tuple(always), {k: tuple(v) for k, v in keyed.items()}

    def applicable_actions(self, state) -> list[int]:
        """Indices of actions applicable in ``state``, ascending."""
        always, keyed = self._successor_index
        candidates = list(always)
        for p in state:
            bucket = keyed.get(p)
            if bucket:
                candidates.extend(bucket)
        candidates.sort()
        acts = self.actions
        return [i for i in candidates if acts[i].pre <= state]

    def successors(self, state) -> Iterator[tuple[int, frozenset[int]]]:
        for i in self.applicable_actions(state):
            a = self.actions[i]
            yield i, (state - a.delete) | a.add


def applicable(state, action: GroundAction) -> bool:
    return action.pre <= state


def apply(state, action: GroundAction) -> frozenset[int]:
    if not action.pre <= state:
        raise ValueError(f"{action.display} is not applicable")
    return (state - action.delete) | action.add


def is_goal(state, task: GroundTask) -> bool:
    return task.goal <= state


# -- grounding ---------------------------------------------------------------


class _Matcher:
    """Enumerates substitutions of one schema against a growing fact set."""

    def __init__(self, schema: ActionSchema, objects_of_type: dict[str, list[str]],
                 is_of_type):
        self.schema = schema
        self.var_types = dict(schema.params)
        self.objects_of_type = objects_of_type
        self.is_of_type = is_of_type
        in_pre = {t for _, args in schema.precondition for t in args if t.startswith("?")}
        self.free_vars = [v for v, _ in schema.params if v not in in_pre]

    def bindings(self, facts_by_pred: dict[str, set[tuple[str, ...]]]) -> Iterator[dict[str, str]]:
        pre = list(self.schema.precondition)
        for pred, _ in pre:
            if not facts_by_pred.get(pred):
                return
        yield from self._extend({}, pre, facts_by_pred)

    def _extend(self, binding, remaining, facts_by_pred):
        if not remaining:
            yield from self._free(binding)
            return
        # most-bound atom first, then the rarest predicate
        def score(atom):
            pred, args = atom
            bound = sum(1 for t in args if not t.startswith("?") or t in binding)
            return (-bound, len(facts_by_pred.get(pred, ())))

        best = min(range(len(remaining)), key=lambda i: score(remaining[i]))
        pred, args = remaining[best]
        rest = remaining[:best] + remaining[best + 1:]
        for fact in facts_by_pred.get(pred, ()):
            new = self._unify(args, fact, binding)
            if new is not None:
                yield from self._extend(new, rest, facts_by_pred)

    def _unify(self, args, fact, binding):
        new = binding
        for term, obj in zip(args, fact):
            if term.startswith("?"):
                bound = new.get(term)
                if bound is None:
                    if not self.is_of_type(obj, self.var_types[term]):
                        return None
                    if new is binding:
                        new = dict(binding)
                    new[term] = obj
                elif bound != obj:
                    return None
            elif term != obj:
                return None
        return new

    def _free(self, binding):
        if not self.free_vars:
            yield binding
            return
        domains = [self.objects_of_type.get(self.var_types[v], []) for v in self.free_vars]
        for combo in itertools.product(*domains):
            full = dict(binding)
            full.update(zip(self.free_vars, combo))
            yield full


def _substitute(atom: Atom, binding: dict[str, str]) -> Atom:
    pred, args = atom
    return (pred, tuple(binding.get(t, t) for t in args))


def ground(prob: LiftedProblem, max_atoms: int = DEFAULT_MAX_ATOMS,
           max_actions: int = DEFAULT_MAX_ACTIONS) -> GroundTask:
    dom = prob.domain
    object_types = prob.object_types
    objects_of_type: dict[str, list[str]] = {}
    for obj, typ in prob.all_objects:
        objects_of_type.setdefault("object", []).append(obj)
        for t in dom.ancestors(typ):
            objects_of_type.setdefault(t, []).append(obj)
    for objs in objects_of_type.values():
        objs.sort()

    type_sets = {obj: set(dom.ancestors(t)) | {"object"} for obj, t in prob.all_objects}

    def is_of_type(obj: str, typ: str) -> bool:
        return typ in type_sets[obj]

    init_atoms = prob.initial_atoms()
    reached: set[Atom] = set(init_atoms)
    facts_by_pred: dict[str, set[tuple[str, ...]]] = {}
    for pred, args in reached:
        facts_by_pred.setdefault(pred, set()).add(args)

    matchers = [_Matcher(s, objects_of_type, is_of_type) for s in dom.actions]
    found: dict[tuple[int, tuple[str, ...]], None] = {}

    changed = True
    while changed:
        changed = False
        for si, matcher in enumerate(matchers):
            schema = matcher.schema
            new_facts = []
            for binding in matcher.bindings(facts_by_pred):
                args = tuple(binding[v] for v, _ in schema.params)
                key = (si, args)
                if key in found:
                    continue
                found[key] = None
                if len(found) > max_actions:
                    raise GroundingBudgetExceeded(len(reached), len(found), max_atoms, max_actions)
                for eff in schema.add_effects:
                    atom = _substitute(eff, binding)
                    if atom not in reached:
                        new_facts.append(atom)
            # facts are merged after the sweep so the generator never sees a mutating set
            for atom in new_facts:
                if atom not in reached:
                    reached.add(atom)
                    facts_by_pred.setdefault(atom[0], set()).add(atom[1])
                    changed = True
            if len(reached) > max_atoms:
                raise GroundingBudgetExceeded(len(reached), len(found), max_atoms, max_actions)

    universe = sorted(reached | prob.goal)
    index = {atom: i for i, atom in enumerate(universe)}

    actions = []
    for si, args in sorted(found):
        schema = dom.actions[si]
        binding = dict(zip((v for v, _ in schema.params), args))
        pre = frozenset(index[_substitute(a, binding)] for a in schema.precondition)
        add = frozenset(index[_substitute(a, binding)] for a in schema.add_effects)
        delete = set()
        for a in schema.del_effects:
            atom = _substitute(a, binding)
            i = index.get(atom)
            # unreachable atoms are never true; add wins over delete
            if i is not None and i not in add:
                delete.add(i)
        actions.append(GroundAction(schema.name, args, pre, add, frozenset(delete)))

    return GroundTask(
        domain_name=dom.name,
        problem_name=prob.name,
        objects=tuple(sorted(object_types)),
        object_types=object_types,
        atoms=tuple(universe),
        actions=tuple(actions),
        init=frozenset(index[a] for a in init_atoms),
        goal=frozenset(index[a] for a in prob.goal),
    )
