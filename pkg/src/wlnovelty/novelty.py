"""Quantified-both novelty over pluggable feature mappings.

A state's features are compared against the best (lowest) base-heuristic
value recorded for each feature over previously evaluated states. Features
it strictly improves count as new, features it strictly worsens count as
old; the score is ``-|new|`` when anything is new, ``+|old|`` otherwise.

Feature mappings:

``at``
    the atoms of the state, ``("at", atom_id)``
``wl``
    WL colours of the state's ILG, ``("wl", colour, count)``; with
    ``wl_feature="color"`` the count is dropped, ``("wl", colour)``
``atwl``
    the disjoint union of both

Whether a WL feature is a colour or a ``(colour, count)`` pair is a real
choice: pairs treat "three sandwiches made" and "two sandwiches made" as
different features, colours do not. Pairs are the default.
"""

from __future__ import annotations

import math
from typing import Hashable, Iterable

from .ground import GroundTask
from .heuristics import Heuristic, make_heuristic
from .ilg import build_ilg
from .wl import HashStore, refine

MODES = ("none", "at", "wl", "atwl")
WL_FEATURES = ("pair", "color")

Feature = tuple  # ("at", atom) | ("wl", colour, count) | ("wl", colour)


def atom_features(state) -> list[Feature]:
    return [("at", p) for p in sorted(state)]


def wl_features(task: GroundTask, state, store: HashStore, iterations: int = 2,
                wl_feature: str = "pair") -> list[Feature]:
    counts = refine(build_ilg(task, state), iterations, store)
    if wl_feature == "pair":
        return [("wl", c, n) for c, n in sorted(counts.items())]
    if wl_feature == "color":
        return [("wl", c) for c in sorted(counts)]
    raise ValueError(f"unknown wl feature kind '{wl_feature}'")


def features_of(task: GroundTask, state, mode: str, store: HashStore | None = None,
                iterations: int = 2, wl_feature: str = "pair") -> frozenset:
    if mode == "at":
        return frozenset(atom_features(state))
    if mode not in ("wl", "atwl"):
        raise ValueError(f"unknown feature mapping '{mode}'")
    if store is None:
        raise ValueError("WL features need a HashStore")
    feats = wl_features(task, state, store, iterations, wl_feature)
    if mode == "atwl":
        feats += atom_features(state)
    return frozenset(feats)


class NoveltyTable:
    """Lowest base-heuristic value seen with each feature; unseen means inf."""

    def __init__(self) -> None:
        self._best: dict[Hashable, float] = {}

    def __len__(self) -> int:
        return len(self._best)

    def __contains__(self, feature) -> bool:
        return feature in self._best

    def __getitem__(self, feature) -> float:
        return self._best.get(feature, math.inf)

    def items(self):
        return self._best.items()

    def copy(self) -> "NoveltyTable":
        new = NoveltyTable()
        new._best = dict(self._best)
        return new

    def record(self, feats: Iterable, value: float) -> None:
        best = self._best
        for p in feats:
            if value < best.get(p, math.inf):
                best[p] = value

    def reset(self) -> None:
        self._best.clear()


def evaluate_qb(base_h: float, feats: Iterable, table: NoveltyTable) -> int:
    """Score one state, then record it in ``table``.

    The state is not part of the table while it is being scored.
    """
    if base_h == math.inf:
        raise ValueError("dead-end states are pruned before novelty evaluation")
    feats = list(feats)
    n_new = n_old = 0
    for p in feats:
        best = table[p]
        if base_h < best:
            n_new += 1
        elif base_h > best:
            n_old += 1
    table.record(feats, base_h)
    return -n_new if n_new else n_old


def reset(table: NoveltyTable) -> NoveltyTable:
    table.reset()
    return table


class Evaluator:
    """Search-facing evaluator: ``evaluator(state)`` gives the queue key.

    Plain evaluators return the base heuristic; ``inf`` marks a dead end.
    """

    def __init__(self, heuristic: Heuristic):
        self.heuristic = heuristic

    @property
    def config_id(self) -> str:
        return f"{self.heuristic.name}-none"

    def __call__(self, state) -> float:
        return self.heuristic(state)

    def reset(self) -> None:
        pass


class NoveltyEvaluator(Evaluator):
    def __init__(self, heuristic: Heuristic, mode: str, iterations: int = 2,
                 wl_feature: str = "pair"):
        super().__init__(heuristic)
        if mode not in ("at", "wl", "atwl"):
            raise ValueError(f"unknown feature mapping '{mode}'")
        if wl_feature not in WL_FEATURES:
            raise ValueError(f"unknown wl feature kind '{wl_feature}'")
        self.mode = mode
        self.iterations = iterations
        self.wl_feature = wl_feature
        self.table = NoveltyTable()
        self.store = HashStore()

    @property
    def config_id(self) -> str:
        return f"{self.heuristic.name}-{self.mode}"

    def features(self, state) -> frozenset:
        return features_of(self.heuristic.task, state, self.mode, self.store,
                           self.iterations, self.wl_feature)

    def __call__(self, state) -> float:
        h = self.heuristic(state)
        if h == math.inf:
            return h
        return evaluate_qb(h, self.features(state), self.table)

    def reset(self) -> None:
        self.table.reset()
        self.store.clear()


def make_evaluator(task: GroundTask, heuristic: str = "ff", novelty: str = "none",
                   iterations: int = 2, wl_feature: str = "pair") -> Evaluator:
    h = make_heuristic(heuristic, task)
    if novelty == "none":
        return Evaluator(h)
    return NoveltyEvaluator(h, novelty, iterations, wl_feature)
