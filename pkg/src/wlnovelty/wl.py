"""Edge-labelled Weisfeiler-Leman colour refinement.

Colours are dense integers handed out by a :class:`HashStore` the first
time a node feature or refinement signature is seen, so the hash is exactly
injective. Ids depend on encounter order: one store must be shared by every
graph whose features are compared, and two runs agree only if they present
graphs in the same order.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Iterable

from .ilg import LabeledGraph

Signature = tuple  # (own colour, ((neighbour colour, edge label), ...) sorted)


class HashStore:
    def __init__(self) -> None:
        self._seed: dict[Hashable, int] = {}
        self._refine: dict[Signature, int] = {}

    def __len__(self) -> int:
        return len(self._seed) + len(self._refine)

    def seed_color(self, feature: Hashable) -> int:
        color = self._seed.get(feature)
        if color is None:
            color = self._seed[feature] = len(self)
        return color

    def refine_color(self, signature: Signature) -> int:
        color = self._refine.get(signature)
        if color is None:
            color = self._refine[signature] = len(self)
        return color

    def clear(self) -> None:
        self._seed.clear()
        self._refine.clear()


def canonical_signature(own: int, neigh: Iterable[tuple[int, int]]) -> Signature:
    return (own, tuple(sorted(neigh)))


def refine_layers(graph: LabeledGraph, iterations: int, store: HashStore) -> list[list[int]]:
    """Node colours of every layer ``0..iterations``."""
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    colors = [store.seed_color(f) for f in graph.features]
    layers = [colors]
    adjacency = graph.adjacency
    for _ in range(iterations):
        prev = colors
        colors = [
            store.refine_color(canonical_signature(prev[v], [(prev[u], lab) for u, lab in adjacency[v]]))
            for v in range(len(prev))
        ]
        layers.append(colors)
    return layers


def refine(graph: LabeledGraph, iterations: int, store: HashStore) -> Counter:
    """Colour multiset over all layers, as ``{colour: count}``."""
    counts: Counter = Counter()
    for layer in refine_layers(graph, iterations, store):
        counts.update(layer)
    return counts
