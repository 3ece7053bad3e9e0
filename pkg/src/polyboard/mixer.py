"""On-the-fly mixing of same-script monolingual models.

The mixture is a convex combination over the union vocabulary. Each
component's unknown mass is split equally over the union words it lacks plus
its own unknown event, which keeps every context's total mass at exactly 1.
Weights adapt by a Bayesian update on committed words and are floored at
WEIGHT_FLOOR so no enabled language is ever silenced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CrossScriptMix, EmptyModelList
from .ngram import UNK

WEIGHT_FLOOR = 0.05


def _floor_simplex(weights: Sequence[float], floor: float = WEIGHT_FLOOR) -> tuple[float, ...]:
    """Project onto the simplex with a per-component lower bound."""
    n = len(weights)
    if floor * n > 1.0 + 1e-12:
        raise ValueError(f"floor {floor} infeasible for {n} components")
    total = sum(weights)
    w = [x / total for x in weights]
    fixed = [False] * n
    while True:
        below = [i for i in range(n) if not fixed[i] and w[i] < floor - 1e-15]
        if not below:
            break
        for i in below:
            w[i] = floor
            fixed[i] = True
        free = [i for i in range(n) if not fixed[i]]
        remaining = 1.0 - floor * sum(fixed)
        if not free:
            break
        free_sum = sum(w[i] for i in free)
        if free_sum <= 0.0:
            for i in free:
                w[i] = remaining / len(free)
        else:
            for i in free:
                w[i] = w[i] * remaining / free_sum
    return tuple(w)


class MixedModel:
    """Convex mixture of NGramModel-like components sharing one script."""

    def __init__(self, components: Sequence, weights: Sequence[float]):
        if not components:
            raise EmptyModelList("no models to mix")
        first = components[0]
        for other in components[1:]:
            if other.script != first.script:
                raise CrossScriptMix(
                    first.language_tag, first.script, other.language_tag, other.script
                )
        if len(weights) != len(components):
            raise ValueError("one weight per component required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        total = sum(weights)
        self.components = tuple(components)
        self.weights = tuple(w / total for w in weights)
        self.script = first.script
        self.language_tag = "+".join(c.language_tag for c in components)
        self.order = max(c.order for c in components)
        self.vocabulary = frozenset().union(*(c.vocabulary for c in components))
        self._events = self.vocabulary | {UNK}
        # Unknown-mass share: union words a component lacks, plus UNK itself.
        self._unk_split = tuple(
            len(self.vocabulary - c.vocabulary) + 1 for c in self.components
        )

    @property
    def events(self) -> frozenset[str]:
        return self._events

    def _component_prob(self, index: int, word: str, context: Sequence[str]) -> float:
        component = self.components[index]
        if word in component.vocabulary:
            return component.prob(word, context)
        if word in self._events:
            return component.unk_prob(context) / self._unk_split[index]
        return 0.0

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        if word not in self._events:
            return 0.0
        return sum(
            w * self._component_prob(i, word, context)
            for i, w in enumerate(self.weights)
        )

    def log10_prob(self, word: str, context: Sequence[str] = (), floor: float = -8.0) -> float:
        p = self.prob(word, context)
        if p <= 0.0:
            return floor
        return max(math.log10(p), floor)

    def unk_prob(self, context: Sequence[str] = ()) -> float:
        return self.prob(UNK, context)

    def seen_continuations(self, context: Sequence[str] = ()) -> set[str]:
        seen: set[str] = set()
        for component in self.components:
            seen.update(component.seen_continuations(context))
        return seen

    def top_unigrams(self, k: int) -> list[str]:
        candidates: set[str] = set()
        for component in self.components:
            candidates.update(component.top_unigrams(k))
        ranked = sorted(candidates, key=lambda w: (-self.prob(w), w))
        return ranked[:k]

    def with_weights(self, weights: Sequence[float]) -> "MixedModel":
        return MixedModel(self.components, weights)


def mix(models: Sequence, initial_weights: Sequence[float] | None = None) -> MixedModel:
    """Build a mixture; uniform weights unless given."""
    if not models:
        raise EmptyModelList("no models to mix")
    if initial_weights is None:
        initial_weights = [1.0 / len(models)] * len(models)
    return MixedModel(models, initial_weights)


def adapt_weights(mixed: MixedModel, committed_word: str) -> MixedModel:
    """One Bayesian step on the committed word, then floor-and-renormalize.

    Returns a new model; the input is untouched (concurrent readers keep a
    consistent view).
    """
    if not committed_word:
        raise ValueError("committed_word must be non-empty")
    likelihoods = []
    for index, component in enumerate(mixed.components):
        if committed_word in component.vocabulary:
            likelihood = component.prob(committed_word, ())
        else:
            likelihood = component.unk_prob(()) / mixed._unk_split[index]
        likelihoods.append(likelihood)
    posterior = [w * l for w, l in zip(mixed.weights, likelihoods)]
    if sum(posterior) <= 0.0:
        return mixed
    floored = _floor_simplex(posterior)
    return mixed.with_weights(floored)
