import math

import pytest

from polyboard.errors import CrossScriptMix, EmptyModelList
from polyboard.mixer import MixedModel, WEIGHT_FLOOR, adapt_weights, mix
from polyboard.ngram import UNK, train_ngram


class FixedModel:
    """Hand-specified distribution for exactly checkable mixture values."""

    def __init__(self, tag, dist, script="Latn"):
        self.language_tag = tag
        self.script = script
        self.order = 1
        self._dist = dist
        self.vocabulary = frozenset(w for w in dist if w != UNK)

    @property
    def events(self):
        return self.vocabulary | {UNK}

    def prob(self, word, context=()):
        return self._dist.get(word, 0.0)

    def log10_prob(self, word, context=(), floor=-8.0):
        p = self.prob(word, context)
        return max(math.log10(p), floor) if p > 0 else floor

    def unk_prob(self, context=()):
        return self._dist.get(UNK, 0.0)

    def seen_continuations(self, context=()):
        return set()

    def top_unigrams(self, k):
        return sorted(self.vocabulary, key=lambda w: (-self._dist[w], w))[:k]


EN = train_ngram([["water", "good"], ["good", "water"]], 2, language_tag="en", script="Latn")
FY = train_ngram([["wetter", "goed"], ["goed", "wetter"]], 2, language_tag="fy", script="Latn")
RU = train_ngram([["вода"]], 1, language_tag="ru", script="Cyrl")


def test_single_model_mix_is_identity():
    mixed = mix([EN])
    for ctx in ([], ["good"], ["nope"]):
        for w in EN.events:
            assert mixed.prob(w, ctx) == pytest.approx(EN.prob(w, ctx), abs=1e-15)


def test_self_mix_reproduces_distribution_exactly():
    mixed = mix([EN, EN], [0.3, 0.7])
    for ctx in ([], ["good"], ["water"]):
        for w in EN.events:
            assert abs(mixed.prob(w, ctx) - EN.prob(w, ctx)) < 1e-12


def test_cross_script_rejected_names_pair():
    with pytest.raises(CrossScriptMix) as err:
        mix([EN, RU])
    assert err.value.pair == (("en", "Latn"), ("ru", "Cyrl"))


def test_empty_model_list():
    with pytest.raises(EmptyModelList):
        mix([])


def test_hand_computed_union_mixture():
    """w only in model 2 with P2(w)=0.3; model 1 contributes its per-word
    unknown share u1 = P1(unk)/(|union missing|+1) = 0.2/2 = 0.1:
    P_mix(w) = 0.5*u1 + 0.5*0.3 = 0.2."""
    m1 = FixedModel("m1", {"a": 0.4, "b": 0.4, UNK: 0.2})
    m2 = FixedModel("m2", {"a": 0.3, "b": 0.3, "w": 0.3, UNK: 0.1})
    mixed = mix([m1, m2])
    u1 = 0.2 / 2
    assert mixed.prob("w") == pytest.approx(0.5 * u1 + 0.15, abs=1e-12)


def test_mixture_mass_sums_to_one():
    mixed = mix([EN, FY])
    for ctx in ([], ["water"], ["wetter"], ["zzz"]):
        total = sum(mixed.prob(w, ctx) for w in mixed.events)
        assert total == pytest.approx(1.0, abs=1e-6), ctx


def test_permutation_invariance():
    a = mix([EN, FY], [0.3, 0.7])
    b = mix([FY, EN], [0.7, 0.3])
    for w in a.events:
        assert a.prob(w, ["good"]) == pytest.approx(b.prob(w, ["good"]), abs=1e-15)


def test_one_step_bayes_hand_value():
    """Likelihood ratio 10 from a uniform start: lambda1 = 10/11."""
    m1 = FixedModel("m1", {"w": 0.5, "v": 0.45, UNK: 0.05})
    m2 = FixedModel("m2", {"w": 0.05, "v": 0.90, UNK: 0.05})
    mixed = mix([m1, m2])
    updated = adapt_weights(mixed, "w")
    assert updated.weights[0] == pytest.approx(10 / 11, abs=1e-9)
    assert updated.weights[1] == pytest.approx(1 / 11, abs=1e-9)


def test_weights_floor_under_adversarial_updates():
    m1 = FixedModel("m1", {"w": 0.9, "v": 0.05, UNK: 0.05})
    m2 = FixedModel("m2", {"w": 0.01, "v": 0.94, UNK: 0.05})
    mixed = mix([m1, m2])
    for _ in range(100):
        mixed = adapt_weights(mixed, "w")
        assert min(mixed.weights) >= WEIGHT_FLOOR - 1e-12
        assert sum(mixed.weights) == pytest.approx(1.0, abs=1e-12)
    assert mixed.weights[1] == pytest.approx(WEIGHT_FLOOR, abs=1e-12)


def test_adapt_returns_new_object():
    mixed = mix([EN, FY])
    updated = adapt_weights(mixed, "water")
    assert updated is not mixed
    assert mixed.weights == (0.5, 0.5)  # original untouched


def test_positive_weights_required():
    with pytest.raises(ValueError):
        MixedModel([EN, FY], [1.0, 0.0])


def test_floor_infeasible_for_too_many_components():
    models = [FixedModel(f"m{i}", {"w": 1.0 - 0.01, UNK: 0.01}) for i in range(21)]
    mixed = mix(models)
    with pytest.raises(ValueError):
        adapt_weights(mixed, "w")
