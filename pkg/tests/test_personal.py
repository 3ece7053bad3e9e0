import pytest

from conftest import make_profile

from polyboard.errors import FormatError, InventoryViolation
from polyboard.layout import CharacterInventory
from polyboard.ngram import train_ngram
from polyboard.personal import PersonalDict, PersonalizedModel, personalized_prob

INV = CharacterInventory("en", frozenset("abcdefghijklmnopqrstuvwxyz"))


def test_learn_commit_counts():
    pdict = PersonalDict(inventory=INV)
    pdict.learn_commit("foo", timestamp=1)
    assert pdict.count("foo") == 1
    pdict.learn_commit("foo", timestamp=2)
    pdict.learn_commit("foo", timestamp=3)
    assert pdict.count("foo") == 3
    assert pdict.words["foo"][1] == 3  # last_used updated


def test_inventory_violation():
    pdict = PersonalDict(inventory=INV)
    with pytest.raises(InventoryViolation) as err:
        pdict.learn_commit("café", timestamp=0)
    assert "é" in err.value.bad_chars


def test_learn_revert_records_pair_and_word():
    pdict = PersonalDict(inventory=INV)
    pdict.learn_revert("akn", "akin", timestamp=0)
    assert pdict.blocklist[("akn", "akin")] == 1
    assert "akn" in pdict
    pdict.learn_revert("akn", "akin", timestamp=1)
    assert pdict.blocklist[("akn", "akin")] == 2
    assert pdict.is_blocked("akn", "akin")
    assert not pdict.is_blocked("akn", "akins")


def test_revert_identical_pair_ignored():
    pdict = PersonalDict()
    pdict.learn_revert("same", "same", timestamp=0)
    assert not pdict.blocklist


# ---------------------------------------------------------------------------
# mixture math
# ---------------------------------------------------------------------------

BASE = train_ngram([["water", "good"], ["good", "water"], ["fine", "water"]], 2)


def test_empty_dict_is_identity():
    pdict = PersonalDict()
    for w in ("water", "good", "nope"):
        assert personalized_prob(BASE, pdict, w, []) == BASE.prob(w, [])


def test_saturated_dict_hits_cap():
    """lam = min(0.5, 100/200) with a 100-count dict; P_base of the word is 0."""
    pdict = PersonalDict()
    for i in range(100):
        pdict.learn_commit("zonk", timestamp=i)
    assert pdict.mix_weight == pytest.approx(0.5)
    assert personalized_prob(BASE, pdict, "zonk", []) == pytest.approx(0.5)


def test_mixture_sums_to_one():
    pdict = PersonalDict()
    for i, w in enumerate(["zonk", "zonk", "blerg", "water"]):
        pdict.learn_commit(w, timestamp=i)
    model = PersonalizedModel(BASE, pdict)
    total = sum(model.prob(w, ["good"]) for w in model.events)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_lambda_monotone_and_capped():
    pdict = PersonalDict()
    previous = 0.0
    for i in range(300):
        pdict.learn_commit(f"w{i % 7}", timestamp=i)
        lam = pdict.mix_weight
        assert lam >= previous
        assert lam <= 0.5
        previous = lam


def test_learned_word_not_flagged():
    from polyboard.normalize import Wordlist
    from polyboard.spell import spell_check

    lexicon = Wordlist({"water": 5})
    pdict = PersonalDict(inventory=INV)
    pdict.learn_commit("blerg", timestamp=0)
    assert not spell_check("blerg", lexicon, personal=pdict).flagged


def test_persistence_roundtrip(tmp_path):
    pdict = PersonalDict(inventory=INV)
    pdict.learn_commit("foo", timestamp=10)
    pdict.learn_commit("foo", timestamp=20)
    pdict.learn_commit("bar", timestamp=30)
    pdict.learn_revert("akn", "akin", timestamp=40)
    path = tmp_path / "p.dict"
    pdict.save(path)
    loaded = PersonalDict.load(path, inventory=INV)
    assert loaded == pdict
    assert not (path.parent / "p.dict.tmp").exists()  # atomic temp cleaned up


def test_load_bad_header(tmp_path):
    path = tmp_path / "bad.dict"
    path.write_text("nonsense\n", encoding="utf-8")
    with pytest.raises(FormatError):
        PersonalDict.load(path)


def test_decay_halves_counts():
    pdict = PersonalDict(decay_enabled=True)
    for i in range(60):
        pdict.learn_commit("a", timestamp=i)
    pdict.words["a"][0] = 20_000  # force past the decay threshold
    pdict.learn_commit("b", timestamp=99)
    assert pdict.words["a"][0] == 10_000
    assert pdict.count("b") >= 1


def test_decay_off_by_default():
    pdict = PersonalDict()
    pdict.words["a"] = [20_000, 0]
    pdict.learn_commit("b", timestamp=1)
    assert pdict.words["a"][0] == 20_000
