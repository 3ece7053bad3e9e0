import random

from conftest import make_profile
from oracles import oracle_osa

from polyboard.layout import CharacterInventory
from polyboard.normalize import Wordlist
from polyboard.personal import PersonalDict
from polyboard.spell import SpellIndex, osa_distance, spell_check


def test_lexicon_word_not_flagged():
    lexicon = Wordlist({"the": 10, "cat": 5})
    assert not spell_check("cat", lexicon).flagged


def test_personal_word_not_flagged():
    lexicon = Wordlist({"the": 10})
    personal = PersonalDict()
    personal.learn_commit("zorgle", timestamp=0)
    assert spell_check("zorgle", lexicon).flagged
    assert not spell_check("zorgle", lexicon, personal=personal).flagged


def test_teh_suggestions_against_brute_force():
    lexicon = Wordlist({"the": 100, "ten": 50, "tea": 25})
    result = spell_check("teh", lexicon)
    assert result.flagged
    brute = sorted(
        ((oracle_osa("teh", w), -c, w) for w, c in lexicon.counts.items()),
        key=lambda t: t,
    )
    expected = tuple(w for d, _, w in brute if d <= 2)[:5]
    assert result.suggestions == expected
    assert oracle_osa("teh", result.suggestions[0]) == 1


def test_case_aware_per_profile():
    profile = make_profile()
    lexicon = Wordlist({"paris": 3})
    assert not spell_check("Paris", lexicon, profile=profile).flagged
    uncased = make_profile(casing="uncased")
    assert spell_check("Paris", lexicon, profile=uncased).flagged


def test_distance_function_matches_textbook_oracle():
    rng = random.Random(42)
    alphabet = "abcdef"
    for _ in range(500):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        assert osa_distance(a, b) == oracle_osa(a, b), (a, b)


def test_transposition_counts_as_one():
    assert osa_distance("teh", "the") == 1
    assert osa_distance("abcd", "acbd") == 1


def test_index_matches_full_scan():
    rng = random.Random(8)
    words = list({
        "".join(rng.choice("abcdefgh") for _ in range(rng.randint(3, 8)))
        for _ in range(800)
    })
    lexicon = Wordlist({w: rng.randint(1, 100) for w in words})
    index = SpellIndex(lexicon)
    for _ in range(60):
        probe = "".join(rng.choice("abcdefgh") for _ in range(rng.randint(3, 8)))
        got = sorted(index.lookup(probe))
        want = sorted(
            (w, oracle_osa(probe, w))
            for w in lexicon.counts
            if oracle_osa(probe, w) <= 2
        )
        assert got == want, probe


def test_suggestion_ranking_by_distance_then_frequency():
    lexicon = Wordlist({"aaab": 1, "aaac": 99, "aaaa": 50, "azzz": 5})
    result = spell_check("aaa", lexicon)
    # distance 1 trio first (ranked by count), azzz (distance 3) excluded
    assert result.suggestions == ("aaac", "aaaa", "aaab")
