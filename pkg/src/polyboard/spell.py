"""Spell checking: membership flagging plus edit-distance suggestions.

Distance is Damerau-Levenshtein in its optimal-string-alignment form
(insert/delete/substitute plus adjacent transposition). Candidate lookup
uses a deletion-neighborhood index over the lexicon so a 10k-word lexicon
stays fast; every candidate is then verified with the exact DP distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .normalize import Wordlist
from .personal import PersonalDict
from .profiles import LanguageProfile

MAX_DISTANCE = 2
MAX_SUGGESTIONS = 5


def osa_distance(a: str, b: str, cap: int | None = None) -> int:
    """Optimal string alignment distance; early-exits past ``cap`` if given."""
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if cap is not None and abs(la - lb) > cap:
        return cap + 1
    previous2: list[int] = []
    previous = list(range(lb + 1))
    for i in range(1, la + 1):
        current = [i] + [0] * lb
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            current[j] = min(
                previous[j] + 1,        # delete from a
                current[j - 1] + 1,     # insert into a
                previous[j - 1] + cost  # substitute / match
            )
            if (
                i > 1
                and j > 1
                and a[i - 1] == b[j - 2]
                and a[i - 2] == b[j - 1]
            ):
                current[j] = min(current[j], previous2[j - 2] + 1)
        if cap is not None and min(current) > cap:
            return cap + 1
        previous2, previous = previous, current
    return previous[lb]


def _deletion_variants(word: str, max_deletions: int) -> set[str]:
    variants = {word}
    frontier = {word}
    for _ in range(max_deletions):
        next_frontier = set()
        for w in frontier:
            for i in range(len(w)):
                next_frontier.add(w[:i] + w[i + 1 :])
        variants |= next_frontier
        frontier = next_frontier
    return variants


class SpellIndex:
    """Deletion-neighborhood index for distance <= MAX_DISTANCE lookups."""

    def __init__(self, lexicon: Wordlist, max_distance: int = MAX_DISTANCE):
        self.lexicon = lexicon
        self.max_distance = max_distance
        self._index: dict[str, list[str]] = {}
        for word in lexicon.counts:
            for variant in _deletion_variants(word, max_distance):
                self._index.setdefault(variant, []).append(word)

    def lookup(self, word: str) -> list[tuple[str, int]]:
        """(candidate, distance) pairs within max_distance, unsorted."""
        seen: set[str] = set()
        results = []
        for variant in _deletion_variants(word, self.max_distance):
            for candidate in self._index.get(variant, ()):
                if candidate in seen:
                    continue
                seen.add(candidate)
                distance = osa_distance(word, candidate, cap=self.max_distance)
                if distance <= self.max_distance:
                    results.append((candidate, distance))
        return results


@dataclass(frozen=True)
class SpellResult:
    flagged: bool
    suggestions: tuple[str, ...]


def spell_check(
    word: str,
    lexicon: Wordlist,
    personal: PersonalDict | None = None,
    profile: LanguageProfile | None = None,
    index: SpellIndex | None = None,
    max_suggestions: int = MAX_SUGGESTIONS,
) -> SpellResult:
    """Flag words outside lexicon+personal; suggest close lexicon words.

    Suggestions are ranked by (distance, frequency descending, word) and
    capped at ``max_suggestions``. Pass a prebuilt SpellIndex to amortize
    index construction over many probes.
    """
    folded = profile.fold(word) if profile is not None else word
    known = folded in lexicon or word in lexicon
    if personal is not None and not known:
        known = word in personal or folded in personal
    if known:
        return SpellResult(flagged=False, suggestions=())

    if index is None:
        index = SpellIndex(lexicon)
    candidates = index.lookup(folded)
    candidates.sort(key=lambda pair: (pair[1], -lexicon.count(pair[0]), pair[0]))
    return SpellResult(
        flagged=True,
        suggestions=tuple(w for w, _ in candidates[:max_suggestions]),
    )
