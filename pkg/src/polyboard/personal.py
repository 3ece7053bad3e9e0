"""On-device personal dictionary with revert learning.

Committed words accumulate counts; reverted auto-corrections land on a
blocklist that hard-suppresses that exact (literal, correction) pair. The
personal unigram distribution mixes into the base model with a weight that
grows with usage but never exceeds half.
"""

from __future__ import annotations

import math
import os
import time
from pathlib import Path
from typing import Sequence

from .errors import FormatError, InventoryViolation
from .layout import CharacterInventory
from .ngram import UNK

MIX_CAP = 0.5
MIX_HALFWAY = 100  # dict size at which lambda reaches 0.5 of its cap
DECAY_TOTAL = 10_000

FILE_HEADER = "polyboard-personal v1"
BLOCKLIST_MARKER = "\\blocklist\\"


class PersonalDict:
    def __init__(
        self,
        inventory: CharacterInventory | None = None,
        decay_enabled: bool = False,
    ):
        self.inventory = inventory
        self.decay_enabled = decay_enabled
        self.words: dict[str, list] = {}  # word -> [count, last_used_ms]
        self.blocklist: dict[tuple[str, str], int] = {}

    # -- learning ----------------------------------------------------------

    def learn_commit(self, word: str, timestamp: int | None = None) -> None:
        """Count a committed word; raises InventoryViolation on dirty words."""
        if not word:
            raise InventoryViolation(word, set())
        if self.inventory is not None and not self.inventory.allows(word):
            inventory_chars = {ch for g in self.inventory.all_graphemes for ch in g}
            bad = {ch for ch in word if ch not in inventory_chars}
            raise InventoryViolation(word, bad)
        stamp = int(time.time() * 1000) if timestamp is None else timestamp
        entry = self.words.get(word)
        if entry is None:
            self.words[word] = [1, stamp]
        else:
            entry[0] += 1
            entry[1] = stamp
        if self.decay_enabled and self.total_count > DECAY_TOTAL:
            self._decay()

    def learn_revert(self, literal: str, correction: str, timestamp: int | None = None) -> None:
        """User restored the literal after an auto-correction."""
        if literal == correction:
            return
        pair = (literal, correction)
        self.blocklist[pair] = self.blocklist.get(pair, 0) + 1
        try:
            self.learn_commit(literal, timestamp)
        except InventoryViolation:
            pass  # the blocklist entry still stands

    def is_blocked(self, literal: str, correction: str) -> bool:
        return (literal, correction) in self.blocklist

    def _decay(self) -> None:
        for word in list(self.words):
            self.words[word][0] = max(1, self.words[word][0] // 2)

    # -- queries -----------------------------------------------------------

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def count(self, word: str) -> int:
        entry = self.words.get(word)
        return entry[0] if entry else 0

    @property
    def total_count(self) -> int:
        return sum(entry[0] for entry in self.words.values())

    @property
    def mix_weight(self) -> float:
        total = self.total_count
        return min(MIX_CAP, total / (total + MIX_HALFWAY)) if total else 0.0

    def personal_prob(self, word: str) -> float:
        total = self.total_count
        return self.count(word) / total if total else 0.0

    # -- persistence (atomic: temp file then rename) ------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        lines = [FILE_HEADER]
        for word in sorted(self.words):
            count, last_used = self.words[word]
            lines.append(f"{word}\t{count}\t{last_used}")
        lines.append(BLOCKLIST_MARKER)
        for (literal, correction) in sorted(self.blocklist):
            lines.append(f"{literal}\t{correction}\t{self.blocklist[(literal, correction)]}")
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(
        cls,
        path: str | Path,
        inventory: CharacterInventory | None = None,
        decay_enabled: bool = False,
    ) -> "PersonalDict":
        pdict = cls(inventory=inventory, decay_enabled=decay_enabled)
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or lines[0] != FILE_HEADER:
            raise FormatError(f"expected header {FILE_HEADER!r}", 1)
        in_blocklist = False
        for number, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            if line == BLOCKLIST_MARKER:
                in_blocklist = True
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise FormatError(f"expected 3 tab-separated fields, got {line!r}", number)
            try:
                if in_blocklist:
                    pdict.blocklist[(fields[0], fields[1])] = int(fields[2])
                else:
                    pdict.words[fields[0]] = [int(fields[1]), int(fields[2])]
            except ValueError as exc:
                raise FormatError(f"bad number in {line!r}", number) from exc
        return pdict

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersonalDict):
            return NotImplemented
        return self.words == other.words and self.blocklist == other.blocklist


def personalized_prob(base, pdict: PersonalDict, word: str, context: Sequence[str] = ()) -> float:
    """(1 - lam) * base + lam * personal unigram relative frequency."""
    lam = pdict.mix_weight
    return (1.0 - lam) * base.prob(word, context) + lam * pdict.personal_prob(word)


class PersonalizedModel:
    """Base model blended with a personal dictionary; same query surface."""

    def __init__(self, base, pdict: PersonalDict):
        self.base = base
        self.pdict = pdict
        self.order = base.order
        self.language_tag = base.language_tag
        self.script = base.script

    @property
    def vocabulary(self) -> frozenset:
        return self.base.vocabulary | frozenset(self.pdict.words)

    @property
    def events(self) -> frozenset:
        return self.base.events | frozenset(self.pdict.words)

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        return personalized_prob(self.base, self.pdict, word, context)

    def log10_prob(self, word: str, context: Sequence[str] = (), floor: float = -8.0) -> float:
        p = self.prob(word, context)
        if p <= 0.0:
            return floor
        return max(math.log10(p), floor)

    def unk_prob(self, context: Sequence[str] = ()) -> float:
        return (1.0 - self.pdict.mix_weight) * self.base.unk_prob(context)

    def seen_continuations(self, context: Sequence[str] = ()) -> set[str]:
        return self.base.seen_continuations(context) | set(self.pdict.words)

    def top_unigrams(self, k: int) -> list[str]:
        candidates = set(self.base.top_unigrams(k)) | set(self.pdict.words)
        candidates.discard(UNK)
        return sorted(candidates, key=lambda w: (-self.prob(w), w))[:k]

    def is_personal_only(self, word: str) -> bool:
        return word in self.pdict.words and word not in self.base.vocabulary
