"""Corpus normalization and wordlist extraction.

Raw text goes through NFC, token classification (URLs, emails and pure digit
runs are removed), edge punctuation stripping, punctuation splitting
(apostrophe and hyphen stay word-internal), case folding per profile, and an
inventory filter. Everything dropped is tallied in a rejection report, with
per-character counts for out-of-inventory characters.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .profiles import LanguageProfile

WORD_INTERNAL = {"'", "’", "-"}

_URL_RE = re.compile(r"://|^www\.", re.IGNORECASE)
_EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")

REASON_URL = "url"
REASON_EMAIL = "email"
REASON_DIGIT_RUN = "digit_run"
REASON_OUT_OF_INVENTORY = "out_of_inventory"


@dataclass
class RejectionReport:
    by_reason: Counter = field(default_factory=Counter)
    by_character: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.by_reason.values())

    def add(self, reason: str, chars: Iterable[str] = ()):
        self.by_reason[reason] += 1
        for ch in chars:
            self.by_character[ch] += 1

    def to_text(self) -> str:
        lines = ["rejections by reason:"]
        for reason, count in sorted(self.by_reason.items()):
            lines.append(f"  {reason}\t{count}")
        if self.by_character:
            lines.append("out-of-inventory characters:")
            for ch, count in sorted(self.by_character.items()):
                name = unicodedata.name(ch, f"U+{ord(ch):04X}")
                lines.append(f"  {ch}\t{name}\t{count}")
        if not self.by_reason:
            lines.append("  none")
        return "\n".join(lines)


@dataclass
class NormalizeResult:
    sentences: list[list[str]]
    surfaces: dict[str, Counter]
    report: RejectionReport

    def tokens(self) -> Iterator[str]:
        for sentence in self.sentences:
            yield from sentence

    def surface_form(self, folded: str) -> str:
        counter = self.surfaces.get(folded)
        if not counter:
            return folded
        # Most frequent original spelling; ties break deterministically.
        return min(counter.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def _strip_edges(token: str, keep: set[str]) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]) and token[start] not in keep:
        start += 1
    while end > start and _is_punct(token[end - 1]) and token[end - 1] not in keep:
        end -= 1
    return token[start:end]


def _split_internal(token: str, keep: set[str]) -> list[str]:
    parts: list[str] = []
    current: list[str] = []
    for ch in token:
        if _is_punct(ch) and ch not in keep:
            if current:
                parts.append("".join(current))
                current = []
        else:
            current.append(ch)
    if current:
        parts.append("".join(current))
    return parts


def normalize(raw_text: str, profile: LanguageProfile) -> NormalizeResult:
    """Normalize raw text (one sentence per line) into clean token sentences."""
    inventory_chars = set()
    for g in profile.inventory.all_graphemes:
        inventory_chars.update(g)

    sentences: list[list[str]] = []
    surfaces: dict[str, Counter] = {}
    report = RejectionReport()

    split_keep = WORD_INTERNAL | inventory_chars
    for line in raw_text.splitlines():
        line = unicodedata.normalize("NFC", line)
        tokens: list[str] = []
        for raw in line.split():
            if _URL_RE.search(raw):
                report.add(REASON_URL)
                continue
            if _EMAIL_RE.match(raw):
                report.add(REASON_EMAIL)
                continue
            for part in _split_internal(raw, split_keep):
                # Apostrophe/hyphen are word-internal only: stripped at edges.
                part = _strip_edges(part, inventory_chars)
                if not part:
                    continue
                if part.isdigit():
                    report.add(REASON_DIGIT_RUN)
                    continue
                folded = unicodedata.normalize("NFC", profile.fold(part))
                if not profile.inventory.allows(folded):
                    bad = [
                        ch
                        for ch in folded
                        if ch not in inventory_chars and ch not in WORD_INTERNAL
                    ]
                    report.add(REASON_OUT_OF_INVENTORY, bad)
                    continue
                tokens.append(folded)
                surfaces.setdefault(folded, Counter())[part] += 1
        if tokens:
            sentences.append(tokens)
    return NormalizeResult(sentences=sentences, surfaces=surfaces, report=report)


# ---------------------------------------------------------------------------
# Wordlists
# ---------------------------------------------------------------------------

@dataclass
class Wordlist:
    counts: dict[str, int]
    source: str = ""

    def __post_init__(self):
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("wordlist counts must be >= 1")

    def __contains__(self, word: str) -> bool:
        return word in self.counts

    def __len__(self) -> int:
        return len(self.counts)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    def words(self) -> list[str]:
        return list(self.counts)

    def to_text(self) -> str:
        lines = [f"# wordlist source={self.source}"]
        for word in sorted(self.counts, key=lambda w: (-self.counts[w], w)):
            lines.append(f"{word}\t{self.counts[word]}")
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")


def build_wordlist(tokens: Iterable[str], source: str = "") -> Wordlist:
    counts = Counter(tokens)
    return Wordlist(counts=dict(counts), source=source)


def load_wordlist(path: str | Path) -> Wordlist:
    counts: dict[str, int] = {}
    source = ""
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            if "source=" in line:
                source = line.split("source=", 1)[1].strip()
            continue
        if not line.strip():
            continue
        word, _, count = line.partition("\t")
        counts[word] = int(count) if count else 1
    return Wordlist(counts=counts, source=source)
