"""Automatic layout generation for Latin-script orthographies.

Grid letters come from the chosen base grid; every other inventory grapheme
is placed by corpus frequency: frequent ones get standalone keys appended
after the grid, the rest become long-presses on their decomposition base (or
on a fallback host when there is none). Long-press overflow spills to a
second page behind a switch key.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EmptyCorpus, HostOverflowUnresolvable, NonLatinScript, SchemaError
from .layout import CharacterInventory, DynamicRule, Key, Layout, Page, coverage_report

GRID_ROWS = {
    "qwerty": ("qwertyuiop", "asdfghjkl", "zxcvbnm"),
    "azerty": ("azertyuiop", "qsdfghjklm", "wxcvbn"),
    "qwertz": ("qwertzuiop", "asdfghjkl", "yxcvbnm"),
}

KEY_WIDTH = 0.1
PAGE1_CAPACITY = 30
PAGE1_ROW_LEN = 10


@dataclass(frozen=True)
class AutogenOptions:
    base_grid: str = "qwerty"
    standalone_threshold: float = 0.02
    fallback_host_key: str = "e"
    max_long_press_per_key: int = 6

    def __post_init__(self):
        if self.base_grid not in GRID_ROWS:
            raise SchemaError(f"base_grid {self.base_grid!r} not one of {tuple(GRID_ROWS)}")
        if not 0.0 <= self.standalone_threshold <= 1.0:
            raise SchemaError("standalone_threshold must be within [0, 1]")
        if self.max_long_press_per_key < 1:
            raise SchemaError("max_long_press_per_key must be >= 1")


@dataclass(frozen=True)
class FrequencyTable:
    counts: Mapping[str, int]
    total: int = field(default=-1)

    def __post_init__(self):
        if any(c < 0 for c in self.counts.values()):
            raise SchemaError("negative grapheme count")
        expected = sum(self.counts.values())
        if self.total == -1:
            object.__setattr__(self, "total", expected)
        elif self.total != expected:
            raise SchemaError(f"total {self.total} != sum of counts {expected}")

    def count(self, grapheme: str) -> int:
        return self.counts.get(grapheme, 0)

    def relative(self, grapheme: str) -> float:
        if self.total == 0:
            return 0.0
        return self.counts.get(grapheme, 0) / self.total


def char_frequencies(corpus: Iterable[str], inventory: CharacterInventory) -> FrequencyTable:
    """Count inventory graphemes over a token stream.

    Tokens are segmented greedily, longest grapheme first; anything that does
    not start an inventory grapheme is skipped one codepoint at a time.
    """
    graphemes = sorted(inventory.all_graphemes, key=len, reverse=True)
    counts: dict[str, int] = {}
    saw_tokens = False
    for token in corpus:
        saw_tokens = True
        pos = 0
        while pos < len(token):
            for g in graphemes:
                if token.startswith(g, pos):
                    counts[g] = counts.get(g, 0) + 1
                    pos += len(g)
                    break
            else:
                pos += 1
    if not saw_tokens:
        raise EmptyCorpus("no tokens in corpus")
    return FrequencyTable(counts=counts)


def base_of(grapheme: str) -> str | None:
    """Latin base letter of a grapheme via canonical decomposition, if any."""
    decomposed = unicodedata.normalize("NFD", grapheme)
    residue = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    if len(residue) == 1 and "a" <= residue <= "z":
        return residue
    return None


def _is_latin(grapheme: str) -> bool:
    for ch in grapheme:
        if unicodedata.combining(ch):
            continue
        if not ch.isalpha():
            continue
        name = unicodedata.name(ch, "")
        if not name.startswith("LATIN"):
            return False
    return True


def _case_pairs(graphemes: set[str]) -> dict[str, str]:
    """Map uppercase grapheme -> its lowercase partner when both are present."""
    pairs = {}
    for g in graphemes:
        low = g.lower()
        if low != g and low in graphemes:
            pairs[g] = low
    return pairs


def generate_layout(
    options: AutogenOptions,
    inventory: CharacterInventory,
    freqs: FrequencyTable,
    layout_id: str | None = None,
) -> Layout:
    """Place every required grapheme (and used loanword graphemes) on a layout.

    Deterministic: placement order is descending corpus frequency with
    codepoint-order tie-breaks, so regeneration is byte-identical and
    doubling all counts changes nothing.
    """
    for g in sorted(inventory.required | inventory.optional_loanword):
        if not _is_latin(g):
            raise NonLatinScript(f"inventory grapheme {g!r} is not Latin script")

    rows = GRID_ROWS[options.base_grid]
    grid_letters = set("".join(rows))
    if options.fallback_host_key not in grid_letters:
        raise SchemaError(
            f"fallback_host_key {options.fallback_host_key!r} not on the {options.base_grid} grid"
        )

    # Everything typeable through the grid itself (shift gives capitals).
    covered = set(grid_letters) | {c.upper() for c in grid_letters}

    placeable = [g for g in sorted(inventory.required) if g not in covered]
    for g in sorted(inventory.optional_loanword):
        if g not in covered and freqs.count(g) > 0:
            placeable.append(g)

    pairs = _case_pairs(set(placeable) | covered)
    secondaries = {g for g in placeable if pairs.get(g) in placeable or pairs.get(g) in covered}
    primaries = [g for g in placeable if g not in secondaries]
    upper_of = {low: up for up, low in pairs.items() if up in secondaries}

    def order_key(g: str) -> tuple[float, str]:
        return (-freqs.relative(g), g)

    primaries.sort(key=order_key)

    standalone: list[str] = []
    long_press_hosts: dict[str, list[str]] = {}
    for g in primaries:
        if freqs.relative(g) >= options.standalone_threshold:
            standalone.append(g)
            continue
        host = base_of(g) or options.fallback_host_key
        if host not in grid_letters:
            host = options.fallback_host_key
        entries = long_press_hosts.setdefault(host, [])
        entries.append(g)
        partner = upper_of.get(g)
        if partner is not None:
            entries.append(partner)

    for host in long_press_hosts:
        long_press_hosts[host].sort(key=order_key)

    overflow: list[str] = []
    for host in sorted(long_press_hosts):
        entries = long_press_hosts[host]
        if len(entries) > options.max_long_press_per_key:
            overflow.extend(entries[options.max_long_press_per_key :])
            long_press_hosts[host] = entries[: options.max_long_press_per_key]
    overflow.sort(key=order_key)
    if len(overflow) > PAGE1_CAPACITY:
        raise HostOverflowUnresolvable(
            f"{len(overflow)} graphemes overflow the hosts and exceed page-1 capacity {PAGE1_CAPACITY}"
        )

    keys: list[Key] = []
    for row_index, row in enumerate(rows):
        for col_index, letter in enumerate(row):
            keys.append(
                Key(
                    key_id=letter,
                    row=row_index,
                    col=col_index,
                    width=KEY_WIDTH,
                    base_output=letter,
                    shift_output=letter.upper(),
                    long_press=tuple(long_press_hosts.get(letter, ())),
                    face=letter,
                )
            )

    # Standalone keys go to the right of the grid rows, top row first.
    next_col = {i: len(row) for i, row in enumerate(rows)}
    for index, g in enumerate(standalone):
        row_index = index % len(rows)
        up = upper_of.get(g)
        keys.append(
            Key(
                key_id=g,
                row=row_index,
                col=next_col[row_index],
                width=KEY_WIDTH,
                base_output=g,
                shift_output=up,
                face=g,
            )
        )
        next_col[row_index] += 1

    pages = []
    if overflow:
        keys.append(
            Key(
                key_id="to_page_1",
                row=len(rows),
                col=0,
                width=KEY_WIDTH,
                face="=\\<",
                switch_to_page=1,
            )
        )
        page1_keys = []
        for index, g in enumerate(overflow):
            page1_keys.append(
                Key(
                    key_id=f"p1_{g}",
                    row=index // PAGE1_ROW_LEN,
                    col=index % PAGE1_ROW_LEN,
                    width=KEY_WIDTH,
                    base_output=g,
                    face=g,
                )
            )
        page1_keys.append(
            Key(
                key_id="to_page_0",
                row=(len(overflow) - 1) // PAGE1_ROW_LEN + 1,
                col=0,
                width=KEY_WIDTH,
                face="abc",
                switch_to_page=0,
            )
        )
        pages = [Page(keys=tuple(keys)), Page(keys=tuple(page1_keys))]
    else:
        pages = [Page(keys=tuple(keys))]

    layout = Layout(
        layout_id=layout_id or f"{inventory.language_tag}_{options.base_grid}_auto",
        language_tag=inventory.language_tag,
        script="Latn",
        base_grid=options.base_grid,
        pages=tuple(pages),
        dynamic_rules=(),
        grapheme_classes={},
        version=1,
    )
    report = coverage_report(layout, inventory)
    if not report.complete:
        raise HostOverflowUnresolvable(
            "generated layout misses graphemes: " + " ".join(sorted(report.missing))
        )
    return layout
