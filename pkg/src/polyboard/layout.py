"""Keyboard layout data model: parsing, validation, geometry, dynamic rules, coverage.

A layout file is versioned YAML (``format_version: 1``) with the field names
used below; all text must be NFC. Dynamic rules rewrite a key's output/face
when their context pattern matches a suffix of the committed text. Patterns
mix literal grapheme sequences with ``[ClassName]`` references into the
layout's ``grapheme_classes``; ``{match}`` inside ``new_output``/``new_face``
expands to the matched suffix, which is what lets one rule per sign cover a
whole consonant class on abugida layouts.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import yaml

from .errors import (
    DanglingRuleTarget,
    DuplicateKeyId,
    NoActiveKeys,
    NonNfcOutput,
    SchemaError,
)

FORMAT_VERSION = 1
BASE_GRIDS = ("qwerty", "azerty", "qwertz", "script_native")
MATCH_TOKEN = "{match}"


def is_nfc(text: str) -> bool:
    return unicodedata.normalize("NFC", text) == text


@dataclass(frozen=True)
class Key:
    key_id: str
    row: int
    col: int
    width: float
    base_output: str = ""
    shift_output: str | None = None
    long_press: tuple[str, ...] = ()
    face: str = ""
    switch_to_page: int | None = None

    @property
    def is_blank(self) -> bool:
        """No static output, no face, not a page switch: inert unless a rule fires."""
        return (
            not self.base_output
            and not self.shift_output
            and not self.long_press
            and not self.face
            and self.switch_to_page is None
        )


@dataclass(frozen=True)
class DynamicRule:
    context_pattern: str
    target_key_id: str
    new_output: str
    new_face: str

    def stripped_output(self) -> str:
        return self.new_output.replace(MATCH_TOKEN, "")


@dataclass(frozen=True)
class Page:
    keys: tuple[Key, ...]


@dataclass(frozen=True)
class Layout:
    layout_id: str
    language_tag: str
    script: str
    base_grid: str
    pages: tuple[Page, ...]
    dynamic_rules: tuple[DynamicRule, ...] = ()
    grapheme_classes: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    version: int = 1

    def page_keys(self, page: int = 0) -> tuple[Key, ...]:
        return self.pages[page].keys

    def find_key(self, key_id: str) -> tuple[int, Key] | None:
        for page_index, page in enumerate(self.pages):
            for key in page.keys:
                if key.key_id == key_id:
                    return page_index, key
        return None


@dataclass(frozen=True)
class CharacterInventory:
    language_tag: str
    required: frozenset[str]
    optional_loanword: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = self.required & self.optional_loanword
        if overlap:
            raise SchemaError(
                f"inventory for {self.language_tag}: graphemes both required and "
                f"optional: {' '.join(sorted(overlap))}"
            )
        for entry in list(self.required) + list(self.optional_loanword):
            if not entry:
                raise SchemaError(f"inventory for {self.language_tag}: empty grapheme")
            if not is_nfc(entry):
                raise NonNfcOutput(f"inventory of {self.language_tag}", entry)

    @property
    def all_graphemes(self) -> frozenset[str]:
        return self.required | self.optional_loanword

    def allows(self, text: str, extra: Iterable[str] = ("'", "’", "-")) -> bool:
        """True if text segments entirely into inventory graphemes (plus extras)."""
        allowed = self.all_graphemes | frozenset(extra)
        return _segments_cleanly(text, allowed)


def _segments_cleanly(text: str, graphemes: frozenset[str]) -> bool:
    by_length = sorted(graphemes, key=len, reverse=True)
    pos = 0
    while pos < len(text):
        for g in by_length:
            if text.startswith(g, pos):
                pos += len(g)
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Parsing and validation
# ---------------------------------------------------------------------------

def parse_layout(data: bytes | str) -> Layout:
    """Parse and validate a serialized layout; raises SchemaError subclasses."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = yaml.safe_load(data)
    except yaml.YAMLError as exc:
        raise SchemaError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("layout file must be a mapping")
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaError(
            f"unsupported format_version {doc.get('format_version')!r}, expected {FORMAT_VERSION}"
        )

    layout_id = _req_str(doc, "layout_id")
    language_tag = _req_str(doc, "language_tag")
    script = _req_str(doc, "script")
    if len(script) != 4 or not script.isalpha():
        raise SchemaError(f"script {script!r} is not a 4-letter ISO 15924 code")
    base_grid = _req_str(doc, "base_grid")
    if base_grid not in BASE_GRIDS:
        raise SchemaError(f"base_grid {base_grid!r} not one of {BASE_GRIDS}")
    version = doc.get("version", 1)
    if not isinstance(version, int) or version < 1:
        raise SchemaError(f"version must be a positive integer, got {version!r}")

    classes: dict[str, tuple[str, ...]] = {}
    for name, members in (doc.get("grapheme_classes") or {}).items():
        if not isinstance(members, list) or not all(isinstance(m, str) and m for m in members):
            raise SchemaError(f"grapheme class {name!r} must be a list of graphemes")
        for m in members:
            if not is_nfc(m):
                raise NonNfcOutput(f"grapheme class {name}", m)
        classes[str(name)] = tuple(members)

    raw_pages = doc.get("pages")
    if not isinstance(raw_pages, list) or not raw_pages:
        raise SchemaError("pages must be a non-empty list")
    pages = tuple(_parse_page(p, i) for i, p in enumerate(raw_pages))

    rules = tuple(_parse_rule(r, i) for i, r in enumerate(doc.get("dynamic_rules") or []))

    layout = Layout(
        layout_id=layout_id,
        language_tag=language_tag,
        script=script,
        base_grid=base_grid,
        pages=pages,
        dynamic_rules=rules,
        grapheme_classes=classes,
        version=version,
    )
    _validate(layout)
    return layout


def load_layout(path: str | Path) -> Layout:
    return parse_layout(Path(path).read_bytes())


def _req_str(doc: dict, name: str) -> str:
    value = doc.get(name)
    if not isinstance(value, str) or not value:
        raise SchemaError(f"missing or empty field {name!r}")
    return value


def _parse_page(raw, page_index: int) -> Page:
    if not isinstance(raw, dict) or not isinstance(raw.get("keys"), list) or not raw["keys"]:
        raise SchemaError(f"page {page_index} must have a non-empty 'keys' list")
    keys = []
    for raw_key in raw["keys"]:
        if not isinstance(raw_key, dict):
            raise SchemaError(f"page {page_index}: key entries must be mappings")
        try:
            key_id = str(raw_key["key_id"])
            row = int(raw_key["row"])
            col = int(raw_key["col"])
            width = float(raw_key["width"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"page {page_index}: bad key entry {raw_key!r}") from exc
        base_output = str(raw_key.get("base_output", ""))
        shift_raw = raw_key.get("shift_output")
        shift_output = str(shift_raw) if shift_raw is not None else None
        long_press = tuple(str(x) for x in raw_key.get("long_press") or ())
        face = str(raw_key.get("face", base_output))
        switch = raw_key.get("switch_to_page")
        keys.append(
            Key(
                key_id=key_id,
                row=row,
                col=col,
                width=width,
                base_output=base_output,
                shift_output=shift_output,
                long_press=long_press,
                face=face,
                switch_to_page=int(switch) if switch is not None else None,
            )
        )
    return Page(keys=tuple(keys))


def _parse_rule(raw, index: int) -> DynamicRule:
    if not isinstance(raw, dict):
        raise SchemaError(f"dynamic rule {index} must be a mapping")
    try:
        return DynamicRule(
            context_pattern=str(raw["context_pattern"]),
            target_key_id=str(raw["target_key_id"]),
            new_output=str(raw["new_output"]),
            new_face=str(raw.get("new_face", raw["new_output"])),
        )
    except KeyError as exc:
        raise SchemaError(f"dynamic rule {index} missing field {exc}") from exc


def _validate(layout: Layout) -> None:
    all_key_ids = set()
    static_codepoints: set[str] = set()
    for page_index, page in enumerate(layout.pages):
        seen = set()
        for key in page.keys:
            if key.key_id in seen:
                raise DuplicateKeyId(key.key_id, page_index)
            seen.add(key.key_id)
            if not (0 < key.width <= 1):
                raise SchemaError(f"key {key.key_id}: width {key.width} outside (0, 1]")
            if key.row < 0 or key.col < 0:
                raise SchemaError(f"key {key.key_id}: negative row/col")
            outputs = [("base_output", key.base_output)]
            if key.shift_output is not None:
                outputs.append(("shift_output", key.shift_output))
            outputs += [("long_press", lp) for lp in key.long_press]
            for where, text in outputs:
                if where != "base_output" and not text:
                    raise SchemaError(f"key {key.key_id}: empty {where} entry")
                if text and not is_nfc(text):
                    raise NonNfcOutput(f"key {key.key_id} {where}", text)
                static_codepoints.update(text)
            if len(set(key.long_press)) != len(key.long_press):
                raise SchemaError(f"key {key.key_id}: duplicate long-press entries")
            if key.switch_to_page is not None and not (
                0 <= key.switch_to_page < len(layout.pages)
            ):
                raise SchemaError(
                    f"key {key.key_id}: switch_to_page {key.switch_to_page} out of range"
                )
        all_key_ids.update(seen)

    # Inventory closure: everything the layout can emit, statically or through
    # a rule. Context classes describe committed text, so their members must
    # stay within the closure or the rule could never fire legitimately.
    closure = set(static_codepoints)
    for rule in layout.dynamic_rules:
        if rule.target_key_id not in all_key_ids:
            raise DanglingRuleTarget(rule.target_key_id)
        stripped = rule.stripped_output()
        if not stripped and MATCH_TOKEN not in rule.new_output:
            raise SchemaError(f"rule on {rule.target_key_id}: empty new_output")
        if stripped and not is_nfc(stripped):
            raise NonNfcOutput(f"rule on {rule.target_key_id}", stripped)
        closure.update(stripped)
        for kind, text in _pattern_elements(rule.context_pattern):
            if kind == "class" and text not in layout.grapheme_classes:
                raise SchemaError(
                    f"rule on {rule.target_key_id}: unknown grapheme class [{text}]"
                )
            if kind == "lit" and not is_nfc(text):
                raise NonNfcOutput(f"rule on {rule.target_key_id} context", text)

    for name, members in layout.grapheme_classes.items():
        for m in members:
            outside = set(m) - closure
            if outside:
                raise SchemaError(
                    f"grapheme class {name}: member {m!r} outside the layout's "
                    f"inventory closure: {' '.join(sorted(outside))}"
                )


# ---------------------------------------------------------------------------
# Serialization (deterministic, byte-stable)
# ---------------------------------------------------------------------------

def _q(value: str) -> str:
    # JSON string syntax is valid YAML double-quoted style.
    return json.dumps(value, ensure_ascii=False)


def _key_line(key: Key) -> str:
    parts = [
        f"key_id: {_q(key.key_id)}",
        f"row: {key.row}",
        f"col: {key.col}",
        f"width: {key.width!r}",
    ]
    if key.base_output:
        parts.append(f"base_output: {_q(key.base_output)}")
    if key.shift_output is not None:
        parts.append(f"shift_output: {_q(key.shift_output)}")
    if key.long_press:
        parts.append("long_press: [" + ", ".join(_q(x) for x in key.long_press) + "]")
    if key.face != key.base_output:
        parts.append(f"face: {_q(key.face)}")
    if key.switch_to_page is not None:
        parts.append(f"switch_to_page: {key.switch_to_page}")
    return "{" + ", ".join(parts) + "}"


def serialize_layout(layout: Layout) -> str:
    lines = [
        f"format_version: {FORMAT_VERSION}",
        f"layout_id: {_q(layout.layout_id)}",
        f"language_tag: {_q(layout.language_tag)}",
        f"script: {_q(layout.script)}",
        f"base_grid: {_q(layout.base_grid)}",
        f"version: {layout.version}",
    ]
    if layout.grapheme_classes:
        lines.append("grapheme_classes:")
        for name in layout.grapheme_classes:
            members = ", ".join(_q(m) for m in layout.grapheme_classes[name])
            lines.append(f"  {name}: [{members}]")
    lines.append("pages:")
    for page in layout.pages:
        lines.append("  - keys:")
        for key in page.keys:
            lines.append(f"      - {_key_line(key)}")
    if layout.dynamic_rules:
        lines.append("dynamic_rules:")
        for rule in layout.dynamic_rules:
            parts = [
                f"context_pattern: {_q(rule.context_pattern)}",
                f"target_key_id: {_q(rule.target_key_id)}",
                f"new_output: {_q(rule.new_output)}",
                f"new_face: {_q(rule.new_face)}",
            ]
            lines.append("  - {" + ", ".join(parts) + "}")
    return "\n".join(lines) + "\n"


def save_layout(layout: Layout, path: str | Path) -> None:
    Path(path).write_text(serialize_layout(layout), encoding="utf-8")


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

def page_geometry(layout: Layout, page: int = 0) -> dict[str, tuple[float, float, float, float]]:
    """Normalized (x, y, w, h) per key id: rows stacked evenly, keys flowed by col."""
    keys = layout.page_keys(page)
    n_rows = max(k.row for k in keys) + 1
    height = 1.0 / n_rows
    rects: dict[str, tuple[float, float, float, float]] = {}
    rows: dict[int, list[Key]] = {}
    for key in keys:
        rows.setdefault(key.row, []).append(key)
    for row, row_keys in rows.items():
        x = 0.0
        for key in sorted(row_keys, key=lambda k: k.col):
            rects[key.key_id] = (x, row * height, key.width, height)
            x += key.width
    return rects


def key_rect(layout: Layout, key: Key, page: int = 0) -> tuple[float, float, float, float]:
    return page_geometry(layout, page)[key.key_id]


def key_center(layout: Layout, key: Key, page: int = 0) -> tuple[float, float]:
    x, y, w, h = key_rect(layout, key, page)
    return (x + w / 2.0, y + h / 2.0)


def page_centers(layout: Layout, page: int = 0) -> dict[str, tuple[float, float]]:
    return {
        kid: (x + w / 2.0, y + h / 2.0)
        for kid, (x, y, w, h) in page_geometry(layout, page).items()
    }


# ---------------------------------------------------------------------------
# Dynamic rules / key state
# ---------------------------------------------------------------------------

def _pattern_elements(pattern: str) -> list[tuple[str, str]]:
    """Split a context pattern into ('lit', text) / ('class', name) elements."""
    elements: list[tuple[str, str]] = []
    pos = 0
    while pos < len(pattern):
        if pattern[pos] == "[":
            end = pattern.find("]", pos)
            if end == -1:
                raise SchemaError(f"unterminated class reference in pattern {pattern!r}")
            elements.append(("class", pattern[pos + 1 : end]))
            pos = end + 1
        else:
            nxt = pattern.find("[", pos)
            if nxt == -1:
                nxt = len(pattern)
            elements.append(("lit", pattern[pos:nxt]))
            pos = nxt
    return elements


def match_context(
    pattern: str, text: str, classes: Mapping[str, tuple[str, ...]]
) -> str | None:
    """Return the matched suffix of ``text`` if the pattern matches, else None.

    Elements are matched right to left; class elements take the longest
    matching member (ties broken by codepoint order).
    """
    elements = _pattern_elements(pattern)
    pos = len(text)
    for kind, value in reversed(elements):
        if kind == "lit":
            if pos - len(value) < 0 or not text.startswith(value, pos - len(value)):
                return None
            pos -= len(value)
        else:
            members = sorted(classes.get(value, ()), key=lambda m: (-len(m), m))
            for member in members:
                if pos - len(member) >= 0 and text.startswith(member, pos - len(member)):
                    pos -= len(member)
                    break
            else:
                return None
    return text[pos:]


@dataclass(frozen=True)
class KeyState:
    output: str
    face: str


def key_state(
    layout: Layout, committed_text: str, shift: bool = False, page: int = 0
) -> dict[str, KeyState]:
    """Effective output/face per key given the committed text.

    Pure function: among rules targeting a key whose context matches a suffix
    of the committed text, the longest match wins, ties by list order. Keys
    with no output and no active rule stay blank and inert.
    """
    states: dict[str, KeyState] = {}
    rules_by_key: dict[str, list[DynamicRule]] = {}
    for rule in layout.dynamic_rules:
        rules_by_key.setdefault(rule.target_key_id, []).append(rule)

    for key in layout.page_keys(page):
        output = key.base_output
        if shift and key.shift_output is not None:
            output = key.shift_output
        face = key.face
        best: tuple[int, int] | None = None  # (-match_len, rule_index)
        best_match = ""
        best_rule: DynamicRule | None = None
        for index, rule in enumerate(rules_by_key.get(key.key_id, ())):
            matched = match_context(rule.context_pattern, committed_text, layout.grapheme_classes)
            if matched is None:
                continue
            rank = (-len(matched), index)
            if best is None or rank < best:
                best = rank
                best_match = matched
                best_rule = rule
        if best_rule is not None:
            output = best_rule.new_output.replace(MATCH_TOKEN, best_match)
            face = best_rule.new_face.replace(MATCH_TOKEN, best_match)
        states[key.key_id] = KeyState(output=output, face=face)
    return states


# ---------------------------------------------------------------------------
# Hit testing
# ---------------------------------------------------------------------------

def hit_test(
    layout: Layout,
    x: float,
    y: float,
    page: int = 0,
    state: Mapping[str, KeyState] | None = None,
) -> tuple[str, float]:
    """Nearest tappable key and the squared distance to its center.

    Without ``state``, a key is tappable if it has any static output or is a
    page switch; with a ``key_state`` mapping, rule-activated keys count too.
    Ties break toward the lexicographically lower key id.
    """
    best: tuple[float, str] | None = None
    centers = page_centers(layout, page)
    for key in layout.page_keys(page):
        if state is not None:
            ks = state.get(key.key_id)
            active = (ks is not None and ks.output != "") or key.switch_to_page is not None
        else:
            active = bool(
                key.base_output or key.shift_output or key.long_press
            ) or key.switch_to_page is not None
        if not active:
            continue
        cx, cy = centers[key.key_id]
        d2 = (x - cx) ** 2 + (y - cy) ** 2
        if best is None or d2 < best[0] or (d2 == best[0] and key.key_id < best[1]):
            best = (d2, key.key_id)
    if best is None:
        raise NoActiveKeys(f"page {page} of {layout.layout_id} has no active keys")
    return best[1], best[0]


# ---------------------------------------------------------------------------
# Coverage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverageReport:
    layout_id: str
    language_tag: str
    reachable: Mapping[str, str]  # required grapheme -> path
    missing: frozenset[str]
    optional_reachable: Mapping[str, str]

    @property
    def complete(self) -> bool:
        return not self.missing

    def to_text(self) -> str:
        lines = [f"coverage of {self.layout_id} for {self.language_tag}"]
        for g in sorted(self.reachable):
            lines.append(f"  {g}\t{self.reachable[g]}")
        for g in sorted(self.missing):
            lines.append(f"  {g}\tMISSING")
        if self.optional_reachable:
            lines.append("optional loanword graphemes:")
            for g in sorted(self.optional_reachable):
                lines.append(f"  {g}\t{self.optional_reachable[g]}")
        lines.append("complete" if self.complete else f"INCOMPLETE: {len(self.missing)} missing")
        return "\n".join(lines)


def _grapheme_path(layout: Layout, grapheme: str) -> str | None:
    page0 = layout.page_keys(0)
    if any(k.base_output == grapheme for k in page0):
        return "base"
    if any(k.shift_output == grapheme for k in page0):
        return "shift"
    if any(grapheme in k.long_press for k in page0):
        return "long_press"
    for rule in layout.dynamic_rules:
        if rule.stripped_output() == grapheme:
            return "dynamic"
    for page_index in range(1, len(layout.pages)):
        for key in layout.page_keys(page_index):
            if (
                key.base_output == grapheme
                or key.shift_output == grapheme
                or grapheme in key.long_press
            ):
                return f"page_{page_index}"
    return None


def coverage_report(layout: Layout, inventory: CharacterInventory) -> CoverageReport:
    reachable: dict[str, str] = {}
    missing = set()
    for grapheme in sorted(inventory.required):
        path = _grapheme_path(layout, grapheme)
        if path is None:
            missing.add(grapheme)
        else:
            reachable[grapheme] = path
    optional = {}
    for grapheme in sorted(inventory.optional_loanword):
        path = _grapheme_path(layout, grapheme)
        if path is not None:
            optional[grapheme] = path
    return CoverageReport(
        layout_id=layout.layout_id,
        language_tag=inventory.language_tag,
        reachable=reachable,
        missing=frozenset(missing),
        optional_reachable=optional,
    )


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------

def render_layout(
    layout: Layout, committed_text: str = "", shift: bool = False, page: int = 0
) -> str:
    """Text-grid chart of one page, with a long-press legend."""
    states = key_state(layout, committed_text, shift=shift, page=page)
    keys = layout.page_keys(page)
    rows: dict[int, list[Key]] = {}
    for key in keys:
        rows.setdefault(key.row, []).append(key)
    lines = [f"{layout.layout_id} page {page} ({layout.language_tag}, {layout.script})"]
    for row in sorted(rows):
        cells = []
        for key in sorted(rows[row], key=lambda k: k.col):
            face = states[key.key_id].face
            cells.append(f"[{face}]" if face else "[ ]")
        lines.append(" ".join(cells))
    legend = [
        (key.key_id, key.long_press) for key in keys if key.long_press
    ]
    if legend:
        lines.append("long-press:")
        for key_id, entries in legend:
            lines.append(f"  {key_id}: {' '.join(entries)}")
    return "\n".join(lines)
