import math
import random

import pytest

from polyboard.errors import (
    DanglingRuleTarget,
    DuplicateKeyId,
    NoActiveKeys,
    NonNfcOutput,
    SchemaError,
)
from polyboard.layout import (
    CharacterInventory,
    coverage_report,
    hit_test,
    key_state,
    page_centers,
    parse_layout,
    render_layout,
    serialize_layout,
)

QWERTY_26 = """\
format_version: 1
layout_id: "mini_qwerty"
language_tag: "en"
script: "Latn"
base_grid: "qwerty"
version: 1
pages:
  - keys:
""" + "\n".join(
    f'      - {{key_id: "{ch}", row: {r}, col: {c}, width: 0.1, '
    f'base_output: "{ch}", shift_output: "{ch.upper()}"}}'
    for r, row in enumerate(["qwertyuiop", "asdfghjkl", "zxcvbnm"])
    for c, ch in enumerate(row)
)


def test_minimal_qwerty_parses():
    layout = parse_layout(QWERTY_26)
    assert len(layout.pages) == 1
    assert len(layout.pages[0].keys) == 26


def test_dangling_rule_target():
    bad = QWERTY_26 + """
dynamic_rules:
  - {context_pattern: "a", target_key_id: "q99", new_output: "a", new_face: "a"}
"""
    with pytest.raises(DanglingRuleTarget) as err:
        parse_layout(bad)
    assert err.value.key_id == "q99"


def test_duplicate_key_id():
    bad = QWERTY_26 + '\n      - {key_id: "q", row: 3, col: 0, width: 0.1, base_output: "q"}'
    with pytest.raises(DuplicateKeyId):
        parse_layout(bad)


def test_non_nfc_output_rejected():
    # e + COMBINING ACUTE is the decomposed (non-NFC) form of é
    decomposed = "é"
    bad = QWERTY_26 + f'\n      - {{key_id: "x2", row: 3, col: 0, width: 0.1, base_output: "{decomposed}"}}'
    with pytest.raises(NonNfcOutput):
        parse_layout(bad)


def test_swiss_german_standalone_umlauts(layouts):
    """The umlauts are top-level keys right of the grid, not long-presses."""
    gsw = layouts["gsw_qwertz"]
    page0 = {k.key_id: k for k in gsw.page_keys(0)}
    for ch in "äöü":
        assert ch in page0
        assert page0[ch].base_output == ch
        assert page0[ch].shift_output == ch.upper()
    assert not any(ch in k.long_press for k in gsw.page_keys(0) for ch in "äöü")


def test_roundtrip_identity(layouts):
    for layout in layouts.values():
        assert parse_layout(serialize_layout(layout)) == layout


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------

YAKUT_EXTRA = "ҕҥөһү"


def test_yakut_gap_exact(layouts, profiles):
    ru_layout = layouts["ru_cyrillic"]
    sah_inventory = profiles["sah"].inventory
    report = coverage_report(ru_layout, sah_inventory)
    expected = set(YAKUT_EXTRA) | {ch.upper() for ch in YAKUT_EXTRA}
    assert set(report.missing) == expected
    assert not report.complete
    tailored = coverage_report(layouts["sah_cyrillic"], sah_inventory)
    assert tailored.complete


def test_kanuri_gap(layouts, profiles):
    report = coverage_report(layouts["en_qwerty"], profiles["kr"].inventory)
    assert set(report.missing) == {"ə", "Ə"}
    assert "ə" in report.missing
    assert coverage_report(layouts["kr_qwerty"], profiles["kr"].inventory).complete


def test_empty_inventory_complete(layouts):
    empty = CharacterInventory("und", frozenset())
    assert coverage_report(layouts["en_qwerty"], empty).complete


def test_all_bundled_layouts_cover_their_profiles(layouts, profiles):
    for layout_id, layout in layouts.items():
        profile = profiles[layout.language_tag]
        report = coverage_report(layout, profile.inventory)
        assert report.complete, f"{layout_id}: missing {sorted(report.missing)}"


def test_coverage_paths(layouts, profiles):
    ru = coverage_report(layouts["ru_cyrillic"], profiles["ru"].inventory)
    assert ru.reachable["й"] == "base"
    assert ru.reachable["Й"] == "shift"
    assert ru.reachable["ё"] == "long_press"
    hi = coverage_report(layouts["hi_devanagari"], profiles["hi"].inventory)
    assert hi.reachable["ि"] == "dynamic"
    assert hi.reachable["क"] == "base"


# ---------------------------------------------------------------------------
# key_state / dynamic rules
# ---------------------------------------------------------------------------

ABUGIDA = """\
format_version: 1
layout_id: "toy_deva"
language_tag: "hi"
script: "Deva"
base_grid: "script_native"
version: 1
grapheme_classes:
  C: ["क", "ख"]
pages:
  - keys:
      - {key_id: "ka", row: 0, col: 0, width: 0.25, base_output: "क"}
      - {key_id: "kha", row: 0, col: 1, width: 0.25, base_output: "ख"}
      - {key_id: "vi", row: 0, col: 2, width: 0.25, face: ""}
      - {key_id: "vu", row: 0, col: 3, width: 0.25, face: ""}
dynamic_rules:
  - {context_pattern: "[C]", target_key_id: "vi", new_output: "ि", new_face: "{match}ि"}
  - {context_pattern: "[C]", target_key_id: "vu", new_output: "ु", new_face: "{match}ु"}
"""


def test_abugida_combined_faces():
    layout = parse_layout(ABUGIDA)
    state = key_state(layout, "क")
    assert state["vi"].face == "कि"
    assert state["vi"].output == "ि"
    state2 = key_state(layout, "ख")
    assert state2["vu"].face == "खु"


def test_no_context_identity():
    layout = parse_layout(ABUGIDA)
    state = key_state(layout, "")
    for key in layout.page_keys(0):
        assert state[key.key_id].output == key.base_output
        assert state[key.key_id].face == key.face


def test_rule_order_first_match_wins():
    """Two matching rules with equal-length contexts: list order decides."""
    doc = ABUGIDA + """\
  - {context_pattern: "क", target_key_id: "vi", new_output: "ि", new_face: "FIRSTLOSES"}
"""
    layout = parse_layout(doc)
    # The class rule is listed first and matches the same 1-char suffix.
    assert key_state(layout, "क")["vi"].face == "कि"

    # Linear-scan oracle over the rule list
    def oracle(committed, key_id):
        from polyboard.layout import match_context

        best = None
        for index, rule in enumerate(layout.dynamic_rules):
            if rule.target_key_id != key_id:
                continue
            matched = match_context(rule.context_pattern, committed, layout.grapheme_classes)
            if matched is None:
                continue
            rank = (-len(matched), index)
            if best is None or rank < best[0]:
                best = (rank, rule, matched)
        if best is None:
            return None
        _, rule, matched = best
        return rule.new_face.replace("{match}", matched)

    assert oracle("क", "vi") == key_state(layout, "क")["vi"].face


def test_longest_suffix_wins_over_order():
    doc = ABUGIDA + """\
  - {context_pattern: "खक", target_key_id: "vi", new_output: "ि", new_face: "LONG"}
"""
    layout = parse_layout(doc)
    # 2-char context listed later still beats the earlier 1-char class match.
    assert key_state(layout, "खक")["vi"].face == "LONG"


def test_key_state_pure_and_incremental():
    layout = parse_layout(ABUGIDA)
    a = key_state(layout, "क")
    b = key_state(layout, "क")
    assert a == b
    # appending one grapheme equals recomputing from scratch
    assert key_state(layout, "क" + "ख") == key_state(layout, "कख")


def test_shift_outputs():
    layout = parse_layout(QWERTY_26)
    state = key_state(layout, "", shift=True)
    assert state["q"].output == "Q"


# ---------------------------------------------------------------------------
# hit_test
# ---------------------------------------------------------------------------

TWO_KEY = """\
format_version: 1
layout_id: "two"
language_tag: "en"
script: "Latn"
base_grid: "qwerty"
version: 1
pages:
  - keys:
      - {key_id: "a", row: 0, col: 0, width: 0.5, base_output: "a"}
      - {key_id: "s", row: 0, col: 1, width: 0.5, base_output: "s"}
"""


def test_hit_center_zero_distance():
    layout = parse_layout(TWO_KEY)
    key_id, d2 = hit_test(layout, 0.25, 0.5)
    assert key_id == "a" and d2 == 0.0


def test_hit_tie_breaks_to_lower_key_id():
    layout = parse_layout(TWO_KEY)
    # centers at x=0.25 and 0.75: x=0.5 is exactly equidistant
    key_id, d2 = hit_test(layout, 0.5, 0.5)
    assert key_id == "a"


def test_hit_corner_matches_brute_force(en_layout):
    centers = page_centers(en_layout)

    def brute(x, y):
        best = min(
            ((x - cx) ** 2 + (y - cy) ** 2, kid) for kid, (cx, cy) in centers.items()
        )
        return best[1], best[0]

    for corner in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]:
        assert hit_test(en_layout, *corner) == brute(*corner)


def test_hit_random_taps_match_exhaustive_scan(layouts):
    rng = random.Random(20240811)
    for layout in layouts.values():
        centers = page_centers(layout)
        active = {
            k.key_id
            for k in layout.page_keys(0)
            if k.base_output or k.shift_output or k.long_press or k.switch_to_page is not None
        }
        for _ in range(1000):
            x, y = rng.random(), rng.random()
            got_key, got_d2 = hit_test(layout, x, y)
            want_d2, want_key = min(
                ((x - cx) ** 2 + (y - cy) ** 2, kid)
                for kid, (cx, cy) in centers.items()
                if kid in active
            )
            assert got_key == want_key
            assert math.isclose(got_d2, want_d2, rel_tol=0, abs_tol=0)


def test_no_active_keys():
    doc = """\
format_version: 1
layout_id: "blank"
language_tag: "en"
script: "Latn"
base_grid: "script_native"
version: 1
pages:
  - keys:
      - {key_id: "b1", row: 0, col: 0, width: 1.0, face: ""}
"""
    layout = parse_layout(doc)
    with pytest.raises(NoActiveKeys):
        hit_test(layout, 0.5, 0.5)


def test_blank_key_activated_by_rule_is_hittable():
    layout = parse_layout(ABUGIDA)
    state = key_state(layout, "क")
    key_id, _ = hit_test(layout, 0.6, 0.5, state=state)
    assert key_id == "vi"
    # inert without context: nearest active key is a consonant instead
    state0 = key_state(layout, "")
    key_id0, _ = hit_test(layout, 0.6, 0.5, state=state0)
    assert key_id0 in ("ka", "kha")


# ---------------------------------------------------------------------------
# schema details
# ---------------------------------------------------------------------------

def test_bad_width_rejected():
    bad = TWO_KEY.replace('width: 0.5, base_output: "a"', 'width: 1.5, base_output: "a"')
    with pytest.raises(SchemaError):
        parse_layout(bad)


def test_unknown_class_rejected():
    bad = ABUGIDA + """\
  - {context_pattern: "[Z]", target_key_id: "vi", new_output: "ि", new_face: "x"}
"""
    with pytest.raises(SchemaError):
        parse_layout(bad)


def test_render_text_grid(layouts):
    text = render_layout(layouts["gsw_qwertz"])
    assert "[ü]" in text
    assert "long-press:" in text
    hi_text = render_layout(layouts["hi_devanagari"], committed_text="क")
    assert "[कि]" in hi_text
