"""Tap-sequence decoding: literal typing, autocorrect, prediction, shorthand.

Candidate words are scored as alpha * spatial + LM. The spatial term aligns
the word's typeable units against the taps: a matched tap contributes an
isotropic log-Gaussian in the distance to the unit's key center, and up to
ceil(taps/4) edits (insertion, deletion, transposition, substitution) are
allowed at a flat penalty each. The alignment DP is vectorized across the
whole candidate set; beam mode prunes candidates between taps, and a beam at
least as wide as the vocabulary is exhaustive by construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyTapSequence, InvalidEvent
from .layout import Layout, page_centers, page_geometry
from .personal import PersonalDict, PersonalizedModel
from .profiles import LanguageProfile

LOG10E = math.log10(math.e)
SIGMA_FRACTION = 0.4
ALPHA_DEFAULT = 1.0
LM_FLOOR = -8.0
EDIT_PENALTY = -2.5       # log10 cost per edit
NO_KEY_EMISSION = -25.0   # soft tap against a unit with no key position
HARD_MISMATCH = -25.0     # hard-selected grapheme against a different unit
NEG = -1.0e9
TAU_0 = 0.5
LENIENCY_GAIN = 4.0

TAP_KINDS = ("tap", "long_press_select", "backspace", "space", "commit")


@dataclass(frozen=True)
class TapEvent:
    x: float = 0.0
    y: float = 0.0
    timestamp: int = 0
    kind: str = "tap"
    index: int | None = None  # long_press_select slot

    def __post_init__(self):
        if self.kind not in TAP_KINDS:
            raise InvalidEvent(f"unknown tap kind {self.kind!r}")


@dataclass(frozen=True)
class Suggestion:
    surface: str
    score: float
    kind: str  # literal | correction | prediction | personal | reduplication


class SpatialModel:
    """Key centers plus an isotropic Gaussian tap model (sigma in key widths).

    Also owns the typeable-unit registry used to segment candidate words:
    base outputs carry a key position; long-press entries and rule outputs
    are typeable but positionless.
    """

    def __init__(self, layout: Layout, sigma_fraction: float = SIGMA_FRACTION, page: int = 0):
        if sigma_fraction <= 0:
            raise ValueError("sigma fraction must be > 0")
        self.layout = layout
        self.page = page
        self.sigma_fraction = sigma_fraction

        centers = page_centers(layout, page)
        geometry = page_geometry(layout, page)
        letter_keys = sorted(
            (k for k in layout.page_keys(page) if k.base_output), key=lambda k: k.key_id
        )
        self.key_ids = [k.key_id for k in letter_keys]
        self.centers = np.array([centers[k.key_id] for k in letter_keys], dtype=np.float64)
        widths = np.array([geometry[k.key_id][2] for k in letter_keys], dtype=np.float64)
        self.sigmas = sigma_fraction * widths
        self.log_peak = -np.log10(2.0 * math.pi * self.sigmas**2)

        units: list[str] = []
        unit_key: list[int] = []
        self._unit_id: dict[str, int] = {}

        def add_unit(text: str, key_index: int) -> int:
            existing = self._unit_id.get(text)
            if existing is not None:
                return existing
            self._unit_id[text] = len(units)
            units.append(text)
            unit_key.append(key_index)
            return len(units) - 1

        self._key_unit: list[int] = []
        for key_index, key in enumerate(letter_keys):
            self._key_unit.append(add_unit(key.base_output, key_index))
        for key in layout.page_keys(page):
            for entry in key.long_press:
                add_unit(entry, -1)
        for rule in layout.dynamic_rules:
            stripped = rule.stripped_output()
            if stripped:
                add_unit(stripped, -1)
        self._pad_unit = add_unit("\x00pad", -1)
        self._unknown_unit = add_unit("\x00unknown", -1)

        self.units = units
        self.unit_key = np.array(unit_key, dtype=np.int64)
        self._seg_cache: dict[str, tuple[int, ...] | None] = {}
        self._by_length = sorted(
            (u for u in self._unit_id if not u.startswith("\x00")), key=len, reverse=True
        )

    # -- geometry ------------------------------------------------------------

    def nearest_key_index(self, x: float, y: float) -> int:
        d2 = (self.centers[:, 0] - x) ** 2 + (self.centers[:, 1] - y) ** 2
        return int(np.argmin(d2))  # key_ids sorted, so ties pick the lower id

    def tap_log_likelihoods(self, x: float, y: float) -> np.ndarray:
        d2 = (self.centers[:, 0] - x) ** 2 + (self.centers[:, 1] - y) ** 2
        return self.log_peak - d2 / (2.0 * self.sigmas**2) * LOG10E

    # -- unit registry ---------------------------------------------------------

    def unit_of(self, text: str) -> int:
        return self._unit_id.get(text, self._unknown_unit)

    def segment(self, word: str) -> tuple[int, ...]:
        """Greedy longest-unit segmentation; unknown codepoints map to a sentinel."""
        cached = self._seg_cache.get(word)
        if cached is not None:
            return cached
        ids: list[int] = []
        pos = 0
        while pos < len(word):
            for unit in self._by_length:
                if word.startswith(unit, pos):
                    ids.append(self._unit_id[unit])
                    pos += len(unit)
                    break
            else:
                ids.append(self._unknown_unit)
                pos += 1
        result = tuple(ids)
        self._seg_cache[word] = result
        return result


@dataclass(frozen=True)
class DecodeItem:
    """One resolved input item: a soft (probabilistic) tap or a hard grapheme."""

    soft: bool
    x: float = 0.0
    y: float = 0.0
    surface: str = ""  # what the item contributes to the literal

    @classmethod
    def soft_tap(cls, x: float, y: float, spatial: "SpatialModel") -> "DecodeItem":
        near = spatial.nearest_key_index(x, y)
        return cls(soft=True, x=x, y=y, surface=spatial.units[spatial._key_unit[near]])

    @classmethod
    def hard(cls, grapheme: str) -> "DecodeItem":
        return cls(soft=False, surface=grapheme)


def resolve_taps(taps: Sequence[TapEvent], spatial: SpatialModel) -> list[DecodeItem]:
    items: list[DecodeItem] = []
    layout_keys = {k.key_id: k for k in spatial.layout.page_keys(spatial.page)}
    for tap in taps:
        if tap.kind == "tap":
            items.append(DecodeItem.soft_tap(tap.x, tap.y, spatial))
        elif tap.kind == "long_press_select":
            near = spatial.nearest_key_index(tap.x, tap.y)
            key = layout_keys[spatial.key_ids[near]]
            if tap.index is None or not (0 <= tap.index < len(key.long_press)):
                raise InvalidEvent(
                    f"long_press_select index {tap.index!r} invalid for key {key.key_id}"
                )
            items.append(DecodeItem.hard(key.long_press[tap.index]))
        else:
            raise InvalidEvent(f"event kind {tap.kind!r} is not part of a word")
    return items


def edit_budget(n_taps: int) -> int:
    return (n_taps + 3) // 4


def _emission_table(items: Sequence[DecodeItem], spatial: SpatialModel) -> np.ndarray:
    """(taps, units) log10 emission scores."""
    U = len(spatial.units)
    E = np.full((len(items), U), NO_KEY_EMISSION, dtype=np.float64)
    keyed = spatial.unit_key >= 0
    for i, item in enumerate(items):
        if item.soft:
            per_key = spatial.tap_log_likelihoods(item.x, item.y)
            E[i, keyed] = per_key[spatial.unit_key[keyed]]
        else:
            E[i, :] = HARD_MISMATCH
            E[i, spatial.unit_of(item.surface)] = 0.0
    E[:, spatial._pad_unit] = NEG
    return E


def _insertion_closure(dp: np.ndarray) -> None:
    """Advance units without consuming a tap (one edit each), in place."""
    for j in range(dp.shape[1] - 1):
        np.maximum(dp[:, j + 1, 1:], dp[:, j, :-1] + EDIT_PENALTY, out=dp[:, j + 1, 1:])


def _align_all(
    E: np.ndarray,
    words_mat: np.ndarray,
    lengths: np.ndarray,
    budget: int,
    beam_width: int | None = None,
) -> np.ndarray:
    """Best alignment score per word; <= NEG/2 where nothing fits the budget.

    With a beam, candidate rows outside the top ``beam_width`` partial scores
    are written off after every tap; ties keep earlier rows, so the result is
    deterministic, and a beam at least the vocabulary size never prunes.
    """
    T = E.shape[0]
    V, L = words_mat.shape
    dp = np.full((V, L + 1, budget + 1), NEG, dtype=np.float64)
    dp[:, 0, 0] = 0.0
    _insertion_closure(dp)

    carry: np.ndarray | None = None
    for i in range(T):
        Em = E[i][words_mat]  # (V, L): emission of tap i per unit position
        ndp = np.full_like(dp, NEG)
        # match: consume tap i with the next unit
        np.maximum(ndp[:, 1:, :], dp[:, :-1, :] + Em[:, :, None], out=ndp[:, 1:, :])
        # substitution: tap consumed, unit advanced, flat penalty
        np.maximum(ndp[:, 1:, 1:], dp[:, :-1, :-1] + EDIT_PENALTY, out=ndp[:, 1:, 1:])
        # deletion: stray tap consumed, no unit advance
        np.maximum(ndp[:, :, 1:], dp[:, :, :-1] + EDIT_PENALTY, out=ndp[:, :, 1:])
        # a transposition started at the previous tap lands here
        if carry is not None:
            np.maximum(ndp, carry, out=ndp)
        # transposition starting here: units j, j+1 against taps i+1, i
        if i + 1 < T and L >= 2:
            e_first = E[i][words_mat[:, 1:]]        # tap i vs unit j+1
            e_second = E[i + 1][words_mat[:, :-1]]  # tap i+1 vs unit j
            pair = dp[:, :-2, :-1] + (e_first + e_second)[:, :, None]
            carry = np.full_like(dp, NEG)
            np.maximum(carry[:, 2:, 1:], pair, out=carry[:, 2:, 1:])
        else:
            carry = None
        _insertion_closure(ndp)
        dp = ndp
        if beam_width is not None and V > beam_width:
            partial = dp.reshape(V, -1).max(axis=1)
            order = np.lexsort((np.arange(V), -partial))
            dead = np.ones(V, dtype=bool)
            dead[order[:beam_width]] = False
            dp[dead] = NEG
            if carry is not None:
                carry[dead] = NEG

    return np.take_along_axis(dp, lengths[:, None, None], axis=1)[:, 0, :].max(axis=1)


def decode_word(
    taps: Sequence[TapEvent],
    context: Sequence[str],
    model,
    spatial: SpatialModel,
    profile: LanguageProfile,
    k: int = 3,
    alpha: float = ALPHA_DEFAULT,
    beam_width: int | None = None,
) -> list[Suggestion]:
    """Ranked suggestions for one word's taps; the literal is always included."""
    if not taps:
        raise EmptyTapSequence("decode_word needs at least one tap")
    return decode_items(
        resolve_taps(taps, spatial), context, model, spatial, profile,
        k=k, alpha=alpha, beam_width=beam_width,
    )


def decode_items(
    items: Sequence[DecodeItem],
    context: Sequence[str],
    model,
    spatial: SpatialModel,
    profile: LanguageProfile,
    k: int = 3,
    alpha: float = ALPHA_DEFAULT,
    beam_width: int | None = None,
) -> list[Suggestion]:
    if not items:
        raise EmptyTapSequence("decode needs at least one input item")
    literal = "".join(item.surface for item in items)
    folded_literal = profile.fold(literal)
    T = len(items)
    budget = edit_budget(T)
    E = _emission_table(items, spatial)

    vocab = sorted(model.vocabulary)
    segments = [spatial.segment(w) for w in vocab]
    keep = [
        vi for vi, seg in enumerate(segments) if abs(len(seg) - T) <= budget
    ]
    words = [vocab[vi] for vi in keep]
    kept_segments = [segments[vi] for vi in keep]

    suggestions: list[Suggestion] = []
    literal_units = [
        spatial._key_unit[spatial.nearest_key_index(item.x, item.y)]
        if item.soft
        else spatial.unit_of(item.surface)
        for item in items
    ]
    literal_spatial = float(sum(E[i, u] for i, u in enumerate(literal_units)))
    personal_check = getattr(model, "is_personal_only", None)

    if words:
        Lmax = max(len(seg) for seg in kept_segments)
        words_mat = np.full((len(words), Lmax), spatial._pad_unit, dtype=np.int64)
        for row, seg in enumerate(kept_segments):
            words_mat[row, : len(seg)] = seg
        lengths = np.array([len(seg) for seg in kept_segments], dtype=np.int64)
        spatial_scores = _align_all(E, words_mat, lengths, budget, beam_width)
        for row, word in enumerate(words):
            if spatial_scores[row] <= NEG / 2:
                continue
            lm = model.log10_prob(word, context, floor=LM_FLOOR)
            total = alpha * float(spatial_scores[row]) + lm
            if word == folded_literal:
                kind = "literal"
            elif personal_check is not None and personal_check(word):
                kind = "personal"
            else:
                kind = "correction"
            suggestions.append(Suggestion(surface=word, score=total, kind=kind))

    if not any(s.kind == "literal" for s in suggestions):
        lm = model.log10_prob(folded_literal, context, floor=LM_FLOOR)
        suggestions.append(
            Suggestion(
                surface=folded_literal,
                score=alpha * literal_spatial + lm,
                kind="literal",
            )
        )

    suggestions.sort(key=lambda s: (-s.score, s.surface))
    top = suggestions[:k] if k > 0 else []
    if top and not any(s.kind == "literal" for s in top):
        literal_sugg = next(s for s in suggestions if s.kind == "literal")
        top = top[: max(0, k - 1)] + [literal_sugg]
    return top


def commit_policy(
    suggestions: Sequence[Suggestion],
    profile: LanguageProfile,
    blocklist: PersonalDict | set | None = None,
) -> str:
    """Literal unless the best eligible correction clears the leniency margin."""
    literal = next((s for s in suggestions if s.kind == "literal"), None)
    if literal is None:
        raise ValueError("suggestions contain no literal entry")

    def blocked(correction: str) -> bool:
        if blocklist is None:
            return False
        if isinstance(blocklist, PersonalDict):
            return blocklist.is_blocked(literal.surface, correction)
        return (literal.surface, correction) in blocklist

    for s in suggestions:
        if s.kind in ("correction", "personal") and s.surface != literal.surface:
            if blocked(s.surface):
                continue
            tau = TAU_0 * (1.0 + LENIENCY_GAIN * profile.leniency)
            if s.score - literal.score > tau:
                return s.surface
            break
    return literal.surface


def next_words(
    context: Sequence[str],
    model,
    profile: LanguageProfile,
    k: int = 3,
) -> list[Suggestion]:
    """Top-k continuations; reduplication of the last word competes too."""
    if k <= 0:
        return []
    ctx = list(context)
    pool = set(model.seen_continuations(ctx))
    # Unseen words rank by their unigram backoff, so the best k of them are
    # the first k unigrams outside the seen set: together the pool provably
    # contains the true top-k.
    added = 0
    for w in model.top_unigrams(len(model.vocabulary) + 2):
        if w in pool:
            continue
        pool.add(w)
        added += 1
        if added >= k:
            break
    pool.discard("<s>")
    pool.discard("<unk>")
    scored = [
        Suggestion(surface=w, score=model.log10_prob(w, ctx, floor=LM_FLOOR), kind="prediction")
        for w in pool
    ]
    if profile.reduplication_enabled and ctx:
        redup = f"{ctx[-1]}-{ctx[-1]}"
        if redup not in pool:
            scored.append(
                Suggestion(
                    surface=redup,
                    score=model.log10_prob(redup, ctx, floor=LM_FLOOR),
                    kind="reduplication",
                )
            )
    scored.sort(key=lambda s: (-s.score, s.surface))
    return scored[:k]


_SHORTHAND_RE = re.compile(r"^(.+)2$")


def expand_shorthand(token: str, profile: LanguageProfile) -> Suggestion | None:
    """'makan2' -> 'makan-makan' on profiles with reduplication enabled."""
    if not profile.reduplication_enabled:
        return None
    m = _SHORTHAND_RE.match(token)
    if not m:
        return None
    stem = m.group(1)
    if any(ch.isdigit() for ch in stem):
        return None
    return Suggestion(surface=f"{stem}-{stem}", score=0.0, kind="reduplication")
