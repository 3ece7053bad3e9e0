"""A typing session: event stream in, suggestion strip and text deltas out.

Sessions are deterministic: replaying a recorded event log against a fresh
session reproduces the committed text and every suggestion strip byte for
byte. Shared assets (layouts, base models) are immutable; the personal
dictionary is the only mutable state and has a single writer (the session).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .decoder import (
    DecodeItem,
    Suggestion,
    commit_policy,
    decode_items,
    expand_shorthand,
    next_words,
    SpatialModel,
)
from .errors import CrossScriptMix, InvalidEvent, InventoryViolation
from .layout import Layout, hit_test, key_state
from .mixer import MixedModel, adapt_weights, mix
from .personal import PersonalDict, PersonalizedModel
from .profiles import LanguageProfile

SUGGESTION_STRIP = 3


@dataclass
class _CommitInfo:
    start: int            # offset of the committed word in the text buffer
    committed: str
    literal: str
    correction: str | None
    trailing_space: bool


@dataclass(frozen=True)
class LanguageAssets:
    """Everything needed to enable one language in a session."""

    profile: LanguageProfile
    layout: Layout
    model: object  # NGramModel-like


class Session:
    def __init__(
        self,
        session_id: str,
        assets: Sequence[LanguageAssets],
        personal: PersonalDict,
        suggest_k: int = SUGGESTION_STRIP,
    ):
        if not assets:
            raise InvalidEvent("session needs at least one language")
        self.session_id = session_id
        self.personal = personal
        self.suggest_k = suggest_k
        self.committed = ""
        self.pending: list[DecodeItem] = []
        self.page = 0
        self.last_timestamp: int | None = None
        self.last_commit: _CommitInfo | None = None
        self._configure(assets)

    # -- configuration -------------------------------------------------------

    def _configure(self, assets: Sequence[LanguageAssets]) -> None:
        first = assets[0]
        for other in assets[1:]:
            if other.profile.everyday_script != first.profile.everyday_script:
                raise CrossScriptMix(
                    first.profile.language_tag,
                    first.profile.everyday_script,
                    other.profile.language_tag,
                    other.profile.everyday_script,
                )
        self.assets = tuple(assets)
        self.profile = first.profile
        self.layout = first.layout
        self.spatial = SpatialModel(self.layout)
        if len(assets) == 1:
            self._base_model = first.model
        else:
            self._base_model = mix([a.model for a in assets])
        self.model = PersonalizedModel(self._base_model, self.personal)
        self.page = 0

    @property
    def languages(self) -> list[str]:
        return [a.profile.language_tag for a in self.assets]

    # -- views ---------------------------------------------------------------

    def pending_surface(self) -> str:
        return "".join(item.surface for item in self.pending)

    def pending_literal(self) -> str:
        return self.profile.fold(self.pending_surface())

    def display_text(self) -> str:
        """Text before the cursor: what dynamic rules react to."""
        return self.committed + self.pending_surface()

    def context_words(self) -> list[str]:
        return self.committed.split()

    def _states(self):
        return key_state(self.layout, self.display_text(), page=self.page)

    def current_faces(self) -> dict[str, dict[str, str]]:
        return {
            key_id: {"output": st.output, "face": st.face}
            for key_id, st in self._states().items()
        }

    def suggestion_strip(self) -> list[Suggestion]:
        if self.pending:
            suggestions = decode_items(
                self.pending,
                self.context_words(),
                self.model,
                self.spatial,
                self.profile,
                k=self.suggest_k,
            )
            shorthand = expand_shorthand(self.pending_literal(), self.profile)
            if shorthand is not None and all(
                s.surface != shorthand.surface for s in suggestions
            ):
                suggestions = suggestions[: max(1, self.suggest_k - 1)] + [shorthand]
            return suggestions
        return next_words(self.context_words(), self.model, self.profile, k=self.suggest_k)

    # -- event handling --------------------------------------------------------

    def handle_event(self, event: dict) -> dict:
        if not isinstance(event, dict) or "kind" not in event:
            raise InvalidEvent("event must be an object with a 'kind'")
        kind = event["kind"]
        before_committed = self.committed
        before_faces = self.current_faces()
        before_page = self.page

        handler = getattr(self, f"_on_{kind}", None)
        if handler is None:
            raise InvalidEvent(f"unknown event kind {kind!r}")
        handler(event)

        faces = self.current_faces()
        if self.page != before_page:
            faces_delta = faces
        else:
            faces_delta = {
                key_id: st
                for key_id, st in faces.items()
                if before_faces.get(key_id) != st
            }
        prefix = 0
        limit = min(len(before_committed), len(self.committed))
        while prefix < limit and before_committed[prefix] == self.committed[prefix]:
            prefix += 1
        return {
            "ok": True,
            "suggestions": [
                {"surface": s.surface, "score": s.score, "kind": s.kind}
                for s in self.suggestion_strip()
            ],
            "committed_delta": {
                "retract": len(before_committed) - prefix,
                "append": self.committed[prefix:],
            },
            "committed": self.committed,
            "pending": self.pending_literal(),
            "page": self.page,
            "key_faces_delta": faces_delta,
        }

    def _check_timestamp(self, event: dict) -> None:
        ts = event.get("timestamp")
        if ts is None:
            return
        if self.last_timestamp is not None and ts < self.last_timestamp:
            raise InvalidEvent(f"timestamp {ts} decreases within the session")
        self.last_timestamp = ts

    def _coords(self, event: dict) -> tuple[float, float]:
        try:
            x, y = float(event["x"]), float(event["y"])
        except (KeyError, TypeError, ValueError):
            raise InvalidEvent("tap needs numeric x and y")
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise InvalidEvent(f"coordinates ({x}, {y}) outside [0, 1]")
        return x, y

    # -- individual events ---------------------------------------------------

    def _on_tap(self, event: dict) -> None:
        self._check_timestamp(event)
        x, y = self._coords(event)
        states = self._states()
        key_id, _ = hit_test(self.layout, x, y, page=self.page, state=states)
        key = dict((k.key_id, k) for k in self.layout.page_keys(self.page))[key_id]
        if key.switch_to_page is not None:
            self.page = key.switch_to_page
            return
        state = states[key_id]
        if not state.output:
            return  # inert key
        if self.page == 0 and state.output == key.base_output:
            self.pending.append(DecodeItem.soft_tap(x, y, self.spatial))
        else:
            # Rule-activated or off-page output: taken verbatim.
            self.pending.append(DecodeItem.hard(state.output))

    def _on_long_press_select(self, event: dict) -> None:
        self._check_timestamp(event)
        x, y = self._coords(event)
        states = self._states()
        key_id, _ = hit_test(self.layout, x, y, page=self.page, state=states)
        key = dict((k.key_id, k) for k in self.layout.page_keys(self.page))[key_id]
        index = event.get("index")
        if not isinstance(index, int) or not 0 <= index < len(key.long_press):
            raise InvalidEvent(f"long_press_select index {index!r} invalid for {key_id}")
        self.pending.append(DecodeItem.hard(key.long_press[index]))

    def _on_backspace(self, event: dict) -> None:
        self._check_timestamp(event)
        if self.pending:
            self.pending.pop()
            return
        if self.committed:
            self.committed = self.committed[:-1]
            self.last_commit = None

    def _on_space(self, event: dict) -> None:
        self._check_timestamp(event)
        self._commit_pending(trailing_space=True)

    def _on_commit(self, event: dict) -> None:
        self._check_timestamp(event)
        self._commit_pending(trailing_space=False)

    def _on_revert(self, event: dict) -> None:
        self._check_timestamp(event)
        info = self.last_commit
        if info is None or info.correction is None:
            return
        tail = " " if info.trailing_space else ""
        self.committed = self.committed[: info.start] + info.literal + tail
        self.personal.learn_revert(info.literal, info.correction, timestamp=self.last_timestamp)
        self.last_commit = None

    def _on_select_suggestion(self, event: dict) -> None:
        self._check_timestamp(event)
        strip = self.suggestion_strip()
        index = event.get("index")
        if not isinstance(index, int) or not 0 <= index < len(strip):
            raise InvalidEvent(f"no suggestion at index {index!r}")
        choice = strip[index]
        start = len(self.committed)
        self.committed += choice.surface + " "
        self._learn(choice.surface)
        self.last_commit = _CommitInfo(
            start=start,
            committed=choice.surface,
            literal=choice.surface,
            correction=None,  # user-chosen, not an auto-correction
            trailing_space=True,
        )
        self.pending = []

    def _on_request_suggestions(self, event: dict) -> None:
        self._check_timestamp(event)

    # -- commit plumbing -------------------------------------------------------

    def _commit_pending(self, trailing_space: bool) -> None:
        if not self.pending:
            return
        suggestions = decode_items(
            self.pending,
            self.context_words(),
            self.model,
            self.spatial,
            self.profile,
            k=self.suggest_k,
        )
        literal = next(s for s in suggestions if s.kind == "literal").surface
        committed_word = commit_policy(suggestions, self.profile, blocklist=self.personal)
        start = len(self.committed)
        self.committed += committed_word + (" " if trailing_space else "")
        self._learn(committed_word)
        self.last_commit = _CommitInfo(
            start=start,
            committed=committed_word,
            literal=literal,
            correction=committed_word if committed_word != literal else None,
            trailing_space=trailing_space,
        )
        self.pending = []

    def _learn(self, word: str) -> None:
        try:
            self.personal.learn_commit(word, timestamp=self.last_timestamp)
        except InventoryViolation:
            pass
        if isinstance(self._base_model, MixedModel):
            self._base_model = adapt_weights(self._base_model, word)
            self.model = PersonalizedModel(self._base_model, self.personal)
