"""Local session service: newline-delimited JSON messages, protocol v1.

One request per line, one response per line, over standard streams or a
local TCP port. Sessions are independent; each TCP connection gets its own
handler thread, and shared assets (profiles, layouts, base models) are
immutable. Personal dictionaries persist per user-data directory and are
written atomically after mutating events.
"""

from __future__ import annotations

import json
import socketserver
import sys
import threading
import uuid
from pathlib import Path

from .errors import PolyboardError, SchemaError, UnknownSession
from .layout import Layout
from .ngram import NGramModel, load_model_file, train_ngram
from .normalize import normalize
from .personal import PersonalDict
from .profiles import (
    LanguageProfile,
    bundled_corpus_path,
    bundled_layouts,
    bundled_profiles,
    user_data_dir,
)
from .session import LanguageAssets, Session

PROTOCOL_VERSION = "v1"
NGRAM_ORDER = 2  # demo models trained from the bundled corpora


class EngineAssets:
    """Profiles, layouts, and lazily trained/loaded base models."""

    def __init__(
        self,
        profiles: dict[str, LanguageProfile] | None = None,
        layouts: dict[str, Layout] | None = None,
        models_dir: str | Path | None = None,
    ):
        self.profiles = profiles if profiles is not None else bundled_profiles()
        self.layouts = layouts if layouts is not None else bundled_layouts()
        self.models_dir = Path(models_dir) if models_dir else None
        self._models: dict[str, NGramModel] = {}
        self._lock = threading.Lock()

    def profile_for(self, tag: str) -> LanguageProfile:
        profile = self.profiles.get(tag)
        if profile is None:
            raise SchemaError(f"no profile for language {tag!r}")
        return profile

    def layout_for(self, profile: LanguageProfile) -> Layout:
        layout_id = profile.default_layout
        if layout_id is None:
            raise SchemaError(f"profile {profile.language_tag} names no default_layout")
        layout = self.layouts.get(layout_id)
        if layout is None:
            raise SchemaError(f"missing layout asset {layout_id!r}")
        return layout

    def model_for(self, tag: str) -> NGramModel:
        with self._lock:
            cached = self._models.get(tag)
            if cached is not None:
                return cached
            profile = self.profile_for(tag)
            if self.models_dir is not None:
                path = self.models_dir / f"{tag}.lm"
                if path.exists():
                    model = load_model_file(path)
                    self._models[tag] = model
                    return model
            corpus_path = bundled_corpus_path(tag)
            if not corpus_path.exists():
                raise SchemaError(f"missing corpus asset {corpus_path}")
            result = normalize(corpus_path.read_text(encoding="utf-8"), profile)
            model = train_ngram(
                result.sentences,
                NGRAM_ORDER,
                language_tag=tag,
                script=profile.everyday_script,
            )
            self._models[tag] = model
            return model

    def assets_for(self, tags: list[str]) -> list[LanguageAssets]:
        out = []
        for tag in tags:
            profile = self.profile_for(tag)
            out.append(
                LanguageAssets(
                    profile=profile,
                    layout=self.layout_for(profile),
                    model=self.model_for(tag),
                )
            )
        return out


def encode_message(message: dict) -> str:
    """Canonical wire encoding: sorted keys, no trailing spaces, one line."""
    return json.dumps(message, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


class Service:
    def __init__(self, assets: EngineAssets | None = None, user_dir: str | Path | None = None):
        self.assets = assets or EngineAssets()
        self.user_dir = Path(user_dir) if user_dir else user_data_dir()
        self.sessions: dict[str, Session] = {}
        self._personal: dict[str, PersonalDict] = {}
        self._lock = threading.Lock()

    # -- personal dictionaries ------------------------------------------------

    def _personal_path(self, tag: str) -> Path:
        return self.user_dir / "personal" / f"{tag}.dict"

    def personal_for(self, tag: str) -> PersonalDict:
        with self._lock:
            cached = self._personal.get(tag)
            if cached is not None:
                return cached
            path = self._personal_path(tag)
            profile = self.assets.profile_for(tag)
            if path.exists():
                pdict = PersonalDict.load(path, inventory=profile.inventory)
            else:
                pdict = PersonalDict(inventory=profile.inventory)
            self._personal[tag] = pdict
            return pdict

    def _persist_personal(self, tag: str) -> None:
        pdict = self._personal.get(tag)
        if pdict is None:
            return
        path = self._personal_path(tag)
        path.parent.mkdir(parents=True, exist_ok=True)
        pdict.save(path)

    # -- request handling -------------------------------------------------------

    def handle_line(self, line: str) -> str:
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            return encode_message(
                {"ok": False, "error": {"code": "BadMessage", "message": "not valid JSON"}}
            )
        if not isinstance(message, dict) or "op" not in message:
            return encode_message(
                {"ok": False, "error": {"code": "BadMessage", "message": "missing 'op'"}}
            )
        try:
            response = self._dispatch(message)
        except PolyboardError as exc:
            response = {
                "ok": False,
                "error": {"code": type(exc).__name__, "message": str(exc)},
            }
        except (KeyError, TypeError, ValueError) as exc:
            response = {
                "ok": False,
                "error": {"code": "BadMessage", "message": f"{type(exc).__name__}: {exc}"},
            }
        return encode_message(response)

    def _dispatch(self, message: dict) -> dict:
        op = message["op"]
        if op == "hello":
            return {
                "ok": True,
                "protocol": PROTOCOL_VERSION,
                "languages": sorted(self.assets.profiles),
            }
        if op == "open_session":
            return self._open_session(message)
        if op == "event":
            return self._session_event(message)
        if op == "close_session":
            return self._close_session(message)
        return {"ok": False, "error": {"code": "BadMessage", "message": f"unknown op {op!r}"}}

    def _open_session(self, message: dict) -> dict:
        languages = message.get("languages")
        if not isinstance(languages, list) or not languages:
            raise SchemaError("open_session needs a non-empty 'languages' list")
        assets = self.assets.assets_for([str(t) for t in languages])
        layout_id = message.get("layout")
        if layout_id is not None:
            layout = self.assets.layouts.get(str(layout_id))
            if layout is None:
                raise SchemaError(f"missing layout asset {layout_id!r}")
            if layout.language_tag != assets[0].profile.language_tag:
                raise SchemaError(
                    f"layout {layout_id!r} belongs to {layout.language_tag!r}, "
                    f"not {assets[0].profile.language_tag!r}"
                )
            assets[0] = LanguageAssets(
                profile=assets[0].profile, layout=layout, model=assets[0].model
            )
        personal = self.personal_for(str(languages[0]))
        session_id = str(message.get("session_id") or uuid.uuid4().hex[:12])
        session = Session(session_id, assets, personal)
        with self._lock:
            self.sessions[session_id] = session
        return {
            "ok": True,
            "session_id": session_id,
            "protocol": PROTOCOL_VERSION,
            "languages": session.languages,
            "layout": layout_render_model(session.layout),
            "key_faces": session.current_faces(),
            "suggestions": [
                {"surface": s.surface, "score": s.score, "kind": s.kind}
                for s in session.suggestion_strip()
            ],
        }

    def _session_event(self, message: dict) -> dict:
        session_id = str(message.get("session_id", ""))
        with self._lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        event = message.get("event")
        if event is not None and event.get("kind") == "set_languages":
            languages = [str(t) for t in event.get("languages", [])]
            assets = self.assets.assets_for(languages)
            session._configure(assets)
            return {"ok": True, "languages": session.languages,
                    "layout": layout_render_model(session.layout),
                    "key_faces": session.current_faces()}
        response = session.handle_event(event)
        if event.get("kind") in ("space", "commit", "revert", "select_suggestion"):
            self._persist_personal(session.languages[0])
        return response

    def _close_session(self, message: dict) -> dict:
        session_id = str(message.get("session_id", ""))
        with self._lock:
            session = self.sessions.pop(session_id, None)
        if session is None:
            raise UnknownSession(session_id)
        self._persist_personal(session.languages[0])
        return {"ok": True, "session_id": session_id}

    # -- transports ---------------------------------------------------------------

    def serve_stdio(self, stdin=None, stdout=None) -> None:
        stdin = stdin or sys.stdin
        stdout = stdout or sys.stdout
        for line in stdin:
            line = line.strip()
            if not line:
                continue
            stdout.write(self.handle_line(line) + "\n")
            stdout.flush()

    def serve_tcp(self, host: str = "127.0.0.1", port: int = 0):
        service = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self):
                for raw in self.rfile:
                    line = raw.decode("utf-8").strip()
                    if not line:
                        continue
                    out = service.handle_line(line) + "\n"
                    self.wfile.write(out.encode("utf-8"))
                    self.wfile.flush()

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        return Server((host, port), Handler)


def layout_render_model(layout: Layout) -> dict:
    """Geometry + static faces for clients that draw the keyboard."""
    from .layout import page_geometry

    pages = []
    for page_index in range(len(layout.pages)):
        rects = page_geometry(layout, page_index)
        keys = []
        for key in layout.page_keys(page_index):
            x, y, w, h = rects[key.key_id]
            keys.append(
                {
                    "key_id": key.key_id,
                    "x": x,
                    "y": y,
                    "w": w,
                    "h": h,
                    "face": key.face,
                    "base_output": key.base_output,
                    "long_press": list(key.long_press),
                    "switch_to_page": key.switch_to_page,
                }
            )
        pages.append({"keys": keys})
    return {
        "layout_id": layout.layout_id,
        "language_tag": layout.language_tag,
        "script": layout.script,
        "pages": pages,
    }


def serve(
    port: int | None = None,
    user_dir: str | Path | None = None,
    models_dir: str | Path | None = None,
) -> None:
    """Entry point: stdio when no port is given, else a local TCP listener."""
    assets = EngineAssets(models_dir=models_dir)
    service = Service(assets=assets, user_dir=user_dir)
    if port is None:
        service.serve_stdio()
        return
    server = service.serve_tcp(port=port)
    host, bound_port = server.server_address
    print(f"polyboard service v1 listening on {host}:{bound_port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
