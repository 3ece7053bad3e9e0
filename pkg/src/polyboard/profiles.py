"""Per-language configuration: scripts, inventory, casing, decoding knobs.

Profiles are the configuration spine the rest of the engine hangs off.
Bundled profiles/layouts live in the package data directory; user-writable
state (personal dictionaries) lives under ``$POLYBOARD_DATA_DIR`` or
``~/.polyboard``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .errors import SchemaError
from .layout import CharacterInventory, Layout, is_nfc, load_layout, parse_layout

CASINGS = ("cased", "uncased")
SCRIPT_USAGES = ("everyday", "heritage")
ENV_DATA_DIR = "POLYBOARD_DATA_DIR"


@dataclass(frozen=True)
class LanguageProfile:
    language_tag: str
    name: str
    autonym: str
    scripts: tuple[tuple[str, str], ...]  # (ISO 15924 code, usage)
    inventory: CharacterInventory
    casing: str = "cased"
    leniency: float = 0.0
    reduplication_enabled: bool = False
    default_layout: str | None = None

    def __post_init__(self):
        if not self.scripts or not any(u == "everyday" for _, u in self.scripts):
            raise SchemaError(f"profile {self.language_tag}: needs an everyday script")
        for code, usage in self.scripts:
            if usage not in SCRIPT_USAGES:
                raise SchemaError(f"profile {self.language_tag}: bad script usage {usage!r}")
            if len(code) != 4 or not code.isalpha():
                raise SchemaError(f"profile {self.language_tag}: bad script code {code!r}")
        if self.casing not in CASINGS:
            raise SchemaError(f"profile {self.language_tag}: casing {self.casing!r}")
        if not 0.0 <= self.leniency <= 1.0:
            raise SchemaError(f"profile {self.language_tag}: leniency outside [0, 1]")

    @property
    def everyday_script(self) -> str:
        return next(code for code, usage in self.scripts if usage == "everyday")

    def fold(self, word: str) -> str:
        return word.lower() if self.casing == "cased" else word


def parse_profile(data: bytes | str) -> LanguageProfile:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = yaml.safe_load(data)
    except yaml.YAMLError as exc:
        raise SchemaError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != 1:
        raise SchemaError("profile file must be a mapping with format_version: 1")
    try:
        tag = str(doc["language_tag"])
        scripts = tuple((str(s["code"]), str(s["usage"])) for s in doc["scripts"])
        inv = doc["inventory"]
        inventory = CharacterInventory(
            language_tag=tag,
            required=frozenset(str(g) for g in inv["required"]),
            optional_loanword=frozenset(str(g) for g in inv.get("optional_loanword") or ()),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"profile missing field: {exc}") from exc
    return LanguageProfile(
        language_tag=tag,
        name=str(doc.get("name", tag)),
        autonym=str(doc.get("autonym", "")),
        scripts=scripts,
        inventory=inventory,
        casing=str(doc.get("casing", "cased")),
        leniency=float(doc.get("leniency", 0.0)),
        reduplication_enabled=bool(doc.get("reduplication_enabled", False)),
        default_layout=doc.get("default_layout"),
    )


def load_profile(path: str | Path) -> LanguageProfile:
    return parse_profile(Path(path).read_bytes())


def parse_inventory(data: bytes | str) -> CharacterInventory:
    """Accept either a bare inventory file or a full profile file."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    doc = yaml.safe_load(data)
    if isinstance(doc, dict) and "inventory" in doc:
        return parse_profile(data).inventory
    if not isinstance(doc, dict) or "required" not in doc:
        raise SchemaError("inventory file needs a 'required' list")
    return CharacterInventory(
        language_tag=str(doc.get("language_tag", "und")),
        required=frozenset(str(g) for g in doc["required"]),
        optional_loanword=frozenset(str(g) for g in doc.get("optional_loanword") or ()),
    )


def load_inventory(path: str | Path) -> CharacterInventory:
    return parse_inventory(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# Bundled assets and user data locations
# ---------------------------------------------------------------------------

def bundled_data_dir() -> Path:
    return Path(str(resources.files("polyboard") / "data"))


def user_data_dir() -> Path:
    override = os.environ.get(ENV_DATA_DIR)
    if override:
        return Path(override)
    return Path.home() / ".polyboard"


def bundled_profiles() -> dict[str, LanguageProfile]:
    profiles = {}
    for path in sorted((bundled_data_dir() / "profiles").glob("*.yaml")):
        profile = load_profile(path)
        profiles[profile.language_tag] = profile
    return profiles


def bundled_layout(layout_id: str) -> Layout:
    path = bundled_data_dir() / "layouts" / f"{layout_id}.yaml"
    if not path.exists():
        raise SchemaError(f"no bundled layout {layout_id!r} at {path}")
    return load_layout(path)


def bundled_layouts() -> dict[str, Layout]:
    layouts = {}
    for path in sorted((bundled_data_dir() / "layouts").glob("*.yaml")):
        layout = parse_layout(path.read_bytes())
        layouts[layout.layout_id] = layout
    return layouts


def bundled_corpus_path(language_tag: str) -> Path:
    return bundled_data_dir() / "corpora" / f"{language_tag}.txt"
