"""Exception types shared across the engine."""


class PolyboardError(Exception):
    """Base class for all engine errors."""


class SchemaError(PolyboardError):
    """Malformed layout/profile/registry file."""


class DuplicateKeyId(SchemaError):
    def __init__(self, key_id: str, page: int):
        super().__init__(f"duplicate key id {key_id!r} on page {page}")
        self.key_id = key_id
        self.page = page


class DanglingRuleTarget(SchemaError):
    def __init__(self, key_id: str):
        super().__init__(f"dynamic rule targets unknown key id {key_id!r}")
        self.key_id = key_id


class NonNfcOutput(SchemaError):
    def __init__(self, where: str, text: str):
        super().__init__(f"output {text!r} at {where} is not NFC-normalized")
        self.where = where
        self.text = text


class NoActiveKeys(PolyboardError):
    """Hit test on a page with no tappable keys."""


class EmptyCorpus(PolyboardError):
    """No usable tokens/sentences in the training input."""


class OrderTooLarge(PolyboardError):
    def __init__(self, order: int, limit: int = 5):
        super().__init__(f"n-gram order {order} exceeds supported maximum {limit}")
        self.order = order


class FormatError(PolyboardError):
    """Bad model file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NonLatinScript(PolyboardError):
    """Layout autogeneration requested for a non-Latin inventory."""


class HostOverflowUnresolvable(PolyboardError):
    """Long-press hosts and the overflow page are both full."""


class EmptyTapSequence(PolyboardError):
    """decode_word called with no taps."""


class CrossScriptMix(PolyboardError):
    def __init__(self, tag_a: str, script_a: str, tag_b: str, script_b: str):
        super().__init__(
            f"cannot mix {tag_a} ({script_a}) with {tag_b} ({script_b}): scripts differ"
        )
        self.pair = ((tag_a, script_a), (tag_b, script_b))


class EmptyModelList(PolyboardError):
    """mix() called with no component models."""


class InventoryViolation(PolyboardError):
    def __init__(self, word: str, bad_chars: set):
        chars = " ".join(sorted(bad_chars))
        super().__init__(f"word {word!r} contains out-of-inventory characters: {chars}")
        self.word = word
        self.bad_chars = bad_chars


class InvalidFactorRange(PolyboardError):
    def __init__(self, factor: str, value, lo, hi):
        super().__init__(f"factor {factor}={value!r} outside allowed range [{lo}, {hi}]")
        self.factor = factor


class OrphanStatus(PolyboardError):
    def __init__(self, language_tag: str):
        super().__init__(f"status record for {language_tag!r} has no language record")
        self.language_tag = language_tag


class UnknownSession(PolyboardError):
    def __init__(self, session_id: str):
        super().__init__(f"unknown session {session_id!r}")
        self.session_id = session_id


class InvalidEvent(PolyboardError):
    """Event payload that does not follow the protocol."""
