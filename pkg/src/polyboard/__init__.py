"""polyboard: a multilingual virtual-keyboard engine.

Declarative layouts (including dynamic rules for complex scripts), automatic
Latin-script layout generation, corpus-to-model training, tap decoding with
autocorrect/prediction/spell-check, on-device personalization, same-script
multilingual mixing, and a language-roadmap registry.
"""

__version__ = "0.1.0"

from .layout import (  # noqa: F401
    CharacterInventory,
    CoverageReport,
    DynamicRule,
    Key,
    Layout,
    Page,
    coverage_report,
    hit_test,
    key_state,
    load_layout,
    parse_layout,
    render_layout,
    save_layout,
    serialize_layout,
)
from .profiles import LanguageProfile, load_profile, parse_profile  # noqa: F401
from .autogen import AutogenOptions, FrequencyTable, base_of, char_frequencies, generate_layout  # noqa: F401
from .normalize import NormalizeResult, RejectionReport, Wordlist, build_wordlist, normalize  # noqa: F401
from .ngram import NGramModel, TrainParams, UniformModel, load_model, serialize_model, train_ngram  # noqa: F401
from .decoder import (  # noqa: F401
    SpatialModel,
    Suggestion,
    TapEvent,
    commit_policy,
    decode_word,
    expand_shorthand,
    next_words,
)
from .spell import SpellIndex, osa_distance, spell_check  # noqa: F401
from .personal import PersonalDict, PersonalizedModel, personalized_prob  # noqa: F401
from .mixer import MixedModel, adapt_weights, mix  # noqa: F401
from .registry import LanguageRecord, StatusRecord, dashboard_report, priority_score  # noqa: F401
