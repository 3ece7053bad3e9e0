"""Backoff n-gram language models with absolute discounting.

Training subtracts a fixed discount D from every observed count and hands the
freed mass to the next-shorter context through a backoff weight, so the
conditional distribution over the event space (vocabulary plus the unknown
token) sums to one for every context. Sentence starts are padded with a
begin marker that is never predicted; sentence ends are not an event.

The text format is the conventional one: free-text header, a ``\\data\\``
section with per-order counts, then per-order blocks of
``log10prob<TAB>n-gram<TAB>log10backoff`` lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCorpus, FormatError, OrderTooLarge

BOS = "<s>"
UNK = "<unk>"
MAX_ORDER = 5
LOG_ZERO = -99.0  # conventional placeholder for "never predicted"


@dataclass(frozen=True)
class TrainParams:
    discount: float = 0.75
    vocab_cap: int = 50_000
    min_count: int = 1  # raised to 2 automatically for corpora above the threshold
    large_corpus_tokens: int = 1_000_000


class NGramModel:
    """Immutable backoff model over word tuples.

    ``probs`` maps n-gram tuples to log10 conditional probabilities;
    ``backoffs`` maps context tuples to log10 backoff weights (missing means
    weight 1). The event space is ``vocabulary | {UNK}``; BOS only ever
    appears as context.
    """

    def __init__(
        self,
        order: int,
        probs: Mapping[tuple[str, ...], float],
        backoffs: Mapping[tuple[str, ...], float],
        vocabulary: frozenset[str],
        token_count: int = 0,
        language_tag: str = "",
        script: str = "",
    ):
        self.order = order
        self.probs = dict(probs)
        self.backoffs = dict(backoffs)
        self.vocabulary = frozenset(vocabulary)
        self.token_count = token_count
        self.language_tag = language_tag
        self.script = script
        self._events = self.vocabulary | {UNK}
        self._continuations: dict[tuple[str, ...], list[str]] = {}
        for ngram in self.probs:
            if len(ngram) >= 2:
                self._continuations.setdefault(ngram[:-1], []).append(ngram[-1])
        self._top_unigrams = sorted(
            self._events,
            key=lambda w: (-self.probs.get((w,), LOG_ZERO), w),
        )

    # -- queries ----------------------------------------------------------

    @property
    def events(self) -> frozenset[str]:
        return self._events

    def map_context(self, context: Sequence[str]) -> tuple[str, ...]:
        """Clip to model order and replace out-of-vocabulary words with UNK."""
        clipped = tuple(context)[-(self.order - 1) :] if self.order > 1 else ()
        return tuple(w if (w in self.vocabulary or w == BOS) else UNK for w in clipped)

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        """P(word | context); 0.0 for words outside the event space."""
        if word not in self._events:
            return 0.0
        return self._backoff_prob(self.map_context(context) + (word,))

    def _backoff_prob(self, ngram: tuple[str, ...]) -> float:
        stored = self.probs.get(ngram)
        if stored is not None:
            return 10.0 ** stored
        if len(ngram) == 1:
            return 0.0
        weight = self.backoffs.get(ngram[:-1])
        factor = 10.0 ** weight if weight is not None else 1.0
        return factor * self._backoff_prob(ngram[1:])

    def log10_prob(self, word: str, context: Sequence[str] = (), floor: float = -8.0) -> float:
        p = self.prob(word, context)
        if p <= 0.0:
            return floor
        return max(math.log10(p), floor)

    def unk_prob(self, context: Sequence[str] = ()) -> float:
        return self.prob(UNK, context)

    def seen_continuations(self, context: Sequence[str] = ()) -> set[str]:
        """Words observed after any backoff suffix of the context."""
        ctx = self.map_context(context)
        seen: set[str] = set()
        for start in range(len(ctx) + 1):
            seen.update(self._continuations.get(ctx[start:], ()))
        seen.discard(BOS)
        return seen

    def top_unigrams(self, k: int) -> list[str]:
        return [w for w in self._top_unigrams[:k]]

    def perplexity(self, sentences: Iterable[Sequence[str]]) -> float:
        log_sum = 0.0
        n = 0
        history: list[str] = []
        for sentence in sentences:
            history = [BOS] * (self.order - 1)
            for token in sentence:
                word = token if token in self.vocabulary else UNK
                p = self.prob(word, history)
                log_sum += math.log10(p) if p > 0 else LOG_ZERO
                n += 1
                history.append(word)
        if n == 0:
            raise EmptyCorpus("no tokens to evaluate")
        return 10.0 ** (-log_sum / n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NGramModel):
            return NotImplemented
        return (
            self.order == other.order
            and self.probs == other.probs
            and self.backoffs == other.backoffs
            and self.vocabulary == other.vocabulary
            and self.token_count == other.token_count
        )


class UniformModel:
    """Uniform distribution over a fixed vocabulary; spatial-only baseline."""

    def __init__(self, vocabulary: Iterable[str], language_tag: str = "", script: str = ""):
        self.vocabulary = frozenset(vocabulary)
        self.order = 1
        self.token_count = 0
        self.language_tag = language_tag
        self.script = script
        self._events = self.vocabulary | {UNK}
        self._p = 1.0 / len(self._events)

    @property
    def events(self) -> frozenset[str]:
        return self._events

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        return self._p if word in self._events else 0.0

    def log10_prob(self, word: str, context: Sequence[str] = (), floor: float = -8.0) -> float:
        p = self.prob(word, context)
        return max(math.log10(p), floor) if p > 0 else floor

    def unk_prob(self, context: Sequence[str] = ()) -> float:
        return self._p

    def seen_continuations(self, context: Sequence[str] = ()) -> set[str]:
        return set()

    def top_unigrams(self, k: int) -> list[str]:
        return sorted(self._events)[:k]


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

def train_ngram(
    sentences: Iterable[Sequence[str]],
    order: int,
    params: TrainParams | None = None,
    language_tag: str = "",
    script: str = "",
) -> NGramModel:
    """Absolute-discounting backoff model from tokenized sentences."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if order > MAX_ORDER:
        raise OrderTooLarge(order, MAX_ORDER)
    params = params or TrainParams()

    corpus = [list(s) for s in sentences if s]
    if not corpus:
        raise EmptyCorpus("no sentences to train on")
    token_count = sum(len(s) for s in corpus)

    # Vocabulary selection: frequency cutoff for big corpora, then top-V.
    raw_counts: dict[str, int] = {}
    for sentence in corpus:
        for token in sentence:
            raw_counts[token] = raw_counts.get(token, 0) + 1
    min_count = params.min_count
    if token_count > params.large_corpus_tokens:
        min_count = max(min_count, 2)
    eligible = [w for w, c in raw_counts.items() if c >= min_count and w not in (BOS, UNK)]
    eligible.sort(key=lambda w: (-raw_counts[w], w))
    vocabulary = frozenset(eligible[: params.vocab_cap])

    oov_occurrences = sum(c for w, c in raw_counts.items() if w not in vocabulary)
    mapped = [
        [t if t in vocabulary else UNK for t in sentence] for sentence in corpus
    ]

    # k-gram counts; contexts padded with BOS, sentence end is not an event.
    counts: list[dict[tuple[str, ...], int]] = [dict() for _ in range(order + 1)]
    for sentence in mapped:
        for k in range(1, order + 1):
            seq = [BOS] * (k - 1) + sentence
            table = counts[k]
            for i in range(len(seq) - k + 1):
                gram = tuple(seq[i : i + k])
                if gram[-1] == BOS:
                    continue
                table[gram] = table.get(gram, 0) + 1

    probs: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}

    # Unigrams: maximum likelihood with a guaranteed unknown-mass floor.
    uni = dict(counts[1])
    uni[(UNK,)] = max(1, uni.get((UNK,), 0))
    total = sum(uni.values())
    for gram in sorted(uni):
        probs[gram] = math.log10(uni[gram] / total)
    probs[(BOS,)] = LOG_ZERO

    def lower_prob(ngram: tuple[str, ...]) -> float:
        stored = probs.get(ngram)
        if stored is not None:
            return 10.0 ** stored if stored > LOG_ZERO else 0.0
        if len(ngram) == 1:
            return 0.0
        weight = backoffs.get(ngram[:-1])
        factor = 10.0 ** weight if weight is not None else 1.0
        return factor * lower_prob(ngram[1:])

    D = params.discount
    for k in range(2, order + 1):
        by_context: dict[tuple[str, ...], list[tuple[str, int]]] = {}
        for gram, c in counts[k].items():
            by_context.setdefault(gram[:-1], []).append((gram[-1], c))
        for ctx in sorted(by_context):
            continuations = sorted(by_context[ctx])
            ctx_total = sum(c for _, c in continuations)
            reserved = D * len(continuations) / ctx_total
            seen_lower = sum(lower_prob(ctx[1:] + (w,)) for w, _ in continuations)
            denom = 1.0 - seen_lower
            if denom > 1e-12:
                backoffs[ctx] = math.log10(reserved / denom)
                scale = 1.0
            else:
                # Every event already seen here: fold the reserve back in.
                backoffs[ctx] = LOG_ZERO
                scale = 1.0 / (1.0 - reserved)
            for w, c in continuations:
                probs[ctx + (w,)] = math.log10(scale * (c - D) / ctx_total)
            # Contexts made only of begin markers have no own probability;
            # give them the placeholder so the file format round-trips.
            probs.setdefault(ctx, LOG_ZERO)

    return NGramModel(
        order=order,
        probs=probs,
        backoffs=backoffs,
        vocabulary=vocabulary,
        token_count=token_count,
        language_tag=language_tag,
        script=script,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def serialize_model(model: NGramModel) -> str:
    lines = [
        "polyboard-ngram",
        f"language_tag: {model.language_tag}",
        f"script: {model.script}",
        f"token_count: {model.token_count}",
        "",
        "\\data\\",
    ]
    by_order: list[list[tuple[str, ...]]] = [[] for _ in range(model.order + 1)]
    for gram in model.probs:
        by_order[len(gram)].append(gram)
    for k in range(1, model.order + 1):
        lines.append(f"ngram {k}={len(by_order[k])}")
    lines.append("")
    for k in range(1, model.order + 1):
        lines.append(f"\\{k}-grams:")
        for gram in sorted(by_order[k]):
            entry = f"{model.probs[gram]!r}\t{' '.join(gram)}"
            bow = model.backoffs.get(gram)
            if bow is not None:
                entry += f"\t{bow!r}"
            lines.append(entry)
        lines.append("")
    lines.append("\\end\\")
    return "\n".join(lines) + "\n"


def load_model(data: str | bytes) -> NGramModel:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.splitlines()
    meta = {"language_tag": "", "script": "", "token_count": "0"}
    counts: dict[int, int] = {}
    probs: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}

    i = 0
    n_lines = len(lines)
    while i < n_lines and lines[i].strip() != "\\data\\":
        line = lines[i].strip()
        for key in meta:
            if line.startswith(key + ":"):
                meta[key] = line.split(":", 1)[1].strip()
        i += 1
    if i == n_lines:
        raise FormatError("missing \\data\\ section", n_lines)
    i += 1
    while i < n_lines and lines[i].strip():
        line = lines[i].strip()
        if not line.startswith("ngram "):
            raise FormatError(f"expected 'ngram k=N', got {line!r}", i + 1)
        try:
            k, n = line[len("ngram ") :].split("=")
            counts[int(k)] = int(n)
        except ValueError as exc:
            raise FormatError(f"bad ngram count line {line!r}", i + 1) from exc
        i += 1
    if not counts:
        raise FormatError("no ngram counts declared", i + 1)
    order = max(counts)

    seen_end = False
    current_k = None
    while i < n_lines:
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line == "\\end\\":
            seen_end = True
            i += 1
            continue
        if line.startswith("\\") and line.endswith("-grams:"):
            try:
                current_k = int(line[1:].split("-")[0])
            except ValueError as exc:
                raise FormatError(f"bad section header {line!r}", i + 1) from exc
            if current_k not in counts:
                raise FormatError(f"section {line!r} not declared in \\data\\", i + 1)
            i += 1
            continue
        if current_k is None:
            raise FormatError(f"entry outside any n-gram section: {line!r}", i + 1)
        fields = line.split("\t")
        if len(fields) == 1:
            fields = line.split()
            fields = [fields[0], " ".join(fields[1 : 1 + current_k])] + fields[1 + current_k :]
        if len(fields) not in (2, 3):
            raise FormatError(f"expected 2 or 3 fields, got {len(fields)}", i + 1)
        try:
            logp = float(fields[0])
        except ValueError as exc:
            raise FormatError(f"bad log probability {fields[0]!r}", i + 1) from exc
        if logp > 0.0:
            raise FormatError(f"log10 probability {logp} > 0", i + 1)
        gram = tuple(fields[1].split(" "))
        if len(gram) != current_k:
            raise FormatError(
                f"{len(gram)}-gram {fields[1]!r} in \\{current_k}-grams: section", i + 1
            )
        probs[gram] = logp
        if len(fields) == 3:
            try:
                backoffs[gram] = float(fields[2])
            except ValueError as exc:
                raise FormatError(f"bad backoff weight {fields[2]!r}", i + 1) from exc
        i += 1
    if not seen_end:
        raise FormatError("truncated file: missing \\end\\", n_lines)
    for k, declared in counts.items():
        actual = sum(1 for g in probs if len(g) == k)
        if actual != declared:
            raise FormatError(
                f"\\data\\ declared {declared} {k}-grams but file has {actual}", n_lines
            )

    vocabulary = frozenset(
        g[0] for g in probs if len(g) == 1 and g[0] not in (BOS, UNK)
    )
    try:
        token_count = int(meta["token_count"])
    except ValueError:
        token_count = 0
    return NGramModel(
        order=order,
        probs=probs,
        backoffs=backoffs,
        vocabulary=vocabulary,
        token_count=token_count,
        language_tag=meta["language_tag"],
        script=meta["script"],
    )


def save_model(model: NGramModel, path: str | Path) -> None:
    Path(path).write_text(serialize_model(model), encoding="utf-8")


def load_model_file(path: str | Path) -> NGramModel:
    return load_model(Path(path).read_bytes())
