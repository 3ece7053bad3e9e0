"""Language roadmap registry: prioritization scoring and status dashboards.

Records and per-subtask statuses live as one YAML file per language in a
data directory, so the dashboard is always regenerated from source control
rather than hand-maintained. The scoring weights are declared constants:
editable policy, guarded by monotonicity tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import InvalidFactorRange, OrphanStatus, SchemaError

SUBTASKS = (
    "inventory_defined",
    "layout_designed",
    "corpus_ready",
    "model_trained",
    "tested",
    "released",
)
STATES = ("todo", "in_progress", "done")
CONFIDENCES = ("low", "medium", "high")

# Scoring policy, in one place. Positive factors add, a usable alternative
# subtracts, and missing i18n building blocks cap the bucket at 3.
WEIGHT_ONLINE_EVIDENCE = 3.0
WEIGHT_FORMAL_PUBLICATIONS = 2.0
WEIGHT_SMARTPHONE_TREND = 2.0
WEIGHT_SPEAKERS = 2.0
SPEAKERS_SCALE = 1e5
WEIGHT_PER_FEATURE_REQUEST = 0.3
FEATURE_REQUEST_CAP = 10
WEIGHT_OFFICIAL_STATUS = 2.0
WEIGHT_USABLE_ALTERNATIVE = -1.0
BUCKET_THRESHOLDS = (8.0, 5.0, 2.0)  # bucket 1, 2, 3 cut-offs
I18N_BUCKET_CAP = 3

FACTOR_RANGES = {
    "online_evidence": (0, 3),
    "formal_publications": (0, 2),
    "smartphone_trend": (0, 2),
}


@dataclass(frozen=True)
class Factors:
    online_evidence: int = 0
    formal_publications: int = 0
    smartphone_trend: int = 0
    i18n_ready: bool = True
    feature_requests: int = 0
    usable_alternative_exists: bool = False
    official_status: bool = False

    def __post_init__(self):
        for name, (lo, hi) in FACTOR_RANGES.items():
            value = getattr(self, name)
            if not isinstance(value, int) or not lo <= value <= hi:
                raise InvalidFactorRange(name, value, lo, hi)
        if self.feature_requests < 0:
            raise InvalidFactorRange("feature_requests", self.feature_requests, 0, "inf")


@dataclass(frozen=True)
class LanguageRecord:
    language_tag: str
    autonym: str = ""
    exonym: str = ""
    scripts: tuple[tuple[str, str], ...] = ()
    speaker_estimate: int = 0
    speaker_confidence: str = "low"
    factors: Factors = field(default_factory=Factors)

    def __post_init__(self):
        if self.speaker_estimate < 0:
            raise SchemaError(f"{self.language_tag}: speaker_estimate must be >= 0")
        if self.speaker_confidence not in CONFIDENCES:
            raise SchemaError(f"{self.language_tag}: bad confidence {self.speaker_confidence!r}")


@dataclass(frozen=True)
class SubtaskStatus:
    state: str = "todo"
    owner: str = ""
    issue_id: str = ""
    doc_link: str = ""

    def __post_init__(self):
        if self.state not in STATES:
            raise SchemaError(f"bad subtask state {self.state!r}")


@dataclass(frozen=True)
class StatusRecord:
    language_tag: str
    subtasks: dict  # subtask name -> SubtaskStatus

    def __post_init__(self):
        for name in self.subtasks:
            if name not in SUBTASKS:
                raise SchemaError(f"{self.language_tag}: unknown subtask {name!r}")
        released = self.subtasks.get("released")
        if released is not None and released.state == "done":
            for name in SUBTASKS[:-1]:
                st = self.subtasks.get(name)
                if st is None or st.state != "done":
                    raise SchemaError(
                        f"{self.language_tag}: released requires {name} done"
                    )

    def status_of(self, subtask: str) -> SubtaskStatus:
        return self.subtasks.get(subtask, SubtaskStatus())


def priority_score(record: LanguageRecord) -> tuple[float, int]:
    """(score, bucket) per the declared weights; bucket 1 is top priority."""
    f = record.factors
    score = (
        WEIGHT_ONLINE_EVIDENCE * f.online_evidence
        + WEIGHT_FORMAL_PUBLICATIONS * f.formal_publications
        + WEIGHT_SMARTPHONE_TREND * f.smartphone_trend
        + WEIGHT_SPEAKERS * math.log10(1.0 + record.speaker_estimate / SPEAKERS_SCALE)
        + WEIGHT_PER_FEATURE_REQUEST * min(f.feature_requests, FEATURE_REQUEST_CAP)
        + WEIGHT_OFFICIAL_STATUS * (1 if f.official_status else 0)
        + WEIGHT_USABLE_ALTERNATIVE * (1 if f.usable_alternative_exists else 0)
    )
    if score >= BUCKET_THRESHOLDS[0]:
        bucket = 1
    elif score >= BUCKET_THRESHOLDS[1]:
        bucket = 2
    elif score >= BUCKET_THRESHOLDS[2]:
        bucket = 3
    else:
        bucket = 4
    if not f.i18n_ready:
        bucket = max(bucket, I18N_BUCKET_CAP)
    return score, bucket


# ---------------------------------------------------------------------------
# Dashboard
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NextUpRow:
    language_tag: str
    bucket: int
    score: float
    state: str
    owner: str
    issue_id: str
    doc_link: str


@dataclass(frozen=True)
class SubtaskBoard:
    subtask: str
    done: int
    in_progress: int
    todo: int
    next_up: tuple[NextUpRow, ...]


@dataclass(frozen=True)
class DashboardReport:
    boards: tuple[SubtaskBoard, ...]

    def board(self, subtask: str) -> SubtaskBoard:
        return next(b for b in self.boards if b.subtask == subtask)

    def to_text(self) -> str:
        lines = []
        for b in self.boards:
            lines.append(f"{b.subtask}: done={b.done} in_progress={b.in_progress} todo={b.todo}")
            for row in b.next_up[:10]:
                owner = f" owner={row.owner}" if row.owner else ""
                issue = f" issue={row.issue_id}" if row.issue_id else ""
                doc = f" doc={row.doc_link}" if row.doc_link else ""
                lines.append(
                    f"  next: {row.language_tag} bucket={row.bucket} "
                    f"score={row.score:.2f} [{row.state}]{owner}{issue}{doc}"
                )
        return "\n".join(lines)

    def to_tsv(self) -> str:
        lines = ["subtask\tlanguage_tag\tbucket\tscore\tstate\towner\tissue_id\tdoc_link"]
        for b in self.boards:
            for row in b.next_up:
                lines.append(
                    f"{b.subtask}\t{row.language_tag}\t{row.bucket}\t{row.score:.4f}"
                    f"\t{row.state}\t{row.owner}\t{row.issue_id}\t{row.doc_link}"
                )
        return "\n".join(lines) + "\n"

    def save_figures(self, out_dir: str | Path) -> list[Path]:
        """Render status/priority charts as PNGs next to the delimited output."""
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []

        names = [b.subtask for b in self.boards]
        done = [b.done for b in self.boards]
        in_progress = [b.in_progress for b in self.boards]
        todo = [b.todo for b in self.boards]
        fig, ax = plt.subplots(figsize=(9, 4.5))
        xs = range(len(names))
        ax.bar(xs, done, label="done", color="#2a9d8f")
        ax.bar(xs, in_progress, bottom=done, label="in progress", color="#e9c46a")
        bottoms = [d + p for d, p in zip(done, in_progress)]
        ax.bar(xs, todo, bottom=bottoms, label="todo", color="#e76f51")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(names, rotation=30, ha="right")
        ax.set_ylabel("languages")
        ax.set_title("rollout status by subtask")
        ax.legend()
        fig.tight_layout()
        path = out_dir / "status_by_subtask.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

        buckets: dict[int, int] = {1: 0, 2: 0, 3: 0, 4: 0}
        seen = set()
        for b in self.boards:
            for row in b.next_up:
                if row.language_tag not in seen:
                    seen.add(row.language_tag)
                    buckets[row.bucket] += 1
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.bar([str(k) for k in sorted(buckets)], [buckets[k] for k in sorted(buckets)],
               color="#264653")
        ax.set_xlabel("priority bucket")
        ax.set_ylabel("languages pending work")
        ax.set_title("pending languages by bucket")
        fig.tight_layout()
        path = out_dir / "pending_by_bucket.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
        return written


def dashboard_report(
    records: dict[str, LanguageRecord],
    statuses: dict[str, StatusRecord],
) -> DashboardReport:
    """Per-subtask counts and next-up queues, fully derived from the inputs."""
    for tag in statuses:
        if tag not in records:
            raise OrphanStatus(tag)
    ranked = {tag: priority_score(record) for tag, record in records.items()}

    boards = []
    for subtask in SUBTASKS:
        done = in_progress = todo = 0
        pending: list[NextUpRow] = []
        for tag in sorted(records):
            status = statuses.get(tag, StatusRecord(language_tag=tag, subtasks={}))
            st = status.status_of(subtask)
            if st.state == "done":
                done += 1
                continue
            if st.state == "in_progress":
                in_progress += 1
            else:
                todo += 1
            score, bucket = ranked[tag]
            pending.append(
                NextUpRow(
                    language_tag=tag,
                    bucket=bucket,
                    score=score,
                    state=st.state,
                    owner=st.owner,
                    issue_id=st.issue_id,
                    doc_link=st.doc_link,
                )
            )
        pending.sort(key=lambda r: (r.bucket, -r.score, r.language_tag))
        boards.append(
            SubtaskBoard(
                subtask=subtask,
                done=done,
                in_progress=in_progress,
                todo=todo,
                next_up=tuple(pending),
            )
        )
    return DashboardReport(boards=tuple(boards))


# ---------------------------------------------------------------------------
# Storage
# ---------------------------------------------------------------------------

def _parse_factors(doc: dict) -> Factors:
    return Factors(
        online_evidence=int(doc.get("online_evidence", 0)),
        formal_publications=int(doc.get("formal_publications", 0)),
        smartphone_trend=int(doc.get("smartphone_trend", 0)),
        i18n_ready=bool(doc.get("i18n_ready", True)),
        feature_requests=int(doc.get("feature_requests", 0)),
        usable_alternative_exists=bool(doc.get("usable_alternative_exists", False)),
        official_status=bool(doc.get("official_status", False)),
    )


def parse_registry_entry(data: bytes | str) -> tuple[LanguageRecord, StatusRecord]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    doc = yaml.safe_load(data)
    if not isinstance(doc, dict) or "record" not in doc:
        raise SchemaError("registry entry needs a 'record' section")
    rec = doc["record"]
    try:
        tag = str(rec["language_tag"])
        record = LanguageRecord(
            language_tag=tag,
            autonym=str(rec.get("autonym", "")),
            exonym=str(rec.get("exonym", "")),
            scripts=tuple(
                (str(s["code"]), str(s["usage"])) for s in rec.get("scripts", ())
            ),
            speaker_estimate=int(rec.get("speaker_estimate", 0)),
            speaker_confidence=str(rec.get("speaker_confidence", "low")),
            factors=_parse_factors(rec.get("factors") or {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad registry record: {exc}") from exc
    subtasks = {}
    for name, st in (doc.get("status") or {}).items():
        st = st or {}
        subtasks[str(name)] = SubtaskStatus(
            state=str(st.get("state", "todo")),
            owner=str(st.get("owner", "")),
            issue_id=str(st.get("issue_id", "")),
            doc_link=str(st.get("doc_link", "")),
        )
    return record, StatusRecord(language_tag=tag, subtasks=subtasks)


def load_registry(directory: str | Path) -> tuple[dict[str, LanguageRecord], dict[str, StatusRecord]]:
    records: dict[str, LanguageRecord] = {}
    statuses: dict[str, StatusRecord] = {}
    for path in sorted(Path(directory).glob("*.yaml")):
        record, status = parse_registry_entry(path.read_bytes())
        records[record.language_tag] = record
        statuses[record.language_tag] = status
    return records, statuses
