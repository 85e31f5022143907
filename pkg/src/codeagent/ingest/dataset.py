"""The labeled commit/PR dataset: JSON Lines storage and summaries.

One record per line.  Large original-file payloads may be externalized
into a sibling content-addressed blob directory; references are
resolved transparently on load.  The crawler never assigns task labels,
it only collects; labels arrive from a separate annotation step.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Mapping

from ..core import SourceFile, TaskKind
from .detect import NINE_LANGUAGES

CRAWL_CUTOVER_DATE = "2023-04-01"

EXTERNALIZE_THRESHOLD_BYTES = 1 << 20  # externalize original_files beyond 1 MB

_CA_FA_LABELS = ("positive", "negative")


class DatasetError(ValueError):
    """Raised for unreadable dataset files; carries the 1-based line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DatasetRecord:
    """One labeled sample: a commit/PR with optional per-task labels."""

    sha: str
    repo: str
    language: str
    pr_status: str
    commit_message: str
    diff: str
    original_files: tuple[SourceFile, ...] = ()
    task_labels: Mapping[TaskKind, Any] = field(default_factory=dict)
    created_at: str = ""

    def label(self, task: TaskKind) -> Any:
        return self.task_labels.get(task)


def record_violations(record: DatasetRecord) -> list[str]:
    """All invariant violations of one record; empty means valid."""
    problems: list[str] = []
    if not record.sha:
        problems.append("sha is empty")
    if record.language not in NINE_LANGUAGES:
        problems.append(f"language {record.language!r} not one of {NINE_LANGUAGES}")
    if record.pr_status not in ("merged", "closed"):
        problems.append(f"pr_status {record.pr_status!r} must be merged or closed")
    for task, label in record.task_labels.items():
        if task in (TaskKind.CA, TaskKind.FA):
            if label is not None and label not in _CA_FA_LABELS:
                problems.append(f"{task.value} label {label!r} must be positive or negative")
        elif task is TaskKind.VA:
            if label is not None and not isinstance(label, bool):
                problems.append(f"VA label must be a confirmed flag, got {label!r}")
        elif task is TaskKind.CR:
            if label is not None and not isinstance(label, str):
                problems.append(f"CR label must be the target revision text, got {type(label)}")
    if record.created_at:
        try:
            parse_timestamp(record.created_at)
        except ValueError:
            problems.append(f"created_at {record.created_at!r} is not an ISO timestamp")
    return problems


def parse_timestamp(value: str) -> datetime:
    text = value.replace("Z", "+00:00")
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def record_to_dict(record: DatasetRecord) -> dict[str, Any]:
    return {
        "sha": record.sha,
        "repo": record.repo,
        "language": record.language,
        "pr_status": record.pr_status,
        "task_labels": {task.value: label for task, label in record.task_labels.items()},
        "commit_message": record.commit_message,
        "diff": record.diff,
        "original_files": [
            {"path": f.path, "content": f.content} for f in record.original_files
        ],
        "created_at": record.created_at,
    }


def record_from_dict(data: Mapping[str, Any], blob_dir: Path | None = None) -> DatasetRecord:
    files = []
    for entry in data.get("original_files", ()):
        if "content_ref" in entry:
            if blob_dir is None:
                raise ValueError(f"content_ref present but no blob directory: {entry}")
            blob = blob_dir / f"{entry['content_ref']}.txt"
            files.append(SourceFile(path=entry["path"], content=blob.read_text("utf-8")))
        else:
            files.append(SourceFile(path=entry["path"], content=entry["content"]))
    return DatasetRecord(
        sha=data["sha"],
        repo=data.get("repo", ""),
        language=data["language"],
        pr_status=data["pr_status"],
        task_labels={
            TaskKind.parse(k): v for k, v in data.get("task_labels", {}).items()
        },
        commit_message=data.get("commit_message", ""),
        diff=data.get("diff", ""),
        original_files=tuple(files),
        created_at=data.get("created_at", ""),
    )


def _blob_dir_for(path: Path) -> Path:
    return path.parent / f"{path.stem}.blobs"


def write_dataset(
    records: Iterable[DatasetRecord],
    path: str | Path,
    externalize_over: int = EXTERNALIZE_THRESHOLD_BYTES,
    append: bool = False,
) -> int:
    """Write records as JSON Lines; returns the number written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blob_dir = _blob_dir_for(path)
    written = 0
    mode = "a" if append else "w"
    with path.open(mode, encoding="utf-8") as handle:
        for record in records:
            data = record_to_dict(record)
            payload = sum(len(f["content"].encode("utf-8")) for f in data["original_files"])
            if data["original_files"] and payload > externalize_over:
                blob_dir.mkdir(parents=True, exist_ok=True)
                externalized = []
                for entry in data["original_files"]:
                    digest = hashlib.sha256(entry["content"].encode("utf-8")).hexdigest()
                    (blob_dir / f"{digest}.txt").write_text(entry["content"], encoding="utf-8")
                    externalized.append({"path": entry["path"], "content_ref": digest})
                data["original_files"] = externalized
            handle.write(json.dumps(data, ensure_ascii=False) + "\n")
            written += 1
    return written


@dataclass
class DatasetLoadResult:
    records: list[DatasetRecord]
    rejected: list[tuple[int, str]]  # (line number, reason)

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def load_dataset(path: str | Path) -> DatasetLoadResult:
    """Load a JSON Lines dataset.

    A syntactically bad line raises DatasetError with its line number;
    records violating the schema invariants are collected into
    ``rejected`` instead of being silently dropped.
    """
    path = Path(path)
    blob_dir = _blob_dir_for(path)
    records: list[DatasetRecord] = []
    rejected: list[tuple[int, str]] = []
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"not valid JSON: {exc.msg}", lineno) from exc
            try:
                record = record_from_dict(data, blob_dir=blob_dir)
            except (KeyError, TypeError, ValueError) as exc:
                raise DatasetError(f"bad record shape: {exc}", lineno) from exc
            problems = record_violations(record)
            if problems:
                rejected.append((lineno, "; ".join(problems)))
                continue
            records.append(record)
    return DatasetLoadResult(records=records, rejected=rejected)


@dataclass
class DatasetSummary:
    """Exact counts keyed by (task, pr_status, label, language)."""

    counts: Counter

    def count(
        self,
        task: TaskKind,
        status: str | None = None,
        label: str | None = None,
        language: str | None = None,
    ) -> int:
        return sum(
            n
            for (t, s, lb, lang), n in self.counts.items()
            if t == task.value
            and (status is None or s == status)
            and (label is None or lb == label)
            and (language is None or lang == language)
        )

    def to_json_dict(self) -> dict[str, Any]:
        nested: dict[str, Any] = {}
        for (task, status, label, language), n in sorted(self.counts.items()):
            nested.setdefault(task, {}).setdefault(status, {}).setdefault(label, {})[
                language
            ] = n
        for task, statuses in nested.items():
            for status, labels in statuses.items():
                for label, languages in labels.items():
                    languages["total"] = sum(languages.values())
        return nested


def _label_key(task: TaskKind, label: Any) -> str | None:
    if label is None:
        return None
    if task in (TaskKind.CA, TaskKind.FA):
        return str(label)
    if task is TaskKind.VA:
        return "confirmed" if label else "unconfirmed"
    return "target"


def summarize(records: Iterable[DatasetRecord]) -> DatasetSummary:
    """Count labeled records per (task, status, label, language)."""
    counts: Counter = Counter()
    for record in records:
        for task, label in record.task_labels.items():
            key = _label_key(task, label)
            if key is None:
                continue
            counts[(task.value, record.pr_status, key, record.language)] += 1
    return DatasetSummary(counts=counts)
