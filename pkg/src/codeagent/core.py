"""Core domain types shared by every subsystem.

Everything here is an immutable value object with a canonical JSON
encoding (one object per value, snake_case field names), so instances
can be freely shared between concurrent review sessions and written to
disk without a persistence layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping


class TaskKind(str, Enum):
    """The four review sub-tasks."""

    CA = "CA"  # commit message <-> code change consistency
    VA = "VA"  # vulnerability introduction
    FA = "FA"  # formatting consistency with the original files
    CR = "CR"  # code revision suggestion

    @classmethod
    def parse(cls, value: str) -> "TaskKind":
        try:
            return cls(value.strip().upper())
        except ValueError:
            raise ValueError(f"unknown task kind {value!r}") from None


DEFAULT_TASKS: tuple[TaskKind, ...] = (
    TaskKind.CA,
    TaskKind.VA,
    TaskKind.FA,
    TaskKind.CR,
)

PR_STATUSES = ("merged", "closed", "unknown")

MODALITIES = ("code", "document", "mixed")

# Outcome vocabulary is a function of the task; "inconclusive" marks a
# verdict whose machine-readable line could not be extracted.
VERDICT_OUTCOMES: dict[TaskKind, frozenset[str]] = {
    TaskKind.CA: frozenset({"consistent", "inconsistent", "inconclusive"}),
    TaskKind.FA: frozenset({"consistent", "inconsistent", "inconclusive"}),
    TaskKind.VA: frozenset({"vulnerable", "not_vulnerable", "inconclusive"}),
    TaskKind.CR: frozenset({"revised", "no_revision", "inconclusive"}),
}

# Outcomes that mean "the change has a problem" and trigger the
# alignment phase.
NEGATIVE_OUTCOMES = frozenset({"inconsistent", "vulnerable"})


@dataclass(frozen=True)
class SourceFile:
    """One file snapshot accompanying a review request."""

    path: str
    content: str


@dataclass(frozen=True)
class ReviewRequest:
    """One code change under review."""

    id: str
    commit_message: str
    diff: str
    original_files: tuple[SourceFile, ...] = ()
    language_hint: str | None = None
    pr_status: str = "unknown"

    def __post_init__(self) -> None:
        if self.pr_status not in PR_STATUSES:
            raise ValueError(f"pr_status must be one of {PR_STATUSES}, got {self.pr_status!r}")

    def file_map(self) -> dict[str, str]:
        return {f.path: f.content for f in self.original_files}


@dataclass(frozen=True)
class Verdict:
    """The outcome of one review sub-task."""

    task: TaskKind
    outcome: str
    rationale: str
    revised_code: str | None = None

    def __post_init__(self) -> None:
        allowed = VERDICT_OUTCOMES[self.task]
        if self.outcome not in allowed:
            raise ValueError(
                f"outcome {self.outcome!r} not valid for {self.task.value} "
                f"(allowed: {sorted(allowed)})"
            )
        if not self.rationale.strip():
            raise ValueError("rationale must be non-empty")
        if self.revised_code is not None and self.task is not TaskKind.CR:
            raise ValueError(f"{self.task.value} verdicts carry no revised_code")


@dataclass(frozen=True)
class ReviewReport:
    """Aggregated output of a full review run."""

    request_id: str
    modality: str
    language: str
    verdicts: tuple[Verdict, ...]
    summary: str
    transcript: tuple[str, ...] = ()
    rounds_used: Mapping[int, int] = field(default_factory=dict)
    revised_diff: str | None = None

    def __post_init__(self) -> None:
        if self.modality not in MODALITIES:
            raise ValueError(f"modality must be one of {MODALITIES}, got {self.modality!r}")
        tasks = [v.task for v in self.verdicts]
        if len(tasks) != len(set(tasks)):
            raise ValueError("duplicate verdict for a task")
        for phase, rounds in self.rounds_used.items():
            if rounds < 0:
                raise ValueError(f"rounds_used[{phase}] is negative")

    def verdict_for(self, task: TaskKind) -> Verdict | None:
        for v in self.verdicts:
            if v.task is task:
                return v
        return None

    @property
    def inconclusive(self) -> bool:
        return any(v.outcome == "inconclusive" for v in self.verdicts)


def validate_request(req: ReviewRequest) -> list[str]:
    """Check a request against its invariants.

    Returns a list of human-readable violations; an empty list means the
    request is valid.  Never mutates or raises for bad data.
    """
    from .ingest.diffs import DEV_NULL, DiffParseError, parse_unified_diff

    violations: list[str] = []
    if not req.diff.strip():
        violations.append("diff is empty")
        return violations
    try:
        deltas = parse_unified_diff(req.diff)
    except DiffParseError as exc:
        violations.append(f"diff does not parse: {exc}")
        return violations
    if not deltas:
        violations.append("diff contains no file delta")

    known = {f.path for f in req.original_files}
    for delta in deltas:
        if delta.change_kind == "added":
            continue
        referenced = [p for p in (delta.old_path, delta.new_path) if p != DEV_NULL]
        if referenced and not any(p in known for p in referenced):
            violations.append(f"unknown path {referenced[0]}")
    return violations


# ---------------------------------------------------------------------------
# Canonical JSON encoding
# ---------------------------------------------------------------------------


def request_to_dict(req: ReviewRequest) -> dict[str, Any]:
    return {
        "id": req.id,
        "commit_message": req.commit_message,
        "diff": req.diff,
        "original_files": [{"path": f.path, "content": f.content} for f in req.original_files],
        "language_hint": req.language_hint,
        "pr_status": req.pr_status,
    }


def request_from_dict(data: Mapping[str, Any]) -> ReviewRequest:
    return ReviewRequest(
        id=data["id"],
        commit_message=data["commit_message"],
        diff=data["diff"],
        original_files=tuple(
            SourceFile(path=f["path"], content=f["content"]) for f in data["original_files"]
        ),
        language_hint=data.get("language_hint"),
        pr_status=data.get("pr_status", "unknown"),
    )


def verdict_to_dict(verdict: Verdict) -> dict[str, Any]:
    return {
        "task": verdict.task.value,
        "outcome": verdict.outcome,
        "rationale": verdict.rationale,
        "revised_code": verdict.revised_code,
    }


def verdict_from_dict(data: Mapping[str, Any]) -> Verdict:
    return Verdict(
        task=TaskKind.parse(data["task"]),
        outcome=data["outcome"],
        rationale=data["rationale"],
        revised_code=data.get("revised_code"),
    )


def report_to_dict(report: ReviewReport) -> dict[str, Any]:
    return {
        "request_id": report.request_id,
        "modality": report.modality,
        "language": report.language,
        "verdicts": [verdict_to_dict(v) for v in report.verdicts],
        "revised_diff": report.revised_diff,
        "summary": report.summary,
        "transcript": list(report.transcript),
        "rounds_used": {str(k): v for k, v in report.rounds_used.items()},
    }


def report_from_dict(data: Mapping[str, Any]) -> ReviewReport:
    return ReviewReport(
        request_id=data["request_id"],
        modality=data["modality"],
        language=data["language"],
        verdicts=tuple(verdict_from_dict(v) for v in data["verdicts"]),
        revised_diff=data.get("revised_diff"),
        summary=data["summary"],
        transcript=tuple(data.get("transcript", ())),
        rounds_used={int(k): v for k, v in data.get("rounds_used", {}).items()},
    )
