"""Full review runs: the four phases, the event log, and the report.

A session is strictly sequential.  Phase 3 (alignment) runs only when a
review verdict was negative or a revision was requested; otherwise it
is skipped with zero rounds.  Every turn is appended to the JSON-lines
run log before the next backend call, so an aborted run remains
inspectable.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path
from typing import Mapping, Sequence

from ..agents.backends import Backend, BackendError
from ..agents.roles import RoleCard, default_role_cards
from ..core import (
    DEFAULT_TASKS,
    NEGATIVE_OUTCOMES,
    ReviewReport,
    ReviewRequest,
    TaskKind,
    Verdict,
    validate_request,
)
from ..ingest.detect import detect_language, detect_modality
from ..ingest.diffs import DiffParseError, parse_unified_diff
from ..qachecker.scoring import QAConfig, default_config
from .conversation import Conversation, conversation_to_dict, run_conversation
from .plan import PhasePlan, default_plan
from .verdicts import conversation_revised_code, extract_verdicts


class InvalidRequestError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid review request: " + "; ".join(violations))
        self.violations = violations


class AbortedRunError(RuntimeError):
    """A backend failure ended the run; completed conversations survive."""

    def __init__(self, phase: int, conversations: list[Conversation], cause: Exception):
        super().__init__(f"run aborted in phase {phase}: {cause}")
        self.phase = phase
        self.conversations = conversations
        self.cause = cause


class RunLog:
    """Durable JSON-lines event log; every event is flushed on write."""

    def __init__(self, path: str | Path | None):
        self._path = Path(path) if path else None
        self._sequence = 0
        if self._path:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._path.write_text("", encoding="utf-8")

    def append(self, event: dict) -> None:
        self._sequence += 1
        if self._path is None:
            return
        record = {"seq": self._sequence, "ts": time.time(), **event}
        with self._path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            handle.flush()


def transcript_digest(conversations: Sequence[Conversation]) -> str:
    """Stable digest of a run's full transcript."""
    canonical = json.dumps(
        [conversation_to_dict(c) for c in conversations],
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ReviewSession:
    """One sequential review run over a single request."""

    def __init__(
        self,
        request: ReviewRequest,
        backend: Backend,
        tasks: Sequence[TaskKind] = DEFAULT_TASKS,
        plan: PhasePlan | None = None,
        qa_config: QAConfig | None = None,
        role_cards: Mapping[str, RoleCard] | None = None,
        run_log_path: str | Path | None = None,
    ):
        violations = validate_request(request)
        if violations:
            raise InvalidRequestError(violations)
        self.request = request
        self.backend = backend
        self.tasks = [t for t in DEFAULT_TASKS if t in set(tasks)]
        if not self.tasks:
            raise ValueError("at least one task must be requested")
        self.plan = plan or default_plan(self.tasks)
        self.qa_config = qa_config or default_config()
        self.role_cards = dict(role_cards or default_role_cards())
        self.log = RunLog(run_log_path)
        self.conversations: list[Conversation] = []
        self.report: ReviewReport | None = None

    # -- phase helpers -----------------------------------------------------

    def _run_phase(
        self,
        phase_id: int,
        extra_context: Mapping[str, str] | None,
        only_tasks: Sequence[TaskKind] | None = None,
    ) -> list[Conversation]:
        spec = self.plan.phase(phase_id)
        self.log.append({"type": "phase_started", "phase": phase_id, "name": spec.name})
        finished: list[Conversation] = []
        for index, conv_spec in enumerate(spec.conversations, start=1):
            if only_tasks is not None and conv_spec.goal not in only_tasks:
                continue
            goal = conv_spec.goal.value if isinstance(conv_spec.goal, TaskKind) else conv_spec.goal
            conversation_id = f"p{phase_id}-c{index}-{goal}"
            try:
                conversation = run_conversation(
                    conv_spec,
                    conversation_id,
                    self.request,
                    self.backend,
                    phase_id=phase_id,
                    role_cards=self.role_cards,
                    qa_config=self.qa_config,
                    max_rounds=self.plan.max_rounds,
                    extra_context=extra_context,
                    event_sink=self.log.append,
                )
            except BackendError as exc:
                self.log.append({"type": "run_aborted", "phase": phase_id, "error": str(exc)})
                raise AbortedRunError(phase_id, list(self.conversations), exc) from exc
            finished.append(conversation)
            self.conversations.append(conversation)
            self.log.append(
                {
                    "type": "conversation_finished",
                    "conversation": conversation.id,
                    "phase": phase_id,
                    "turns": len(conversation.turns),
                    "terminal_reason": conversation.terminal_reason,
                }
            )
        self.log.append({"type": "phase_finished", "phase": phase_id})
        return finished

    # -- the run -----------------------------------------------------------

    def run(self) -> ReviewReport:
        request = self.request
        self.log.append(
            {
                "type": "run_started",
                "request_id": request.id,
                "tasks": [t.value for t in self.tasks],
                "max_rounds": self.plan.max_rounds,
            }
        )
        modality = detect_modality(request)
        language = detect_language(request)
        rounds_used: dict[int, int] = {}

        phase1 = self._run_phase(
            1, {"detected_modality": modality, "detected_language": language}
        )
        rounds_used[1] = _max_rounds_used(phase1)

        phase2 = self._run_phase(2, None, only_tasks=self.tasks)
        rounds_used[2] = _max_rounds_used(phase2)
        review_conversations = {
            task: conversation
            for task, conversation in zip(self.tasks, phase2)
        }
        preliminary = extract_verdicts(review_conversations, self.tasks)

        alignment: Conversation | None = None
        if _needs_alignment(preliminary, self.tasks):
            findings = _findings_summary(preliminary)
            phase3 = self._run_phase(3, {"review_findings": findings})
            alignment = phase3[0] if phase3 else None
            rounds_used[3] = _max_rounds_used(phase3)
        else:
            self.log.append({"type": "phase_skipped", "phase": 3})
            rounds_used[3] = 0

        verdicts = extract_verdicts(review_conversations, self.tasks, alignment)
        phase4 = self._run_phase(4, {"verdict_summary": _findings_summary(verdicts)})
        rounds_used[4] = _max_rounds_used(phase4)

        summary = phase4[-1].final_answer if phase4 else ""
        revised_diff = _revised_diff_from(alignment)
        self.report = ReviewReport(
            request_id=request.id,
            modality=modality,
            language=language,
            verdicts=tuple(verdicts),
            revised_diff=revised_diff,
            summary=summary,
            transcript=tuple(c.id for c in self.conversations),
            rounds_used=rounds_used,
        )
        self.log.append(
            {
                "type": "run_finished",
                "request_id": request.id,
                "transcript_digest": transcript_digest(self.conversations),
                "inconclusive": self.report.inconclusive,
            }
        )
        return self.report


def _max_rounds_used(conversations: Sequence[Conversation]) -> int:
    return max((len(c.turns) for c in conversations), default=0)


def _needs_alignment(verdicts: Sequence[Verdict], tasks: Sequence[TaskKind]) -> bool:
    if TaskKind.CR in tasks:
        return True
    return any(v.outcome in NEGATIVE_OUTCOMES for v in verdicts)


def _findings_summary(verdicts: Sequence[Verdict]) -> str:
    return "; ".join(f"{v.task.value}={v.outcome}" for v in verdicts)


def _revised_diff_from(alignment: Conversation | None) -> str | None:
    code = conversation_revised_code(alignment)
    if code is None:
        return None
    try:
        parse_unified_diff(code)
    except DiffParseError:
        return None
    return code


def run_review(
    request: ReviewRequest,
    backend: Backend,
    tasks: Sequence[TaskKind] = DEFAULT_TASKS,
    plan: PhasePlan | None = None,
    qa_config: QAConfig | None = None,
    role_cards: Mapping[str, RoleCard] | None = None,
    run_log_path: str | Path | None = None,
) -> ReviewReport:
    """Run the four-phase review and return the aggregated report."""
    session = ReviewSession(
        request,
        backend,
        tasks=tasks,
        plan=plan,
        qa_config=qa_config,
        role_cards=role_cards,
        run_log_path=run_log_path,
    )
    return session.run()
