"""The four-phase waterfall plan.

Phases run strictly in order; each phase is a list of atomic two-agent
conversations.  Review and alignment conversations are gated by the
quality checker, info-sync and documentation conversations are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..core import DEFAULT_TASKS, TaskKind

DEFAULT_MAX_ROUNDS = 10

PHASE_NAMES = {
    1: "basic_info_sync",
    2: "code_review",
    3: "code_alignment",
    4: "document",
}


@dataclass(frozen=True)
class ConversationSpec:
    """One instructor/assistant exchange on a single goal."""

    instructor: str
    assistant: str
    goal: TaskKind | str
    qa_gated: bool


@dataclass(frozen=True)
class PhaseSpec:
    id: int
    name: str
    conversations: tuple[ConversationSpec, ...]

    def __post_init__(self) -> None:
        if PHASE_NAMES.get(self.id) != self.name:
            raise ValueError(f"phase {self.id} must be named {PHASE_NAMES.get(self.id)!r}")


@dataclass(frozen=True)
class PhasePlan:
    phases: tuple[PhaseSpec, ...]
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self) -> None:
        if [p.id for p in self.phases] != [1, 2, 3, 4]:
            raise ValueError("plan must hold exactly phases 1..4 in order")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be positive")

    def phase(self, phase_id: int) -> PhaseSpec:
        return self.phases[phase_id - 1]


def default_plan(
    tasks: Sequence[TaskKind] = DEFAULT_TASKS,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> PhasePlan:
    """The standard plan for a set of requested review tasks."""
    ordered_tasks = [t for t in DEFAULT_TASKS if t in set(tasks)]
    if not ordered_tasks:
        raise ValueError("at least one task must be requested")
    return PhasePlan(
        phases=(
            PhaseSpec(
                id=1,
                name="basic_info_sync",
                conversations=(
                    ConversationSpec("CEO", "CTO", "modality_sync", qa_gated=False),
                    ConversationSpec("CEO", "Coder", "language_sync", qa_gated=False),
                ),
            ),
            PhaseSpec(
                id=2,
                name="code_review",
                conversations=tuple(
                    ConversationSpec("Reviewer", "Coder", task, qa_gated=True)
                    for task in ordered_tasks
                ),
            ),
            PhaseSpec(
                id=3,
                name="code_alignment",
                conversations=(
                    ConversationSpec("Coder", "Reviewer", "code_alignment", qa_gated=True),
                ),
            ),
            PhaseSpec(
                id=4,
                name="document",
                conversations=(
                    ConversationSpec("Coder", "CPO", "summary_document", qa_gated=False),
                    ConversationSpec("Coder", "CEO", "final_decision", qa_gated=False),
                ),
            ),
        ),
        max_rounds=max_rounds,
    )
