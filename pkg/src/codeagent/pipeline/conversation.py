"""The atomic conversation loop.

A gated conversation asks its question, scores the answer, and on a
below-threshold score appends an additional instruction to the original
question and asks again, until the answer passes or the round cap is
reached.  Refinement always appends to the original question, never
rewrites it, so every refined question contains the first one verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from ..agents.backends import Backend, complete
from ..agents.prompts import pattern_for_goal, render_prompt
from ..agents.roles import Message, RoleCard
from ..core import ReviewRequest
from ..qachecker.refine import refine
from ..qachecker.scoring import QAConfig, QualityScore, default_config, score
from .plan import ConversationSpec

TERMINAL_REASONS = ("qa_accepted", "max_rounds", "ungated_single_turn")

GUIDANCE_HEADER = "[QA-Checker guidance]"

EventSink = Callable[[dict], None]


@dataclass(frozen=True)
class TurnRecord:
    """One question/answer exchange with its gate annotations."""

    question: str
    answer: str
    quality: QualityScore | None = None
    appended_instruction: str | None = None

    def __post_init__(self) -> None:
        if self.appended_instruction is not None and self.quality is None:
            raise ValueError("appended_instruction requires a quality score")


@dataclass(frozen=True)
class Conversation:
    id: str
    instructor: str
    assistant: str
    goal: str
    qa_gated: bool
    turns: tuple[TurnRecord, ...]
    terminal_reason: str

    def __post_init__(self) -> None:
        if self.terminal_reason not in TERMINAL_REASONS:
            raise ValueError(f"bad terminal_reason {self.terminal_reason!r}")
        if self.qa_gated and self.terminal_reason == "ungated_single_turn":
            raise ValueError("gated conversations end qa_accepted or max_rounds")
        if not self.qa_gated and self.terminal_reason != "ungated_single_turn":
            raise ValueError("ungated conversations are single-turn")

    @property
    def final_answer(self) -> str:
        return self.turns[-1].answer if self.turns else ""


def combine_question(original: str, instructions: Sequence[str]) -> str:
    """Append the accumulated guidance to the original question."""
    if not instructions:
        return original
    return f"{original}\n\n{GUIDANCE_HEADER}\n" + "\n".join(instructions)


def run_conversation(
    spec: ConversationSpec,
    conversation_id: str,
    request: ReviewRequest,
    backend: Backend,
    *,
    phase_id: int,
    role_cards: Mapping[str, RoleCard],
    qa_config: QAConfig | None = None,
    max_rounds: int = 10,
    extra_context: Mapping[str, str] | None = None,
    event_sink: EventSink | None = None,
) -> Conversation:
    """Run one atomic conversation to completion."""
    if max_rounds < 1:
        raise ValueError("max_rounds must be positive")
    qa_config = qa_config or default_config()
    pattern = pattern_for_goal(spec.goal)
    original_question = render_prompt(
        role_cards[spec.instructor],
        spec.goal,
        request,
        history=(),
        phase=phase_id,
        extra_context=extra_context,
    )

    def emit(turn_index: int, turn: TurnRecord) -> None:
        if event_sink is None:
            return
        event_sink(
            {
                "type": "turn",
                "conversation": conversation_id,
                "phase": phase_id,
                "turn": turn_index,
                "question": turn.question,
                "answer": turn.answer,
                "quality": None
                if turn.quality is None
                else {
                    "relevance": turn.quality.relevance,
                    "specificity": turn.quality.specificity,
                    "coherence": turn.quality.coherence,
                    "combined": turn.quality.combined,
                },
                "appended_instruction": turn.appended_instruction,
            }
        )

    turns: list[TurnRecord] = []
    instructions: list[str] = []
    history: list[Message] = []
    question = original_question

    for round_index in range(max_rounds):
        history.append(Message(spec.instructor, question, len(history)))
        answer = complete(backend, history, speaker=spec.assistant)
        history.append(answer)

        if not spec.qa_gated:
            turn = TurnRecord(question=question, answer=answer.content)
            turns.append(turn)
            emit(round_index, turn)
            terminal = "ungated_single_turn"
            break

        quality = score(question, answer.content, qa_config, pattern)
        if quality.combined >= qa_config.tau:
            turn = TurnRecord(question=question, answer=answer.content, quality=quality)
            turns.append(turn)
            emit(round_index, turn)
            terminal = "qa_accepted"
            break
        if round_index == max_rounds - 1:
            # Cap reached: record the failing score but no instruction.
            turn = TurnRecord(question=question, answer=answer.content, quality=quality)
            turns.append(turn)
            emit(round_index, turn)
            terminal = "max_rounds"
            break
        instruction = refine(original_question, answer.content, quality, qa_config, pattern)
        turn = TurnRecord(
            question=question,
            answer=answer.content,
            quality=quality,
            appended_instruction=instruction,
        )
        turns.append(turn)
        emit(round_index, turn)
        instructions.append(instruction)
        question = combine_question(original_question, instructions)

    return Conversation(
        id=conversation_id,
        instructor=spec.instructor,
        assistant=spec.assistant,
        goal=spec.goal.value if hasattr(spec.goal, "value") else str(spec.goal),
        qa_gated=spec.qa_gated,
        turns=tuple(turns),
        terminal_reason=terminal,
    )


def conversation_to_dict(conversation: Conversation) -> dict:
    return {
        "id": conversation.id,
        "instructor": conversation.instructor,
        "assistant": conversation.assistant,
        "goal": conversation.goal,
        "qa_gated": conversation.qa_gated,
        "terminal_reason": conversation.terminal_reason,
        "turns": [
            {
                "question": t.question,
                "answer": t.answer,
                "quality": None
                if t.quality is None
                else [t.quality.relevance, t.quality.specificity, t.quality.coherence,
                      t.quality.combined],
                "appended_instruction": t.appended_instruction,
            }
            for t in conversation.turns
        ],
    }
