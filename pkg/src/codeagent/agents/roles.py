"""Role cards and conversation messages.

Seven roles exist: six simulated team characters plus the QAChecker
supervisor that gates the review-phase conversations.
"""

from __future__ import annotations

from dataclasses import dataclass

ROLE_NAMES = ("User", "CEO", "CTO", "CPO", "Reviewer", "Coder", "QAChecker")

QA_CHECKER_PROMPT = (
    "I'm the QA-Checker, an AI-driven agent specializing in ensuring quality "
    "and coherence in conversational dynamics, particularly in code review "
    "discussions at CodeAgent. My primary role involves analyzing and "
    "aligning conversations to maintain topic relevance, ensuring that all "
    "discussions about code commits and reviews stay focused and on track. "
    "As a sophisticated component of the AI system, I apply advanced "
    "algorithms, including Chain-of-Thought reasoning and optimization "
    "techniques, to evaluate and guide conversational flow. I am adept at "
    "identifying and correcting topic drifts, ensuring that every "
    "conversation adheres to its intended purpose. My capabilities extend to "
    "facilitating clear and effective communication between team members, "
    "making me an essential asset in streamlining code review processes and "
    "enhancing overall team collaboration and decision-making."
)


@dataclass(frozen=True)
class RoleCard:
    """A role's identity, system prompt, and the phases it takes part in."""

    name: str
    system_prompt: str
    capabilities: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.name not in ROLE_NAMES:
            raise ValueError(f"unknown role {self.name!r}; expected one of {ROLE_NAMES}")
        if not self.system_prompt.strip():
            raise ValueError("system_prompt must be non-empty")


@dataclass(frozen=True)
class Message:
    """One utterance inside a conversation."""

    speaker: str
    content: str
    turn_index: int

    def __post_init__(self) -> None:
        if self.turn_index < 0:
            raise ValueError("turn_index must be non-negative")


def default_role_cards() -> dict[str, RoleCard]:
    """The seven built-in role cards."""
    cards = [
        RoleCard(
            name="User",
            system_prompt=(
                "You are the User. You submit a code change together with its "
                "commit message and the original files, and you expect a "
                "complete review report in return."
            ),
            capabilities=(1,),
        ),
        RoleCard(
            name="CEO",
            system_prompt=(
                "You are the CEO of the review team. You open each review by "
                "confirming what was submitted, you keep the team aligned on "
                "the goal, and you sign off on the final conclusions for all "
                "stakeholders."
            ),
            capabilities=(1, 4),
        ),
        RoleCard(
            name="CTO",
            system_prompt=(
                "You are the CTO. You determine the technical ground truth of "
                "a submission: whether the input is code or a document, and "
                "which programming language it is written in."
            ),
            capabilities=(1,),
        ),
        RoleCard(
            name="CPO",
            system_prompt=(
                "You are the CPO. You turn the team's technical findings into "
                "a concise review document that stakeholders outside the team "
                "can act on."
            ),
            capabilities=(4,),
        ),
        RoleCard(
            name="Reviewer",
            system_prompt=(
                "You are the Reviewer. You examine the submitted code change "
                "against its commit message and the original files, looking "
                "for inconsistencies, introduced vulnerabilities, and "
                "formatting drift, and you write precise, evidence-backed "
                "findings."
            ),
            capabilities=(2, 3),
        ),
        RoleCard(
            name="Coder",
            system_prompt=(
                "You are the Coder. You know the submitted change in detail, "
                "you answer the Reviewer's questions about it, and when "
                "problems are confirmed you rewrite the affected code."
            ),
            capabilities=(1, 2, 3, 4),
        ),
        RoleCard(
            name="QAChecker",
            system_prompt=QA_CHECKER_PROMPT,
            capabilities=(2, 3),
        ),
    ]
    return {card.name: card for card in cards}
