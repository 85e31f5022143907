"""Four-phase review pipeline with gated conversations."""

from .conversation import (
    Conversation,
    TurnRecord,
    combine_question,
    conversation_to_dict,
    run_conversation,
)
from .plan import (
    DEFAULT_MAX_ROUNDS,
    ConversationSpec,
    PhasePlan,
    PhaseSpec,
    default_plan,
)
from .review import (
    AbortedRunError,
    InvalidRequestError,
    ReviewSession,
    RunLog,
    run_review,
    transcript_digest,
)
from .verdicts import extract_verdict, extract_verdicts, last_fenced_block, last_verdict_value

__all__ = [
    "AbortedRunError",
    "Conversation",
    "ConversationSpec",
    "DEFAULT_MAX_ROUNDS",
    "InvalidRequestError",
    "PhasePlan",
    "PhaseSpec",
    "ReviewSession",
    "RunLog",
    "TurnRecord",
    "combine_question",
    "conversation_to_dict",
    "default_plan",
    "extract_verdict",
    "extract_verdicts",
    "last_fenced_block",
    "last_verdict_value",
    "run_conversation",
    "run_review",
    "transcript_digest",
]
