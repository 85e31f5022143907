"""Additional-instruction generation for below-threshold answers.

When an answer scores under the gate threshold, the checker emits an
``aai`` (additional attached instruction): a deterministic template that
restates the original question verbatim and targets the weakest scoring
component.  Ties resolve in the fixed order relevance > specificity >
coherence.
"""

from __future__ import annotations

from .scoring import (
    AnswerPattern,
    QAConfig,
    QualityScore,
    default_config,
    top_missing_keyphrases,
)

QUESTION_FENCE_OPEN = "<<<ORIGINAL QUESTION"
QUESTION_FENCE_CLOSE = "ORIGINAL QUESTION>>>"


class RefineContractError(ValueError):
    """refine() was called for an answer that already passed the gate."""


def _relevance_advice(question: str, answer: str, config: QAConfig) -> str:
    missing = top_missing_keyphrases(question, answer, config)
    if missing:
        return (
            "The answer drifted away from the question. "
            f"In the next answer, directly address: {', '.join(missing)}."
        )
    return (
        "The answer drifted away from the question. "
        "Restate and answer the question's actual request point by point."
    )


def _specificity_advice() -> str:
    return (
        "The answer was too generic. Name the exact files, functions, and "
        "identifiers involved, and cite concrete lines from the change "
        "instead of general statements."
    )


def _coherence_advice(pattern: AnswerPattern | None, answer: str) -> str:
    if pattern is not None:
        missing = pattern.missing_markers(answer)
        if missing:
            labels = "; ".join(m.label for m in missing)
            return (
                "The answer did not follow the required structure. "
                f"It must include: {labels}."
            )
    return (
        "The answer lacked logical structure. Use connective phrases to "
        "link each step of the reasoning and keep every reference explicit."
    )


def refine(
    question: str,
    answer: str,
    quality: QualityScore,
    config: QAConfig | None = None,
    pattern: AnswerPattern | None = None,
) -> str:
    """Build the additional instruction for a failed gate check.

    The returned text always embeds ``question`` verbatim between the
    question fences, so refinement never loses the original intent.
    """
    config = config or default_config()
    if quality.combined >= config.tau:
        raise RefineContractError(
            f"refine() called with combined score {quality.combined:.3f} >= "
            f"tau {config.tau}"
        )
    name, _ = min(quality.components(), key=lambda kv: kv[1])
    if name == "relevance":
        advice = _relevance_advice(question, answer, config)
    elif name == "specificity":
        advice = _specificity_advice()
    else:
        advice = _coherence_advice(pattern, answer)
    return (
        f"The previous answer scored lowest on {name} "
        f"({quality.combined:.3f} overall, below the bar). "
        f"{advice}\n"
        f"The original question remains unchanged:\n"
        f"{QUESTION_FENCE_OPEN}\n{question}\n{QUESTION_FENCE_CLOSE}"
    )
