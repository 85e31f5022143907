"""Quality gate: answer scoring, refinement instructions, convergence lab."""

from .convergence import (
    ConvergenceResult,
    QuadraticObjective,
    converge,
    newton_step,
    random_objective,
)
from .refine import RefineContractError, refine
from .scoring import (
    AnswerPattern,
    Marker,
    QAConfig,
    QualityScore,
    coherence,
    default_config,
    relevance,
    score,
    specificity,
)

__all__ = [
    "AnswerPattern",
    "ConvergenceResult",
    "Marker",
    "QAConfig",
    "QuadraticObjective",
    "QualityScore",
    "RefineContractError",
    "coherence",
    "converge",
    "default_config",
    "newton_step",
    "random_objective",
    "refine",
    "relevance",
    "score",
    "specificity",
]
