"""Evaluation metrics: recall/F1, edit progress, hit rates, harness."""

from .editdist import edit_progress, levenshtein
from .evaluate import EvalRun, evaluate, render_language_rate_table, revision_source
from .rates import (
    ConfusionCounts,
    f1,
    format_rate,
    hit_rates,
    precision,
    recall,
    segment_rates,
)

__all__ = [
    "ConfusionCounts",
    "EvalRun",
    "edit_progress",
    "evaluate",
    "f1",
    "format_rate",
    "hit_rates",
    "levenshtein",
    "precision",
    "recall",
    "render_language_rate_table",
    "revision_source",
    "segment_rates",
]
