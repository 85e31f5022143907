"""Classification and hit-rate metrics.

All rates are percentages.  Metrics with an undefined denominator
return ``None`` (rendered as ``N/A`` in reports) instead of 0, so
degenerate cells never skew table averages.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn,
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def recall(counts: ConfusionCounts) -> float | None:
    """100 * tp / (tp + fn); None when no actual positives exist."""
    denominator = counts.tp + counts.fn
    if denominator == 0:
        return None
    return 100.0 * counts.tp / denominator


def precision(counts: ConfusionCounts) -> float | None:
    denominator = counts.tp + counts.fp
    if denominator == 0:
        return None
    return 100.0 * counts.tp / denominator


def f1(counts: ConfusionCounts) -> float | None:
    """Harmonic mean of precision and recall, as a percentage.

    None when either denominator is empty; 0 when both rates are 0.
    """
    p = precision(counts)
    r = recall(counts)
    if p is None or r is None:
        return None
    if p + r == 0:
        return 0.0
    return 2.0 * p * r / (p + r)


def hit_rates(confirm: int, find: int, total: int) -> tuple[float, float]:
    """(rate_cr, rate_ca): confirmed over findings, confirmed over total."""
    if find <= 0 or total <= 0:
        raise ValueError("find and total must be positive")
    if not 0 <= confirm <= find <= total:
        raise ValueError(
            f"expected 0 <= confirm <= find <= total, got ({confirm}, {find}, {total})"
        )
    return 100.0 * confirm / find, 100.0 * confirm / total


def segment_rates(
    merged_total: int,
    merged_confirmed: int,
    closed_total: int,
    closed_confirmed: int,
) -> tuple[float | None, float | None, float | None]:
    """(rate_merge, rate_close, rate_avg) for one merged/closed split."""
    for total, confirmed, name in (
        (merged_total, merged_confirmed, "merged"),
        (closed_total, closed_confirmed, "closed"),
    ):
        if total < 0 or confirmed < 0 or confirmed > max(total, 0):
            raise ValueError(f"bad {name} counts: confirmed {confirmed} of {total}")
    rate_merge = None if merged_total == 0 else 100.0 * merged_confirmed / merged_total
    rate_close = None if closed_total == 0 else 100.0 * closed_confirmed / closed_total
    combined_total = merged_total + closed_total
    rate_avg = (
        None
        if combined_total == 0
        else 100.0 * (merged_confirmed + closed_confirmed) / combined_total
    )
    return rate_merge, rate_close, rate_avg


def format_rate(value: float | None, digits: int = 2) -> str:
    return "N/A" if value is None else f"{value:.{digits}f}"
