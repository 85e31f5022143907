"""Character-level edit distance and the edit-progress metric.

Edit progress measures how much of the source-to-target distance a
prediction has closed: 100 means the prediction equals the target,
0 means no progress over the unmodified source, and predictions that
move away from the target score negative.

The distance is character-level Levenshtein; swap in a token-level
distance via the ``distance`` argument if an evaluation calls for it.
"""

from __future__ import annotations

from typing import Callable


def levenshtein(a: str, b: str) -> int:
    """Character-level Levenshtein distance (insert/delete/substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, char_a in enumerate(a, start=1):
        current = [i]
        for j, char_b in enumerate(b, start=1):
            cost = 0 if char_a == char_b else 1
            current.append(
                min(
                    previous[j] + 1,       # delete from a
                    current[j - 1] + 1,    # insert into a
                    previous[j - 1] + cost,
                )
            )
        previous = current
    return previous[-1]


def edit_progress(
    source: str,
    target: str,
    prediction: str,
    distance: Callable[[str, str], int] = levenshtein,
) -> float | None:
    """Percentage reduction in edit distance to the target.

    None when source and target are identical (no distance to close).
    """
    base = distance(source, target)
    if base == 0:
        return None
    return 100.0 * (base - distance(prediction, target)) / base
