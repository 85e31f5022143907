"""Deterministic synthetic dataset with the published label marginals.

The real crawled corpus is distributed separately; this generator
produces a stand-in with identical shape: 3,545 records across nine
languages split into merged/closed pull requests, with consistency- and
format-label marginals, the per-language Python consistency cells, and
the per-language confirmed-vulnerability counts all matching the
published figures.  Everything is index-based, so repeated calls yield
byte-identical records.
"""

from __future__ import annotations

from datetime import date, timedelta
from hashlib import sha1

from ..core import SourceFile, TaskKind
from .dataset import DatasetRecord

# Per-language bucket sizes (merged / closed pull requests).
MERGED_TOTALS = {
    "Python": 1057, "Java": 287, "Go": 133, "C++": 138, "JavaScript": 280,
    "C": 114, "C#": 206, "PHP": 173, "Ruby": 202,
}
CLOSED_TOTALS = {
    "Python": 248, "Java": 97, "Go": 74, "C++": 56, "JavaScript": 112,
    "C": 146, "C#": 62, "PHP": 105, "Ruby": 55,
}

# Confirmed-vulnerability counts per language bucket.
VA_CONFIRMED_MERGED = {
    "Python": 148, "Java": 17, "Go": 11, "C++": 19, "JavaScript": 34,
    "C": 9, "C#": 21, "PHP": 28, "Ruby": 20,
}
VA_CONFIRMED_CLOSED = {
    "Python": 45, "Java": 10, "Go": 5, "C++": 13, "JavaScript": 16,
    "C": 26, "C#": 7, "PHP": 15, "Ruby": 5,
}

# Label marginals: (positive, negative) per segment.
CA_MARGINALS = {"merged": (2089, 501), "closed": (820, 135)}
FA_MARGINALS = {"merged": (2238, 352), "closed": (861, 94)}

# The Python consistency cells are pinned: (positive, negative) per segment.
PYTHON_CA_CELLS = {"merged": (803, 254), "closed": (213, 35)}

LANGUAGE_ORDER = ("Python", "Java", "Go", "C++", "JavaScript", "C", "C#", "PHP", "Ruby")

_EXTENSIONS = {
    "Python": "py", "Java": "java", "Go": "go", "C++": "cpp", "JavaScript": "js",
    "C": "c", "C#": "cs", "PHP": "php", "Ruby": "rb",
}

_BASE_DATE = date(2023, 4, 15)


def apportion(total: int, weights: list[int]) -> list[int]:
    """Largest-remainder apportionment of ``total`` across ``weights``."""
    if total < 0:
        raise ValueError("total must be non-negative")
    weight_sum = sum(weights)
    if weight_sum == 0:
        return [0] * len(weights)
    quotas = [total * w / weight_sum for w in weights]
    shares = [int(q) for q in quotas]
    remainder = total - sum(shares)
    by_fraction = sorted(
        range(len(weights)), key=lambda i: (-(quotas[i] - shares[i]), i)
    )
    for i in by_fraction[:remainder]:
        shares[i] += 1
    if any(s > w for s, w in zip(shares, weights)):
        raise ValueError("apportioned share exceeds its bucket size")
    return shares


def _negative_counts(
    marginals: dict[str, tuple[int, int]],
    pinned_python: dict[str, tuple[int, int]] | None,
) -> dict[str, dict[str, int]]:
    """Per (segment, language) negative-label counts matching the marginals."""
    totals = {"merged": MERGED_TOTALS, "closed": CLOSED_TOTALS}
    out: dict[str, dict[str, int]] = {}
    for segment, (_, negatives) in marginals.items():
        sizes = totals[segment]
        if pinned_python is not None:
            python_negative = pinned_python[segment][1]
            rest = [lang for lang in LANGUAGE_ORDER if lang != "Python"]
            shares = apportion(negatives - python_negative, [sizes[lang] for lang in rest])
            per_lang = dict(zip(rest, shares))
            per_lang["Python"] = python_negative
        else:
            shares = apportion(negatives, [sizes[lang] for lang in LANGUAGE_ORDER])
            per_lang = dict(zip(LANGUAGE_ORDER, shares))
        out[segment] = per_lang
    return out


def _record(language: str, segment: str, index: int,
            ca_negative: bool, fa_negative: bool, va_confirmed: bool) -> DatasetRecord:
    ext = _EXTENSIONS[language]
    slug = language.lower().replace("+", "p").replace("#", "s")
    sha = sha1(f"{language}/{segment}/{index}".encode()).hexdigest()
    path = f"src/feature_{index % 40}.{ext}"
    original = f"value = {index}\nresult = compute(value)\n"
    diff = (
        f"--- {path}\n"
        f"+++ {path}\n"
        "@@ -1,2 +1,3 @@\n"
        f" value = {index}\n"
        f"+limit = {index % 7 + 1}\n"
        " result = compute(value)\n"
    )
    if ca_negative:
        message = f"Remove deprecated login handler from module {index % 40}"
    else:
        message = f"Add limit guard to feature {index % 40}"
    created = _BASE_DATE + timedelta(days=index % 300)
    return DatasetRecord(
        sha=sha,
        repo=f"synthetic/{slug}-{index % 20}",
        language=language,
        pr_status=segment,
        task_labels={
            TaskKind.CA: "negative" if ca_negative else "positive",
            TaskKind.FA: "negative" if fa_negative else "positive",
            TaskKind.VA: va_confirmed,
        },
        commit_message=message,
        diff=diff,
        original_files=(SourceFile(path=path, content=original),),
        created_at=f"{created.isoformat()}T12:00:00Z",
    )


def generate_synthetic_records() -> list[DatasetRecord]:
    """The full 3,545-record synthetic corpus, in a fixed order."""
    ca_negatives = _negative_counts(CA_MARGINALS, PYTHON_CA_CELLS)
    fa_negatives = _negative_counts(FA_MARGINALS, None)
    va_confirmed = {"merged": VA_CONFIRMED_MERGED, "closed": VA_CONFIRMED_CLOSED}
    totals = {"merged": MERGED_TOTALS, "closed": CLOSED_TOTALS}

    records: list[DatasetRecord] = []
    for segment in ("merged", "closed"):
        for language in LANGUAGE_ORDER:
            size = totals[segment][language]
            ca_neg = ca_negatives[segment][language]
            fa_neg = fa_negatives[segment][language]
            confirmed = va_confirmed[segment][language]
            for index in range(size):
                records.append(
                    _record(
                        language,
                        segment,
                        index,
                        ca_negative=index < ca_neg,
                        fa_negative=index < fa_neg,
                        va_confirmed=index < confirmed,
                    )
                )
    return records
