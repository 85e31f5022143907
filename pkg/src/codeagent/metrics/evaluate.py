"""Batch evaluation of predictions over dataset records.

Consistency and format runs score recall/F1 against positive/negative
labels; vulnerability runs score hit rates over confirmed findings;
revision runs score mean edit progress against target revisions.
Records without a usable label or prediction are listed as skipped,
never silently dropped.  Aggregation is order-independent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from ..core import TaskKind
from ..ingest.dataset import DatasetRecord
from ..ingest.diffs import DiffParseError, new_side_text, parse_unified_diff
from .editdist import edit_progress
from .rates import ConfusionCounts, f1, format_rate, hit_rates, recall, segment_rates

SEGMENTS = ("merged", "closed", "all")

_POSITIVE = "positive"
_NEGATIVE = "negative"


@dataclass
class EvalRun:
    """The outcome of one (task, segment) evaluation."""

    task: TaskKind
    segment: str
    pairs: list[dict[str, Any]] = field(default_factory=list)
    skipped: list[dict[str, str]] = field(default_factory=list)
    overall: dict[str, Any] = field(default_factory=dict)
    per_language: dict[str, dict[str, Any]] = field(default_factory=dict)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "task": self.task.value,
            "segment": self.segment,
            "evaluated": len(self.pairs),
            "skipped": self.skipped,
            "overall": self.overall,
            "per_language": self.per_language,
            "table": self.render_table(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False)

    def render_table(self) -> str:
        """Plain-text table: one column per language plus the overall column."""
        languages = sorted(self.per_language)
        headers = ["metric", "overall", *languages]
        metric_names = list(self.overall)
        rows = []
        for name in metric_names:
            row = [name, _cell(self.overall.get(name))]
            row.extend(_cell(self.per_language[lang].get(name)) for lang in languages)
            rows.append(row)
        widths = [max(len(r[i]) for r in [headers, *rows]) for i in range(len(headers))]
        lines = [
            "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
            "  ".join("-" * w for w in widths),
        ]
        lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows)
        return "\n".join(lines)


def _cell(value: Any) -> str:
    if value is None:
        return "N/A"
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def _segment_filter(records: Iterable[DatasetRecord], segment: str) -> list[DatasetRecord]:
    if segment == "all":
        return list(records)
    return [r for r in records if r.pr_status == segment]


def evaluate(
    records: Sequence[DatasetRecord],
    predictions: Mapping[str, Any],
    task: TaskKind,
    segment: str = "all",
) -> EvalRun:
    """Score ``predictions`` (keyed by record sha) for one task."""
    if segment not in SEGMENTS:
        raise ValueError(f"segment must be one of {SEGMENTS}, got {segment!r}")
    run = EvalRun(task=task, segment=segment)
    scoped = _segment_filter(records, segment)

    usable: list[tuple[DatasetRecord, Any, Any]] = []
    for record in scoped:
        label = record.label(task)
        if label is None:
            run.skipped.append({"sha": record.sha, "reason": f"no {task.value} label"})
            continue
        if record.sha not in predictions:
            run.skipped.append({"sha": record.sha, "reason": "no prediction"})
            continue
        usable.append((record, label, predictions[record.sha]))

    if task in (TaskKind.CA, TaskKind.FA):
        _evaluate_classification(run, usable)
    elif task is TaskKind.VA:
        _evaluate_vulnerability(run, usable)
    else:
        _evaluate_revision(run, usable)
    return run


# -- CA / FA -----------------------------------------------------------------


def _confusion(pairs: Iterable[tuple[str, str]]) -> ConfusionCounts:
    tp = fp = tn = fn = 0
    for label, prediction in pairs:
        if prediction == _POSITIVE and label == _POSITIVE:
            tp += 1
        elif prediction == _POSITIVE and label == _NEGATIVE:
            fp += 1
        elif prediction == _NEGATIVE and label == _NEGATIVE:
            tn += 1
        else:
            fn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _classification_metrics(counts: ConfusionCounts) -> dict[str, Any]:
    return {
        "n": counts.total,
        "tp": counts.tp,
        "fp": counts.fp,
        "tn": counts.tn,
        "fn": counts.fn,
        "recall": recall(counts),
        "f1": f1(counts),
    }


def _evaluate_classification(
    run: EvalRun, usable: list[tuple[DatasetRecord, Any, Any]]
) -> None:
    by_language: dict[str, list[tuple[str, str]]] = {}
    flat: list[tuple[str, str]] = []
    for record, label, prediction in usable:
        prediction = str(prediction).lower()
        if prediction not in (_POSITIVE, _NEGATIVE):
            run.skipped.append(
                {"sha": record.sha, "reason": f"prediction {prediction!r} not positive/negative"}
            )
            continue
        pair = (str(label), prediction)
        flat.append(pair)
        by_language.setdefault(record.language, []).append(pair)
        run.pairs.append(
            {"sha": record.sha, "language": record.language,
             "label": pair[0], "prediction": pair[1]}
        )
    run.overall = _classification_metrics(_confusion(flat))
    run.per_language = {
        language: _classification_metrics(_confusion(pairs))
        for language, pairs in by_language.items()
    }


# -- VA ----------------------------------------------------------------------


def _hit_metrics(events: list[tuple[bool, bool]]) -> dict[str, Any]:
    total = len(events)
    find = sum(1 for flagged, _ in events if flagged)
    confirm = sum(1 for flagged, confirmed in events if flagged and confirmed)
    rate_cr, rate_ca = (None, None)
    if find > 0 and total > 0:
        rate_cr, rate_ca = hit_rates(confirm, find, total)
    return {
        "n": total,
        "find": find,
        "confirm": confirm,
        "rate_cr": rate_cr,
        "rate_ca": rate_ca,
    }


def _evaluate_vulnerability(
    run: EvalRun, usable: list[tuple[DatasetRecord, Any, Any]]
) -> None:
    by_language: dict[str, list[tuple[DatasetRecord, bool, bool]]] = {}
    flat: list[tuple[bool, bool]] = []
    for record, label, prediction in usable:
        flagged = bool(prediction)
        confirmed = bool(label)
        flat.append((flagged, confirmed))
        by_language.setdefault(record.language, []).append((record, flagged, confirmed))
        run.pairs.append(
            {"sha": record.sha, "language": record.language,
             "label": confirmed, "prediction": flagged}
        )
    run.overall = _hit_metrics(flat)
    per_language: dict[str, dict[str, Any]] = {}
    for language, rows in by_language.items():
        events = [(flagged, confirmed) for _, flagged, confirmed in rows]
        metrics = _hit_metrics(events)
        merged = [(r, f, c) for r, f, c in rows if r.pr_status == "merged"]
        closed = [(r, f, c) for r, f, c in rows if r.pr_status == "closed"]
        if run.segment == "all":
            rate_merge, rate_close, rate_avg = segment_rates(
                len(merged),
                sum(1 for _, f, c in merged if f and c),
                len(closed),
                sum(1 for _, f, c in closed if f and c),
            )
            metrics.update(
                {
                    "merged_total": len(merged),
                    "merged_confirmed": sum(1 for _, f, c in merged if f and c),
                    "closed_total": len(closed),
                    "closed_confirmed": sum(1 for _, f, c in closed if f and c),
                    "rate_merge": rate_merge,
                    "rate_close": rate_close,
                    "rate_avg": rate_avg,
                }
            )
        per_language[language] = metrics
    run.per_language = per_language


# -- CR ----------------------------------------------------------------------


def revision_source(record: DatasetRecord) -> str:
    """The submitted (post-change) code a revision is measured against."""
    try:
        return new_side_text(parse_unified_diff(record.diff))
    except DiffParseError:
        return record.diff


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _evaluate_revision(
    run: EvalRun, usable: list[tuple[DatasetRecord, Any, Any]]
) -> None:
    by_language: dict[str, list[float]] = {}
    flat: list[float] = []
    for record, label, prediction in usable:
        source = revision_source(record)
        ep = edit_progress(source, str(label), str(prediction))
        if ep is None:
            run.skipped.append(
                {"sha": record.sha, "reason": "source equals target; EP undefined"}
            )
            continue
        flat.append(ep)
        by_language.setdefault(record.language, []).append(ep)
        run.pairs.append(
            {"sha": record.sha, "language": record.language, "edit_progress": ep}
        )
    run.overall = {"n": len(flat), "mean_ep": _mean(flat)}
    run.per_language = {
        language: {"n": len(values), "mean_ep": _mean(values)}
        for language, values in by_language.items()
    }


def render_language_rate_table(per_language: Mapping[str, Mapping[str, Any]]) -> str:
    """Per-language hit-rate table in the merged/closed layout."""
    languages = sorted(per_language)
    rows = [
        ("merged (total#)", "merged_total"),
        ("merged (confirmed#)", "merged_confirmed"),
        ("Rate_merge", "rate_merge"),
        ("closed (total#)", "closed_total"),
        ("closed (confirmed#)", "closed_confirmed"),
        ("Rate_close", "rate_close"),
        ("Rate_avg", "rate_avg"),
    ]
    header = ["", *languages]
    table_rows = []
    for title, key in rows:
        cells = [title]
        for lang in languages:
            value = per_language[lang].get(key)
            if key.startswith("rate"):
                cells.append(format_rate(value) if value is not None else "N/A")
            else:
                cells.append(str(value) if value is not None else "N/A")
        table_rows.append(cells)
    widths = [max(len(r[i]) for r in [header, *table_rows]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.extend(
        "  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in table_rows
    )
    return "\n".join(lines)
