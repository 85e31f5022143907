"""Rates, edit progress, and the evaluation harness."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from codeagent.core import SourceFile, TaskKind
from codeagent.ingest.dataset import DatasetRecord
from codeagent.metrics.editdist import edit_progress, levenshtein
from codeagent.metrics.evaluate import evaluate, render_language_rate_table
from codeagent.metrics.rates import (
    ConfusionCounts,
    f1,
    format_rate,
    hit_rates,
    recall,
    segment_rates,
)

from conftest import oracle_levenshtein


class TestRecallF1:
    def test_perfect_single_positive(self):
        counts = ConfusionCounts(tp=1, fn=0, fp=0, tn=0)
        assert recall(counts) == 100.0
        assert f1(counts) == 100.0

    def test_hand_recall(self):
        assert recall(ConfusionCounts(tp=3, fn=1)) == pytest.approx(75.0)

    def test_hand_harmonic_mean(self):
        # P = 0.5, R = 1.0 -> F1 = 2/3.
        counts = ConfusionCounts(tp=1, fp=1, fn=0)
        assert f1(counts) == pytest.approx(66.67, abs=0.01)

    def test_undefined_is_none_not_zero(self):
        assert recall(ConfusionCounts(tp=0, fn=0, fp=2, tn=1)) is None
        assert f1(ConfusionCounts(tp=0, fn=0, fp=2)) is None
        assert f1(ConfusionCounts(tp=0, fn=2, fp=0)) is None
        assert format_rate(None) == "N/A"

    def test_zero_rates_give_zero_f1(self):
        assert f1(ConfusionCounts(tp=0, fp=1, fn=1, tn=0)) == 0.0

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionCounts(tp=-1)

    @given(st.integers(1, 50), st.integers(0, 50), st.integers(0, 50))
    def test_f1_symmetric_under_fp_fn_swap(self, tp, fp, fn):
        # Swapping fp and fn exchanges P and R; the harmonic mean is
        # symmetric, so F1 is unchanged.
        a = f1(ConfusionCounts(tp=tp, fp=fp, fn=fn))
        b = f1(ConfusionCounts(tp=tp, fp=fn, fn=fp))
        assert a == pytest.approx(b, abs=1e-9)


class TestHitRates:
    def test_headline_rates(self):
        rate_cr, rate_ca = hit_rates(449, 483, 3545)
        assert rate_cr == pytest.approx(92.96, abs=0.01)
        assert rate_ca == pytest.approx(12.67, abs=0.01)

    def test_second_column(self):
        rate_cr, _ = hit_rates(212, 1063, 3545)
        assert rate_cr == pytest.approx(19.94, abs=0.01)

    def test_zero_confirms(self):
        assert hit_rates(0, 10, 100) == (0.0, 0.0)

    def test_contract_violations(self):
        with pytest.raises(ValueError):
            hit_rates(5, 0, 10)
        with pytest.raises(ValueError):
            hit_rates(5, 3, 10)  # confirm > find
        with pytest.raises(ValueError):
            hit_rates(2, 11, 10)  # find > total


class TestSegmentRates:
    def test_python_column(self):
        rate_merge, rate_close, rate_avg = segment_rates(1057, 148, 248, 45)
        assert rate_merge == pytest.approx(14.00, abs=0.02)
        assert rate_close == pytest.approx(18.15, abs=0.02)
        assert rate_avg == pytest.approx(14.79, abs=0.02)

    def test_cpp_average(self):
        _, _, rate_avg = segment_rates(138, 19, 56, 13)
        assert rate_avg == pytest.approx(16.49, abs=0.02)

    def test_all_zero_confirmed(self):
        assert segment_rates(10, 0, 10, 0) == (0.0, 0.0, 0.0)

    def test_zero_totals_are_none(self):
        rate_merge, rate_close, rate_avg = segment_rates(0, 0, 5, 1)
        assert rate_merge is None
        assert rate_close == pytest.approx(20.0)
        assert rate_avg == pytest.approx(20.0)


class TestEditProgress:
    def test_prediction_equals_target(self):
        assert edit_progress("abc", "abd", "abd") == 100.0

    def test_prediction_equals_source(self):
        assert edit_progress("abc", "abd", "abc") == 0.0

    def test_kitten_sitting(self):
        # d(kitten, sitting) = 3, d(sitten, sitting) = 2.
        assert edit_progress("kitten", "sitting", "sitten") == pytest.approx(33.33, abs=0.01)

    def test_identical_source_target_undefined(self):
        assert edit_progress("same", "same", "anything") is None

    def test_worse_than_source_is_negative(self):
        assert edit_progress("abcd", "abce", "zzzz") < 0

    def test_oracle_agreement_on_random_triples(self):
        rng = random.Random(99)
        alphabet = "abcdef"
        negatives = 0
        for _ in range(100):
            source = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 41)))
            target = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 41)))
            prediction = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 41)))
            assert levenshtein(source, target) == oracle_levenshtein(source, target)
            base = oracle_levenshtein(source, target)
            if base == 0:
                assert edit_progress(source, target, prediction) is None
                continue
            expected = 100.0 * (base - oracle_levenshtein(prediction, target)) / base
            got = edit_progress(source, target, prediction)
            assert got == expected  # exact: same integers, same formula
            if got < 0:
                negatives += 1
        assert negatives > 0  # the sample covers the negative-progress regime


def _record(sha: str, language: str, status: str, labels: dict) -> DatasetRecord:
    return DatasetRecord(
        sha=sha,
        repo="demo/repo",
        language=language,
        pr_status=status,
        task_labels=labels,
        commit_message="msg",
        diff="--- a.py\n+++ a.py\n@@ -1,1 +1,2 @@\n keep\n+new\n",
        original_files=(SourceFile("a.py", "keep\n"),),
        created_at="2023-05-01T00:00:00Z",
    )


class TestEvaluate:
    def test_exact_predictions_are_perfect(self):
        records = [
            _record(f"s{i}", "Python", "merged", {TaskKind.CA: "positive"})
            for i in range(4)
        ]
        predictions = {r.sha: "positive" for r in records}
        run = evaluate(records, predictions, TaskKind.CA)
        assert run.overall["recall"] == 100.0
        assert run.overall["f1"] == 100.0

    def test_known_confusion_arithmetic(self):
        # tp=4, fp=1, tn=3, fn=2 -> recall 66.67, f1 72.73.
        records = []
        predictions = {}
        for i in range(4):  # tp
            records.append(_record(f"tp{i}", "Go", "merged", {TaskKind.CA: "positive"}))
            predictions[f"tp{i}"] = "positive"
        records.append(_record("fp0", "Go", "merged", {TaskKind.CA: "negative"}))
        predictions["fp0"] = "positive"
        for i in range(3):  # tn
            records.append(_record(f"tn{i}", "Go", "merged", {TaskKind.CA: "negative"}))
            predictions[f"tn{i}"] = "negative"
        for i in range(2):  # fn
            records.append(_record(f"fn{i}", "Go", "merged", {TaskKind.CA: "positive"}))
            predictions[f"fn{i}"] = "negative"
        run = evaluate(records, predictions, TaskKind.CA)
        assert run.overall["recall"] == pytest.approx(66.67, abs=0.01)
        assert run.overall["f1"] == pytest.approx(72.73, abs=0.01)

    def test_segment_filter(self):
        records = [
            _record("m1", "Python", "merged", {TaskKind.CA: "positive"}),
            _record("c1", "Python", "closed", {TaskKind.CA: "positive"}),
        ]
        predictions = {"m1": "positive", "c1": "negative"}
        merged_run = evaluate(records, predictions, TaskKind.CA, segment="merged")
        assert merged_run.overall["n"] == 1
        assert merged_run.overall["recall"] == 100.0

    def test_label_gaps_are_listed_not_dropped(self):
        records = [
            _record("ok", "Python", "merged", {TaskKind.CA: "positive"}),
            _record("nolabel", "Python", "merged", {}),
            _record("nopred", "Python", "merged", {TaskKind.CA: "negative"}),
        ]
        run = evaluate(records, {"ok": "positive"}, TaskKind.CA)
        reasons = {s["sha"]: s["reason"] for s in run.skipped}
        assert "no CA label" in reasons["nolabel"]
        assert "no prediction" in reasons["nopred"]
        assert run.overall["n"] == 1

    def test_order_invariance(self):
        records = [
            _record(f"s{i}", "Ruby", "merged" if i % 2 else "closed",
                    {TaskKind.CA: "positive" if i % 3 else "negative"})
            for i in range(12)
        ]
        predictions = {r.sha: "positive" for r in records}
        forward = evaluate(records, predictions, TaskKind.CA)
        backward = evaluate(list(reversed(records)), predictions, TaskKind.CA)
        assert forward.overall == backward.overall

    def test_vulnerability_hit_rates_and_language_split(self):
        records, predictions = [], {}
        # merged: 4 flagged of 6, 3 confirmed among flagged
        for i in range(6):
            sha = f"m{i}"
            records.append(_record(sha, "Go", "merged", {TaskKind.VA: i < 3}))
            predictions[sha] = i < 4
        # closed: 2 flagged of 4, 1 confirmed among flagged
        for i in range(4):
            sha = f"c{i}"
            records.append(_record(sha, "Go", "closed", {TaskKind.VA: i < 1}))
            predictions[sha] = i < 2
        run = evaluate(records, predictions, TaskKind.VA)
        assert run.overall["find"] == 6
        assert run.overall["confirm"] == 4
        assert run.overall["rate_cr"] == pytest.approx(100 * 4 / 6, abs=1e-9)
        assert run.overall["rate_ca"] == pytest.approx(100 * 4 / 10, abs=1e-9)
        go = run.per_language["Go"]
        assert go["rate_merge"] == pytest.approx(100 * 3 / 6, abs=1e-9)
        assert go["rate_close"] == pytest.approx(100 * 1 / 4, abs=1e-9)
        assert go["rate_avg"] == pytest.approx(100 * 4 / 10, abs=1e-9)
        table = render_language_rate_table(run.per_language)
        assert "Rate_avg" in table and "Go" in table

    def test_revision_mean_edit_progress(self):
        record = _record("r1", "Python", "merged", {TaskKind.CR: "keep\nnew line"})
        # source (new side of diff) = "keep\nnew"
        run = evaluate([record], {"r1": "keep\nnew line"}, TaskKind.CR)
        assert run.overall["mean_ep"] == 100.0
        worse = evaluate([record], {"r1": "zzzzzzzz"}, TaskKind.CR)
        assert worse.overall["mean_ep"] < 0

    def test_bad_prediction_domain_is_skipped(self):
        records = [_record("x", "Python", "merged", {TaskKind.CA: "positive"})]
        run = evaluate(records, {"x": "maybe"}, TaskKind.CA)
        assert run.overall["n"] == 0
        assert any("not positive/negative" in s["reason"] for s in run.skipped)
