"""Dataset storage, summaries, and the synthetic corpus."""

from __future__ import annotations

import json
import random

import pytest

from codeagent.core import SourceFile, TaskKind
from codeagent.ingest.dataset import (
    DatasetError,
    DatasetRecord,
    load_dataset,
    record_to_dict,
    record_violations,
    summarize,
    write_dataset,
)
from codeagent.ingest.synthetic import (
    CA_MARGINALS,
    FA_MARGINALS,
    PYTHON_CA_CELLS,
    apportion,
    generate_synthetic_records,
)


def make_record(**overrides) -> DatasetRecord:
    base = dict(
        sha="a" * 40,
        repo="demo/repo",
        language="Python",
        pr_status="merged",
        task_labels={TaskKind.CA: "positive"},
        commit_message="msg",
        diff="--- a.py\n+++ a.py\n@@ -1,1 +1,1 @@\n-x\n+y\n",
        original_files=(SourceFile("a.py", "x\n"),),
        created_at="2023-06-01T00:00:00Z",
    )
    base.update(overrides)
    return DatasetRecord(**base)


class TestRecordValidation:
    def test_valid_record(self):
        assert record_violations(make_record()) == []

    def test_language_must_be_one_of_nine(self):
        violations = record_violations(make_record(language="Rust"))
        assert any("language" in v for v in violations)

    def test_status_must_be_merged_or_closed(self):
        violations = record_violations(make_record(pr_status="unknown"))
        assert any("pr_status" in v for v in violations)

    def test_label_domains(self):
        bad_ca = make_record(task_labels={TaskKind.CA: "maybe"})
        assert any("CA label" in v for v in record_violations(bad_ca))
        bad_va = make_record(task_labels={TaskKind.VA: "yes"})
        assert any("VA label" in v for v in record_violations(bad_va))
        good_cr = make_record(task_labels={TaskKind.CR: "revised text"})
        assert record_violations(good_cr) == []


class TestLoadAndWrite:
    def test_round_trip(self, tmp_path):
        records = [make_record(sha=f"{i:040x}") for i in range(5)]
        path = tmp_path / "data.jsonl"
        assert write_dataset(records, path) == 5
        loaded = load_dataset(path)
        assert loaded.records == records
        assert loaded.rejected == []

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        loaded = load_dataset(path)
        assert loaded.records == []
        assert summarize(loaded.records).counts == {}

    def test_bad_line_raises_with_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(record_to_dict(make_record()))
        path.write_text(good + "\n{not json}\n", encoding="utf-8")
        with pytest.raises(DatasetError) as exc:
            load_dataset(path)
        assert exc.value.line == 2

    def test_invariant_violations_are_rejected_not_raised(self, tmp_path):
        path = tmp_path / "mixed.jsonl"
        good = record_to_dict(make_record())
        bad = record_to_dict(make_record(language="Rust", sha="b" * 40))
        path.write_text(
            json.dumps(good) + "\n" + json.dumps(bad) + "\n", encoding="utf-8"
        )
        loaded = load_dataset(path)
        assert len(loaded.records) == 1
        assert len(loaded.rejected) == 1
        line, reason = loaded.rejected[0]
        assert line == 2 and "language" in reason

    def test_externalized_blobs_round_trip(self, tmp_path):
        big = make_record(original_files=(SourceFile("big.py", "x" * 4096),))
        path = tmp_path / "ext.jsonl"
        write_dataset([big], path, externalize_over=1024)
        raw = path.read_text(encoding="utf-8")
        assert "content_ref" in raw and "x" * 100 not in raw
        blob_dir = tmp_path / "ext.blobs"
        assert any(blob_dir.iterdir())
        loaded = load_dataset(path)
        assert loaded.records[0] == big


class TestSummarize:
    def test_counts_by_all_dimensions(self):
        records = [
            make_record(sha="1" * 40),
            make_record(sha="2" * 40, pr_status="closed",
                        task_labels={TaskKind.CA: "negative"}),
            make_record(sha="3" * 40, language="Go",
                        task_labels={TaskKind.FA: "positive", TaskKind.VA: True}),
        ]
        summary = summarize(records)
        assert summary.count(TaskKind.CA, "merged", "positive") == 1
        assert summary.count(TaskKind.CA, "closed", "negative") == 1
        assert summary.count(TaskKind.FA, "merged", "positive", "Go") == 1
        assert summary.count(TaskKind.VA, "merged", "confirmed") == 1
        assert summary.count(TaskKind.CA) == 2

    def test_permutation_invariance(self):
        records = generate_synthetic_records()[:400]
        shuffled = records[:]
        random.Random(5).shuffle(shuffled)
        assert summarize(records).counts == summarize(shuffled).counts

    def test_json_shape(self):
        summary = summarize([make_record()])
        data = summary.to_json_dict()
        assert data["CA"]["merged"]["positive"]["Python"] == 1
        assert data["CA"]["merged"]["positive"]["total"] == 1


class TestApportion:
    def test_sums_and_caps(self):
        weights = [10, 20, 30]
        shares = apportion(17, weights)
        assert sum(shares) == 17
        assert all(0 <= s <= w for s, w in zip(shares, weights))

    def test_deterministic(self):
        assert apportion(7, [3, 3, 3]) == apportion(7, [3, 3, 3])

    def test_zero_total(self):
        assert apportion(0, [5, 5]) == [0, 0]


@pytest.fixture(scope="module")
def records():
    return generate_synthetic_records()


class TestSyntheticCorpus:
    def test_total_size(self, records):
        assert len(records) == 3545

    def test_every_record_is_schema_valid(self, records):
        assert not any(record_violations(r) for r in records)

    def test_ca_marginals(self, records):
        summary = summarize(records)
        for segment, (positive, negative) in CA_MARGINALS.items():
            assert summary.count(TaskKind.CA, segment, "positive") == positive
            assert summary.count(TaskKind.CA, segment, "negative") == negative

    def test_fa_marginals(self, records):
        summary = summarize(records)
        for segment, (positive, negative) in FA_MARGINALS.items():
            assert summary.count(TaskKind.FA, segment, "positive") == positive
            assert summary.count(TaskKind.FA, segment, "negative") == negative

    def test_python_ca_cells(self, records):
        summary = summarize(records)
        for segment, (positive, negative) in PYTHON_CA_CELLS.items():
            assert summary.count(TaskKind.CA, segment, "positive", "Python") == positive
            assert summary.count(TaskKind.CA, segment, "negative", "Python") == negative

    def test_deterministic_generation(self, records):
        again = generate_synthetic_records()
        assert [record_to_dict(r) for r in again[:50]] == [
            record_to_dict(r) for r in records[:50]
        ]
        assert len(again) == len(records)

    def test_shas_unique(self, records):
        shas = [r.sha for r in records]
        assert len(set(shas)) == len(shas)
