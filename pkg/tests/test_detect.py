"""Language and modality detection."""

from __future__ import annotations

from collections import Counter

import pytest

from codeagent.core import ReviewRequest
from codeagent.ingest.detect import (
    NINE_LANGUAGES,
    detect_language,
    detect_modality,
    language_of_path,
    normalize_language,
)

from conftest import request_with_paths


class TestDetectLanguage:
    def test_single_python_file(self):
        assert detect_language(request_with_paths(["a.py"])) == "Python"

    def test_header_tie_broken_by_companion(self):
        assert detect_language(request_with_paths(["a.cpp", "b.h"])) == "C++"

    def test_header_defaults_to_c(self):
        assert detect_language(request_with_paths(["b.h"])) == "C"

    def test_majority_vote(self):
        # Oracle: explicit extension counting.
        paths = ["a.py", "b.py", "c.java"]
        tally = Counter(language_of_path(p) for p in paths)
        assert tally.most_common(1)[0][0] == "Python"
        assert detect_language(request_with_paths(paths)) == "Python"

    def test_hint_wins(self):
        req = request_with_paths(["a.py"])
        hinted = ReviewRequest(
            id=req.id, commit_message=req.commit_message, diff=req.diff,
            original_files=req.original_files, language_hint="go",
        )
        assert detect_language(hinted) == "Go"

    def test_unrecognized_hint_is_unknown(self):
        req = request_with_paths(["a.py"])
        hinted = ReviewRequest(
            id=req.id, commit_message=req.commit_message, diff=req.diff,
            original_files=req.original_files, language_hint="COBOL",
        )
        assert detect_language(hinted) == "unknown"

    def test_no_code_files_is_unknown(self):
        assert detect_language(request_with_paths(["README.md"])) == "unknown"

    def test_tie_breaks_on_first_appearance(self):
        assert detect_language(request_with_paths(["x.java", "y.py"])) == "Java"
        assert detect_language(request_with_paths(["y.py", "x.java"])) == "Python"

    @pytest.mark.parametrize("alias,expected", [
        ("python", "Python"), ("CPP", "C++"), ("c++", "C++"), ("js", "JavaScript"),
        ("csharp", "C#"), ("golang", "Go"), ("Ruby", "Ruby"),
    ])
    def test_normalize_aliases(self, alias, expected):
        assert normalize_language(alias) == expected
        assert expected in NINE_LANGUAGES


class TestDetectModality:
    def test_all_code(self):
        assert detect_modality(request_with_paths(["a.py"])) == "code"

    def test_all_document(self):
        assert detect_modality(request_with_paths(["README.md"])) == "document"

    def test_mixed(self):
        assert detect_modality(request_with_paths(["a.py", "README.md"])) == "mixed"

    def test_unknown_extension_counts_as_document(self):
        assert detect_modality(request_with_paths(["data.xyz"])) == "document"
        assert detect_modality(request_with_paths(["a.go", "data.xyz"])) == "mixed"
