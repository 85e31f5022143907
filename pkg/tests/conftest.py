"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import difflib
from functools import lru_cache

import pytest

from codeagent.core import ReviewRequest, SourceFile


# -- independent oracles -------------------------------------------------------


def oracle_levenshtein(a: str, b: str) -> int:
    """Plain recursive-with-memo edit distance, independent of the
    production two-row implementation."""

    @lru_cache(maxsize=None)
    def dist(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(
            dist(i - 1, j) + 1,
            dist(i, j - 1) + 1,
            dist(i - 1, j - 1) + cost,
        )

    return dist(len(a), len(b))


def count_diff_line_tags(diff_text: str) -> dict[str, tuple[int, int]]:
    """Per-file (added, deleted) line counts by raw text scanning."""
    counts: dict[str, tuple[int, int]] = {}
    current: str | None = None
    for line in diff_text.splitlines():
        if line.startswith("+++ "):
            current = line[4:].split("\t")[0]
            if current.startswith("b/"):
                current = current[2:]
            counts.setdefault(current, (0, 0))
        elif line.startswith("+") and not line.startswith("+++") and current:
            added, deleted = counts[current]
            counts[current] = (added + 1, deleted)
        elif line.startswith("-") and not line.startswith("---") and current:
            added, deleted = counts[current]
            counts[current] = (added, deleted + 1)
    return counts


# -- corpus generation ----------------------------------------------------------

_LANGUAGE_SNIPPETS = {
    "Python": ("app_{i}.py", "def handler_{i}(x):", "    return x + {i}"),
    "Java": ("App{i}.java", "class App{i} {{", "    int f() {{ return {i}; }}"),
    "Go": ("main_{i}.go", "func handler{i}() int {{", "    return {i}"),
    "C++": ("engine_{i}.cpp", "int compute_{i}(int x) {{", "    return x * {i};"),
    "JavaScript": ("index_{i}.js", "function handler{i}(x) {{", "  return x + {i};"),
    "C": ("util_{i}.c", "int util_{i}(int x) {{", "    return x - {i};"),
    "C#": ("Service{i}.cs", "class Service{i} {{", "    int Get() => {i};"),
    "PHP": ("page_{i}.php", "function render_{i}($x) {{", "    return $x . {i};"),
    "Ruby": ("job_{i}.rb", "def perform_{i}(x)", "  x + {i}"),
}

_LANGUAGES = tuple(_LANGUAGE_SNIPPETS)


def make_diff_corpus(count: int = 50) -> list[str]:
    """Deterministic unified diffs across the nine languages.

    Each diff is produced by difflib (an independent reference
    implementation) from a synthetic before/after file pair, with varied
    edit positions so multi-hunk diffs occur.
    """
    corpus: list[str] = []
    for i in range(count):
        language = _LANGUAGES[i % len(_LANGUAGES)]
        name_t, head_t, body_t = _LANGUAGE_SNIPPETS[language]
        path = name_t.format(i=i)
        before = [head_t.format(i=i)]
        for k in range(12):
            before.append(body_t.format(i=k))
        before.append("")

        after = list(before)
        after.insert(2 + (i % 4), f"// inserted {i}" if language != "Python" else f"# inserted {i}")
        del after[6 + (i % 3)]
        if i % 2 == 0:
            after[9] = after[9] + "  "
        if i % 5 == 0:
            after.append(f"trailing {i}")

        lines = difflib.unified_diff(
            before, after, fromfile=path, tofile=path, lineterm="", n=max(1, i % 3)
        )
        corpus.append("\n".join(lines) + "\n")
    return corpus


# -- request fixtures -----------------------------------------------------------


@pytest.fixture
def simple_request() -> ReviewRequest:
    diff = (
        "--- src/calc.py\n"
        "+++ src/calc.py\n"
        "@@ -1,2 +1,3 @@\n"
        " def add(a, b):\n"
        "+    # guard\n"
        "     return a + b\n"
    )
    return ReviewRequest(
        id="req-1",
        commit_message="Add a guard comment to add()",
        diff=diff,
        original_files=(SourceFile("src/calc.py", "def add(a, b):\n    return a + b\n"),),
    )


def request_with_paths(paths: list[str]) -> ReviewRequest:
    """A valid one-hunk-per-file request touching the given paths."""
    deltas = []
    files = []
    for path in paths:
        deltas.append(
            f"--- {path}\n+++ {path}\n@@ -1,1 +1,2 @@\n old line\n+new line\n"
        )
        files.append(SourceFile(path, "old line\n"))
    return ReviewRequest(
        id="req-paths",
        commit_message="touch files",
        diff="".join(deltas),
        original_files=tuple(files),
    )
