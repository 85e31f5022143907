"""Language and modality detection for review requests.

The extension map is fixed: the engine recognizes exactly the nine
languages the dataset covers, everything else counts as document
content.
"""

from __future__ import annotations

import posixpath

from ..core import ReviewRequest
from .diffs import changed_paths, parse_unified_diff

NINE_LANGUAGES = (
    "Python",
    "Java",
    "Go",
    "C++",
    "JavaScript",
    "C",
    "C#",
    "PHP",
    "Ruby",
)

LANGUAGE_EXTENSIONS: dict[str, tuple[str, ...]] = {
    "Python": (".py", ".pyi", ".pyw"),
    "Java": (".java",),
    "Go": (".go",),
    "C++": (".cpp", ".cc", ".cxx", ".hpp", ".hh", ".hxx", ".c++"),
    "JavaScript": (".js", ".jsx", ".mjs", ".cjs"),
    "C": (".c",),
    "C#": (".cs",),
    "PHP": (".php", ".phtml"),
    "Ruby": (".rb", ".rake", ".gemspec"),
}

_EXT_TO_LANGUAGE = {
    ext: lang for lang, exts in LANGUAGE_EXTENSIONS.items() for ext in exts
}

# ".h" is claimed by C++ when C++ companions are present, by C otherwise.
AMBIGUOUS_HEADER_EXT = ".h"

CODE_EXTENSIONS = frozenset(_EXT_TO_LANGUAGE) | {AMBIGUOUS_HEADER_EXT}

_HINT_ALIASES = {
    "python": "Python",
    "java": "Java",
    "go": "Go",
    "golang": "Go",
    "c++": "C++",
    "cpp": "C++",
    "cplusplus": "C++",
    "javascript": "JavaScript",
    "js": "JavaScript",
    "c": "C",
    "c#": "C#",
    "csharp": "C#",
    "php": "PHP",
    "ruby": "Ruby",
}


def normalize_language(name: str) -> str | None:
    """Map a free-form language name onto the nine-language vocabulary."""
    return _HINT_ALIASES.get(name.strip().lower())


def _extension(path: str) -> str:
    return posixpath.splitext(path)[1].lower()


def language_of_path(path: str, companions: frozenset[str] = frozenset()) -> str | None:
    """Language of one path; ``companions`` holds the other paths' extensions."""
    ext = _extension(path)
    if ext == AMBIGUOUS_HEADER_EXT:
        cpp_exts = set(LANGUAGE_EXTENSIONS["C++"])
        if companions & cpp_exts:
            return "C++"
        return "C"
    return _EXT_TO_LANGUAGE.get(ext)


def detect_language(req: ReviewRequest) -> str:
    """Majority language of the changed files, or "unknown".

    An explicit ``language_hint`` wins when it names one of the nine
    recognized languages.  Ties break on first appearance order.
    """
    if req.language_hint:
        return normalize_language(req.language_hint) or "unknown"

    paths = changed_paths(parse_unified_diff(req.diff))
    companions = frozenset(_extension(p) for p in paths) - {AMBIGUOUS_HEADER_EXT}
    counts: dict[str, int] = {}
    order: dict[str, int] = {}
    for idx, path in enumerate(paths):
        lang = language_of_path(path, companions)
        if lang is None:
            continue
        counts[lang] = counts.get(lang, 0) + 1
        order.setdefault(lang, idx)
    if not counts:
        return "unknown"
    return max(counts, key=lambda lang: (counts[lang], -order[lang]))


def detect_modality(req: ReviewRequest) -> str:
    """"code" iff every changed path is code, "document" iff none is."""
    paths = changed_paths(parse_unified_diff(req.diff))
    flags = [_extension(p) in CODE_EXTENSIONS for p in paths]
    if all(flags):
        return "code"
    if not any(flags):
        return "document"
    return "mixed"
