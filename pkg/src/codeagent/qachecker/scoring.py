"""Answer-quality scoring for the conversation gate.

The combined score of a question/answer pair is a weighted mean of
three bounded components:

* relevance   — cosine similarity of term-frequency vectors,
* specificity — density of technical terms in the answer,
* coherence   — connective density, pronoun resolution, and adherence
                to the expected answer shape.

All scoring is pure and deterministic; word lists are plain UTF-8
word-per-line files with shipped defaults.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

_WORD_RE = re.compile(r"\w+")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_EDGE_PUNCT = ".,;:!?\"'()[]{}<>`*"

# Third-person pronouns and demonstratives; first/second person refer to
# the dialogue participants and never dangle.
PRONOUNS = frozenset(
    {
        "it", "its", "itself",
        "they", "them", "their", "theirs", "themselves",
        "he", "him", "his", "himself",
        "she", "her", "hers", "herself",
        "this", "that", "these", "those",
    }
)

_IDENTIFIER_PATTERNS = (
    re.compile(r"_"),            # snake_case or any underscore
    re.compile(r"\d"),           # version numbers, line numbers, counts
    re.compile(r"[a-z][A-Z]"),   # camelCase
    re.compile(r"\w\.\w"),       # dotted path / file name
)


def _load_words(name: str) -> tuple[str, ...]:
    text = resources.files("codeagent.qachecker").joinpath(f"data/{name}").read_text("utf-8")
    return tuple(w.strip().lower() for w in text.splitlines() if w.strip())


def load_word_file(path: str | Path) -> tuple[str, ...]:
    return tuple(
        w.strip().lower()
        for w in Path(path).read_text("utf-8").splitlines()
        if w.strip()
    )


@dataclass(frozen=True)
class Marker:
    """One required feature of a conforming answer."""

    label: str
    pattern: str

    def present_in(self, text: str) -> bool:
        return re.search(self.pattern, text) is not None


@dataclass(frozen=True)
class AnswerPattern:
    """Expected structural shape of an answer for one conversation goal."""

    name: str
    markers: tuple[Marker, ...] = ()

    def missing_markers(self, text: str) -> tuple[Marker, ...]:
        return tuple(m for m in self.markers if not m.present_in(text))


@dataclass(frozen=True)
class QAConfig:
    """Gate threshold, mixture weights, and word lists."""

    tau: float = 0.6
    weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    coherence_weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    stopwords: frozenset[str] = field(default_factory=frozenset)
    connectives: tuple[str, ...] = ()
    technical_lexicon: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")
        for name, triple in (("weights", self.weights),
                             ("coherence_weights", self.coherence_weights)):
            if len(triple) != 3 or any(w < 0 for w in triple):
                raise ValueError(f"{name} must be three non-negative numbers")
            if abs(sum(triple) - 1.0) > 1e-9:
                raise ValueError(f"{name} must sum to 1, got {sum(triple)}")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "QAConfig":
        base = default_config()
        stopwords = base.stopwords
        connectives = base.connectives
        lexicon = base.technical_lexicon
        if "stopword_file" in data:
            stopwords = frozenset(load_word_file(data["stopword_file"]))
        if "connective_file" in data:
            connectives = load_word_file(data["connective_file"])
        if "lexicon_file" in data:
            lexicon = frozenset(load_word_file(data["lexicon_file"]))
        return cls(
            tau=data.get("tau", base.tau),
            weights=tuple(data.get("weights", base.weights)),
            coherence_weights=tuple(data.get("coherence_weights", base.coherence_weights)),
            stopwords=stopwords,
            connectives=connectives,
            technical_lexicon=lexicon,
        )


@lru_cache(maxsize=1)
def default_config() -> QAConfig:
    return QAConfig(
        stopwords=frozenset(_load_words("stopwords.txt")),
        connectives=_load_words("connectives.txt"),
        technical_lexicon=frozenset(_load_words("lexicon.txt")),
    )


@dataclass(frozen=True)
class QualityScore:
    relevance: float
    specificity: float
    coherence: float
    combined: float

    def components(self) -> tuple[tuple[str, float], ...]:
        """(name, value) pairs in the fixed tie-break order."""
        return (
            ("relevance", self.relevance),
            ("specificity", self.specificity),
            ("coherence", self.coherence),
        )


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


def content_tokens(text: str, config: QAConfig) -> list[str]:
    """Lowercased word tokens with stopwords removed."""
    return [t for t in _WORD_RE.findall(text.lower()) if t not in config.stopwords]


def sentences(text: str) -> list[str]:
    return [s for s in _SENTENCE_SPLIT_RE.split(text.strip()) if s.strip()]


def relevance(question: str, answer: str, config: QAConfig | None = None) -> float:
    """Cosine similarity of term-frequency vectors over content tokens."""
    config = config or default_config()
    q_vec = Counter(content_tokens(question, config))
    a_vec = Counter(content_tokens(answer, config))
    if not q_vec or not a_vec:
        return 0.0
    dot = sum(count * a_vec[tok] for tok, count in q_vec.items())
    norm = math.sqrt(sum(c * c for c in q_vec.values())) * math.sqrt(
        sum(c * c for c in a_vec.values())
    )
    return _clamp(dot / norm)


def is_technical_term(token: str, config: QAConfig | None = None) -> bool:
    config = config or default_config()
    if token.lower() in config.technical_lexicon:
        return True
    return any(p.search(token) for p in _IDENTIFIER_PATTERNS)


def specificity(answer: str, config: QAConfig | None = None) -> float:
    """Share of the answer's words that are technical content terms."""
    config = config or default_config()
    words = answer.split()
    if not words:
        return 0.0
    technical = 0
    for word in words:
        stripped = word.strip(_EDGE_PUNCT)
        if not stripped or stripped.lower() in config.stopwords:
            continue
        if is_technical_term(stripped, config):
            technical += 1
    return _clamp(technical / len(words))


def connective_density(answer: str, config: QAConfig) -> float:
    sents = sentences(answer)
    if not sents:
        return 0.0
    lowered = answer.lower()
    count = 0
    for connective in config.connectives:
        count += len(re.findall(rf"\b{re.escape(connective)}\b", lowered))
    return min(1.0, count / len(sents))


def coreference_consistency(answer: str, config: QAConfig) -> float:
    """Resolved pronouns over pronouns; 1.0 when the text has none.

    A pronoun counts as resolved when a noun-like token (alphabetic,
    neither stopword nor pronoun) appears earlier in the same sentence
    or anywhere in the previous one.
    """
    sents = [_WORD_RE.findall(s.lower()) for s in sentences(answer)]
    total = 0
    resolved = 0
    for idx, tokens in enumerate(sents):
        prev_has_noun = idx > 0 and any(_is_nounish(t, config) for t in sents[idx - 1])
        seen_noun = False
        for token in tokens:
            if token in PRONOUNS:
                total += 1
                if seen_noun or prev_has_noun:
                    resolved += 1
            elif _is_nounish(token, config):
                seen_noun = True
    if total == 0:
        return 1.0
    return resolved / total


def _is_nounish(token: str, config: QAConfig) -> bool:
    return token.isalpha() and token not in config.stopwords and token not in PRONOUNS


def pattern_adherence(answer: str, pattern: AnswerPattern | None) -> float:
    if pattern is None or not pattern.markers:
        return 1.0
    present = sum(1 for m in pattern.markers if m.present_in(answer))
    return present / len(pattern.markers)


def coherence(
    answer: str,
    pattern: AnswerPattern | None = None,
    config: QAConfig | None = None,
) -> float:
    """Weighted mix of connective density, coreference, and shape adherence."""
    config = config or default_config()
    a, b, c = config.coherence_weights
    return _clamp(
        a * _clamp(connective_density(answer, config))
        + b * _clamp(coreference_consistency(answer, config))
        + c * _clamp(pattern_adherence(answer, pattern))
    )


def score(
    question: str,
    answer: str,
    config: QAConfig | None = None,
    pattern: AnswerPattern | None = None,
) -> QualityScore:
    """Full quality assessment of an answer against its question."""
    config = config or default_config()
    rel = relevance(question, answer, config)
    spec = specificity(answer, config)
    coh = coherence(answer, pattern, config)
    alpha, beta, gamma = config.weights
    return QualityScore(
        relevance=rel,
        specificity=spec,
        coherence=coh,
        combined=_clamp(alpha * rel + beta * spec + gamma * coh),
    )


def top_missing_keyphrases(
    question: str,
    answer: str,
    config: QAConfig | None = None,
    limit: int = 3,
) -> list[str]:
    """Most frequent question phrases that never occur in the answer.

    Candidates are adjacent content-token bigrams followed by single
    content tokens, ranked by frequency and first appearance.
    """
    config = config or default_config()
    q_tokens = content_tokens(question, config)
    answer_text = " " + " ".join(content_tokens(answer, config)) + " "
    candidates: list[str] = [
        f"{q_tokens[i]} {q_tokens[i + 1]}" for i in range(len(q_tokens) - 1)
    ] + q_tokens
    counts = Counter(candidates)
    first_seen = {}
    for idx, phrase in enumerate(candidates):
        first_seen.setdefault(phrase, idx)
    ranked: list[str] = []
    for phrase in sorted(counts, key=lambda p: (-counts[p], first_seen[p])):
        if f" {phrase} " not in answer_text:
            ranked.append(phrase)
        if len(ranked) >= limit:
            break
    return ranked
