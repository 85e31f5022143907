"""Verdict extraction from conversation transcripts.

Answers carry a machine-readable ``VERDICT: <value>`` line (case
insensitive, last occurrence wins) and, for revisions, the revised code
inside a fenced block.  A missing or unparseable verdict yields an
inconclusive verdict, never a crash.
"""

from __future__ import annotations

import re
from typing import Mapping, Sequence

from ..core import TaskKind, Verdict
from .conversation import Conversation

_VERDICT_LINE_RE = re.compile(r"^\s*verdict\s*:\s*(.+?)\s*$", re.IGNORECASE | re.MULTILINE)

_FENCED_BLOCK_RE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)

_OUTCOME_SYNONYMS: dict[TaskKind, dict[str, str]] = {
    TaskKind.CA: {"consistent": "consistent", "inconsistent": "inconsistent"},
    TaskKind.FA: {"consistent": "consistent", "inconsistent": "inconsistent"},
    TaskKind.VA: {
        "vulnerable": "vulnerable",
        "not_vulnerable": "not_vulnerable",
        "not vulnerable": "not_vulnerable",
    },
    TaskKind.CR: {
        "revised": "revised",
        "no_revision": "no_revision",
        "no revision": "no_revision",
    },
}

INCONCLUSIVE_RATIONALE = "extraction failed"


def last_verdict_value(text: str) -> str | None:
    """The value of the last VERDICT line in ``text``, lowercased."""
    matches = _VERDICT_LINE_RE.findall(text)
    if not matches:
        return None
    return matches[-1].strip().lower()


def last_fenced_block(texts: Sequence[str]) -> str | None:
    """Content of the last fenced code block across ``texts``, in order."""
    block: str | None = None
    for text in texts:
        for match in _FENCED_BLOCK_RE.finditer(text):
            block = match.group(1)
    return block


def _rationale_from(answer: str) -> str:
    without_verdicts = _VERDICT_LINE_RE.sub("", answer).strip()
    return without_verdicts or answer.strip() or INCONCLUSIVE_RATIONALE


def conversation_revised_code(conversation: Conversation | None) -> str | None:
    if conversation is None:
        return None
    texts: list[str] = []
    for turn in conversation.turns:
        texts.append(turn.question)
        texts.append(turn.answer)
    return last_fenced_block(texts)


def extract_verdict(
    task: TaskKind,
    conversation: Conversation | None,
    revised_code: str | None = None,
) -> Verdict:
    """Build the verdict for one task from its review conversation."""
    code = revised_code if task is TaskKind.CR else None
    if conversation is None or not conversation.turns:
        return Verdict(task=task, outcome="inconclusive",
                       rationale=INCONCLUSIVE_RATIONALE, revised_code=code)
    answer = conversation.final_answer
    raw = last_verdict_value(answer)
    outcome = None if raw is None else _OUTCOME_SYNONYMS[task].get(raw)
    if outcome is None:
        return Verdict(task=task, outcome="inconclusive",
                       rationale=INCONCLUSIVE_RATIONALE, revised_code=code)
    return Verdict(task=task, outcome=outcome,
                   rationale=_rationale_from(answer), revised_code=code)


def extract_verdicts(
    review_conversations: Mapping[TaskKind, Conversation],
    tasks: Sequence[TaskKind],
    alignment_conversation: Conversation | None = None,
) -> list[Verdict]:
    """One verdict per requested task, in task order.

    The revision text for a CR verdict is the last fenced block of the
    alignment-phase transcript, when that phase ran.
    """
    revised = conversation_revised_code(alignment_conversation)
    return [
        extract_verdict(task, review_conversations.get(task),
                        revised_code=revised if task is TaskKind.CR else None)
        for task in tasks
    ]
