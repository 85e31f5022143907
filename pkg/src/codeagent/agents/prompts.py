"""Prompt templates and deterministic prompt rendering.

Every phase-2/3 answer must end with machine-readable output: a
``VERDICT: <value>`` line per task, plus a fenced code block when a
revision is produced.  The expected shapes are encoded as answer
patterns so the quality gate can check adherence and the verdict
extractor stays trivial.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..core import ReviewRequest, TaskKind
from ..qachecker.scoring import AnswerPattern, Marker
from .roles import Message, RoleCard

DIFF_BYTE_BUDGET = 65536
FILE_BYTE_BUDGET = 8192


class PromptContractError(ValueError):
    """A role was asked to speak in a phase it does not participate in."""


VULNERABILITY_CHECKLIST = """\
1. Insufficient input validation: check for SQL injection, cross-site scripting (XSS), and command injection in new or modified code, especially where user input is processed.
2. Buffer overflows: particularly in lower-level languages, ensure that memory management is handled securely to prevent overflows.
3. Authentication and authorization flaws: evaluate any changes in authentication and authorization logic for weaknesses that could allow unauthorized access or privilege escalation.
4. Sensitive data exposure: assess handling and storage of sensitive information like passwords, private keys, or personal data to prevent exposure.
5. Improper error and exception handling: ensure that errors and exceptions are handled appropriately without revealing sensitive information or causing service disruption.
6. Vulnerabilities in dependency libraries or components: review updates or changes in third-party libraries or components for known vulnerabilities.
7. Cross-site request forgery (CSRF): verify that adequate protection mechanisms are in place against CSRF attacks.
8. Unsafe use of APIs: check for the use of insecure encryption algorithms or other risky API practices.
9. Code injection: look for vulnerabilities related to dynamic code execution.
10. Configuration errors: ensure that no insecure configurations or settings like open debug ports or default passwords have been introduced.
11. Race conditions: analyze for potential data corruption or security issues arising from race conditions.
12. Memory leaks: identify any changes that could potentially lead to memory leaks and resource exhaustion.
13. Improper resource management: check resource management, such as proper closure of file handles or database connections.
14. Inadequate security configurations: assess for any insecure default settings or unencrypted communications.
15. Path traversal and file inclusion vulnerabilities: examine for risks that could allow unauthorized file access or execution.
16. Unsafe deserialization: look for issues that could allow the execution of malicious code or tampering with application logic.
17. XML external entity (XXE) attacks: check if XML processing is secure against XXE attacks.
18. Inconsistent error handling: review error messages to ensure they do not leak sensitive system details.
19. Server-side request forgery (SSRF): analyze for vulnerabilities that could be exploited to attack internal systems.
20. Unsafe redirects and forwards: check for vulnerabilities leading to phishing or redirection attacks.
21. Use of deprecated or unsafe functions and commands: identify usage of any such functions and commands in the code.
22. Code leakages and hardcoded sensitive information: look for hardcoded passwords, keys, or other sensitive data in the code.
23. Unencrypted communications: verify that data transmissions are securely encrypted to prevent interception and tampering.
24. Mobile code security issues: for mobile applications, ensure proper handling of permission requests and secure data storage.
25. Cloud service configuration errors: review any cloud-based configurations for potential data leaks or unauthorized access."""

CA_INSTRUCTION = """\
Analyze the consistency between the commit message and the code change. Decide whether the commit message accurately describes the intent of the diff: compare what the message claims with what the added and deleted lines actually do, and point at the specific lines that support your judgement. Explain the reasoning, then conclude with a final line reading exactly VERDICT: CONSISTENT or VERDICT: INCONSISTENT."""

VA_INSTRUCTION = f"""\
Analyze whether the code change introduces a vulnerability. Work through the following risk factors and report any that apply to the added or modified lines:

{VULNERABILITY_CHECKLIST}

Explain the reasoning with references to concrete lines, then conclude with a final line reading exactly VERDICT: VULNERABLE or VERDICT: NOT_VULNERABLE."""

FA_INSTRUCTION = """\
Analyze the formatting consistency between the code change and the original files. Check indentation style, naming conventions, spacing, and brace or block layout of the added lines against the surrounding code, and point at the specific lines that support your judgement. Explain the reasoning, then conclude with a final line reading exactly VERDICT: CONSISTENT or VERDICT: INCONSISTENT."""

CR_INSTRUCTION = """\
Suggest a revision of the code change that addresses every problem found during the review. If a rewrite is warranted, include the complete revised code inside a fenced code block (```) and explain each edit; if the change is already acceptable, say why. Conclude with a final line reading exactly VERDICT: REVISED or VERDICT: NO_REVISION."""

TASK_INSTRUCTIONS: Mapping[TaskKind, str] = {
    TaskKind.CA: CA_INSTRUCTION,
    TaskKind.VA: VA_INSTRUCTION,
    TaskKind.FA: FA_INSTRUCTION,
    TaskKind.CR: CR_INSTRUCTION,
}

GOAL_INSTRUCTIONS: Mapping[str, str] = {
    "modality_sync": (
        "Confirm the modality of the submitted input: decide whether the "
        "change touches code, documents, or a mix of both, and name the "
        "files that drive the decision."
    ),
    "language_sync": (
        "Confirm the programming language of the submitted change; name the "
        "files whose extensions drive the decision."
    ),
    "code_alignment": (
        "Align the code with the review findings: rewrite the problematic "
        "parts of the change so every confirmed finding is addressed. "
        "Include the complete revised code inside a fenced code block (```) "
        "and explain how each finding was resolved."
    ),
    "summary_document": (
        "Summarize the whole review for the stakeholders: the verdict of "
        "each analysis, the evidence behind it, and the revision if one was "
        "produced. Write it as a short, self-contained review document."
    ),
    "final_decision": (
        "Write the final conclusion of the review for all stakeholders, "
        "stating whether the change is ready to land and what must happen "
        "next."
    ),
}

_VERDICT_RATIONALE_MARKER = Marker(
    label="a rationale sentence before the verdict",
    pattern=r"(?im)^(?!\s*verdict\s*:)\s*\S+(?:\s+\S+){2,}",
)

_FENCED_BLOCK_MARKER = Marker(
    label="the revised code inside a fenced code block (```)",
    pattern=r"```",
)


def _verdict_marker(values: str) -> Marker:
    return Marker(
        label=f'a final line "VERDICT: <{values}>"',
        pattern=rf"(?im)^\s*verdict\s*:\s*(?:{values})\b",
    )


ANSWER_PATTERNS: Mapping[str, AnswerPattern] = {
    TaskKind.CA.value: AnswerPattern(
        name="ca",
        markers=(_verdict_marker("consistent|inconsistent"), _VERDICT_RATIONALE_MARKER),
    ),
    TaskKind.VA.value: AnswerPattern(
        name="va",
        markers=(_verdict_marker(r"vulnerable|not[_ ]vulnerable"), _VERDICT_RATIONALE_MARKER),
    ),
    TaskKind.FA.value: AnswerPattern(
        name="fa",
        markers=(_verdict_marker("consistent|inconsistent"), _VERDICT_RATIONALE_MARKER),
    ),
    TaskKind.CR.value: AnswerPattern(
        name="cr",
        markers=(
            _verdict_marker(r"revised|no[_ ]revision"),
            _VERDICT_RATIONALE_MARKER,
            _FENCED_BLOCK_MARKER,
        ),
    ),
    "code_alignment": AnswerPattern(
        name="code_alignment",
        markers=(_FENCED_BLOCK_MARKER, _VERDICT_RATIONALE_MARKER),
    ),
}


def goal_key(goal: TaskKind | str) -> str:
    return goal.value if isinstance(goal, TaskKind) else goal


def pattern_for_goal(goal: TaskKind | str) -> AnswerPattern | None:
    return ANSWER_PATTERNS.get(goal_key(goal))


def instruction_for_goal(goal: TaskKind | str) -> str:
    if isinstance(goal, TaskKind):
        return TASK_INSTRUCTIONS[goal]
    try:
        return GOAL_INSTRUCTIONS[goal]
    except KeyError:
        raise PromptContractError(f"unknown conversation goal {goal!r}") from None


def truncate_middle(text: str, byte_budget: int, label: str = "bytes") -> str:
    """Keep the head and tail halves of ``text`` within ``byte_budget`` bytes.

    The retained head and tail are each ``byte_budget // 2`` bytes,
    trimmed down to character boundaries; the omission marker sits
    between them and is not counted against the budget.
    """
    raw = text.encode("utf-8")
    if len(raw) <= byte_budget:
        return text
    half = byte_budget // 2
    head = raw[:half].decode("utf-8", errors="ignore")
    tail = raw[len(raw) - half:].decode("utf-8", errors="ignore")
    omitted = len(raw) - len(head.encode("utf-8")) - len(tail.encode("utf-8"))
    return f"{head}\n[... {omitted} {label} omitted ...]\n{tail}"


def render_prompt(
    role: RoleCard,
    goal: TaskKind | str,
    request: ReviewRequest,
    history: Sequence[Message] = (),
    *,
    phase: int,
    extra_context: Mapping[str, str] | None = None,
    diff_byte_budget: int = DIFF_BYTE_BUDGET,
    file_byte_budget: int = FILE_BYTE_BUDGET,
) -> str:
    """Deterministically render the question text for one conversation turn."""
    if phase not in role.capabilities:
        raise PromptContractError(
            f"role {role.name} does not participate in phase {phase} "
            f"(capabilities: {role.capabilities})"
        )
    parts = [
        role.system_prompt,
        "",
        "[Task]",
        instruction_for_goal(goal),
        "",
        "[Commit message]",
        request.commit_message,
        "",
        "[Diff]",
        truncate_middle(request.diff, diff_byte_budget, label="diff bytes"),
    ]
    if request.original_files:
        parts.extend(["", "[Original files]"])
        for source in request.original_files:
            parts.append(f"--- {source.path} ---")
            parts.append(truncate_middle(source.content, file_byte_budget, label="file bytes"))
    if extra_context:
        parts.extend(["", "[Context]"])
        for key in sorted(extra_context):
            parts.append(f"{key}: {extra_context[key]}")
    if history:
        parts.extend(["", "[Conversation so far]"])
        for message in history:
            parts.append(f"{message.speaker}: {message.content}")
    return "\n".join(parts)
