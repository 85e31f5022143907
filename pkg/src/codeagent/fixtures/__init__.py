"""Bundled demo change and deterministic backend scripts.

The tiny greeting change plus a set of contract-conforming answers
drive the golden pipeline run used by the CLI's scripted backend and by
the test suite; the off-topic script exercises the round cap; the
topic-swapped answer exercises the refinement path of the gate.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Sequence

from ..core import DEFAULT_TASKS, ReviewRequest, SourceFile, TaskKind


def _data(name: str) -> str:
    return resources.files("codeagent.fixtures").joinpath(f"data/{name}").read_text("utf-8")


def data_dir() -> Path:
    """Filesystem location of the bundled fixture data."""
    return Path(str(resources.files("codeagent.fixtures").joinpath("data")))


def tiny_request() -> ReviewRequest:
    """The bundled tiny change as a ready-made review request."""
    return ReviewRequest(
        id="fixture-tiny-greeting",
        commit_message=_data("tiny_message.txt"),
        diff=_data("tiny.diff"),
        original_files=(SourceFile(path="greeting.py", content=_data("files/greeting.py")),),
        language_hint=None,
        pr_status="unknown",
    )


# -- golden answers ----------------------------------------------------------
# Each gated answer must clear the default gate threshold against its own
# rendered question: it restates the question's key terms, names concrete
# identifiers, links its sentences with connectives, and ends with the
# machine-readable verdict the extractor expects.

GOLDEN_MODALITY_ANSWER = (
    "The submitted input is code. Specifically, the change touches greeting.py, "
    "a Python source file, and no document files appear in the diff. "
    "Modality: code."
)

GOLDEN_LANGUAGE_ANSWER = (
    "The programming language of the submitted change is Python. The decision "
    "is driven by greeting.py, whose .py extension and def syntax identify "
    "Python source. Language: Python."
)

GOLDEN_CA_ANSWER = (
    "I analyzed the consistency between the commit message and the code "
    "change, and the commit message accurately describes the intent of the "
    "diff. Specifically, the commit message says to use str.format for the "
    "greeting message and to replace the string concatenation in "
    "greet_user, and the diff does exactly that: the deleted line is\n"
    "-    return \"Hello \" + name\n"
    "and the added lines are\n"
    "+    greeting = \"Hello, {}!\".format(name)\n"
    "+    return greeting\n"
    "Therefore the added and deleted lines in greeting.py match what the "
    "commit message claims, because the greeting now reads \"Hello, name!\" "
    "via str.format. Consequently the consistency analysis between the "
    "commit message and the code change supports the judgement below.\n"
    "VERDICT: CONSISTENT"
)

GOLDEN_VA_ANSWER = (
    "I analyzed whether the code change introduces a vulnerability, working "
    "through the risk factors against the added and modified lines of the "
    "diff, and the code change does not introduce a vulnerability. "
    "Specifically, the added lines\n"
    "+    greeting = \"Hello, {}!\".format(name)\n"
    "+    return greeting\n"
    "only build a greeting message in greeting.py; therefore there is no "
    "insufficient input validation, no SQL injection, no cross-site "
    "scripting (XSS), and no command injection, because no user input is "
    "processed in the new or modified code. Furthermore there are no buffer "
    "overflows, no authentication and authorization flaws, no sensitive "
    "data exposure, and no improper error and exception handling, since the "
    "change touches no passwords, private keys, or personal data. Moreover "
    "the change pulls in no dependency libraries or components, performs no "
    "dynamic code execution, no unsafe deserialization, no XML processing, "
    "and no unsafe redirects, so code injection, XXE attacks, and SSRF are "
    "ruled out. Finally there are no race conditions, no memory leaks, no "
    "improper resource management, no path traversal or file inclusion "
    "vulnerabilities, no hardcoded sensitive information, no unencrypted "
    "communications, and no insecure configurations introduced by "
    "greet_user. In short, every check on the vulnerability checklist "
    "confirms that the new code ensures secure handling and introduces no "
    "vulnerabilities into the code.\n"
    "VERDICT: NOT_VULNERABLE"
)

GOLDEN_FA_ANSWER = (
    "I analyzed the formatting consistency between the code change and the "
    "original files, checking the indentation style, naming conventions, "
    "spacing, and block layout of the added lines against the surrounding "
    "code, and the formatting is consistent. Specifically, the added lines\n"
    "+    greeting = \"Hello, {}!\".format(name)\n"
    "+    return greeting\n"
    "keep the 4-space indentation style of greeting.py, because greet_user "
    "and farewell_user both indent their bodies the same way in the "
    "original files. Furthermore the naming conventions stay snake_case "
    "(greeting, greet_user, farewell_user), and the spacing around the = "
    "operator matches the surrounding code. Therefore the formatting "
    "consistency analysis between the code change and the original files "
    "supports the judgement below.\n"
    "VERDICT: CONSISTENT"
)

GOLDEN_CR_ANSWER = (
    "I prepared a revision of the code change that addresses every problem "
    "found during the review, so a small rewrite is warranted. "
    "Specifically, the added lines\n"
    "+    greeting = \"Hello, {}!\".format(name)\n"
    "+    return greeting\n"
    "build the greeting message with str.format(name), and the revised code "
    "below rewrites greet_user with an f-string, because f-strings are the "
    "clearer formatting idiom for the greeting message in modern Python "
    "code. Therefore the complete revised code follows inside the fenced "
    "code block, and each edit keeps the behavior of greet_user and the "
    "greeting message identical.\n"
    "```python\n"
    "def greet_user(name):\n"
    "    greeting = f\"Hello, {name}!\"\n"
    "    return greeting\n"
    "```\n"
    "VERDICT: REVISED"
)

GOLDEN_ALIGNMENT_ANSWER = (
    "The code is now aligned with the review findings. Specifically, the "
    "revised code below rewrites greet_user in greeting.py so the greeting "
    "message uses an f-string, because the review suggested the clearer "
    "formatting idiom; therefore every confirmed finding is addressed and "
    "the complete revised code follows inside the fenced code block.\n"
    "```python\n"
    "def greet_user(name):\n"
    "    greeting = f\"Hello, {name}!\"\n"
    "    return greeting\n"
    "\n"
    "\n"
    "def farewell_user(name):\n"
    "    return \"Bye \" + name\n"
    "```"
)

GOLDEN_SUMMARY_ANSWER = (
    "Review document: the greeting change in greeting.py was analyzed on "
    "all requested dimensions. The commit message matches the change, no "
    "vulnerability is introduced, the formatting follows the original "
    "style, and a small revision to an f-string was produced during "
    "alignment. The evidence for each verdict sits in the per-task "
    "transcripts."
)

GOLDEN_FINAL_ANSWER = (
    "Final conclusion: the change is ready to land. Every analysis passed, "
    "the suggested f-string revision is optional polish, and no follow-up "
    "work is required from the author."
)

_GOLDEN_BY_GOAL = {
    "modality_sync": GOLDEN_MODALITY_ANSWER,
    "language_sync": GOLDEN_LANGUAGE_ANSWER,
    TaskKind.CA.value: GOLDEN_CA_ANSWER,
    TaskKind.VA.value: GOLDEN_VA_ANSWER,
    TaskKind.FA.value: GOLDEN_FA_ANSWER,
    TaskKind.CR.value: GOLDEN_CR_ANSWER,
    "code_alignment": GOLDEN_ALIGNMENT_ANSWER,
    "summary_document": GOLDEN_SUMMARY_ANSWER,
    "final_decision": GOLDEN_FINAL_ANSWER,
}

# A fluent, well-structured review of a completely different change; it
# keeps the verdict shape but swaps the topic, so only relevance drops.
TOPIC_SWAPPED_CA_ANSWER = (
    "The stylesheet update does what its title promises. Specifically, the "
    "banner palette in theme.css moves from teal to indigo, and therefore "
    "the navigation header, the footer gradient, and the call-to-action "
    "button all pick up the new brand colors. Moreover the dark-mode "
    "overrides in dark.css stay untouched, so the visual regression risk "
    "is limited to the marketing pages.\n"
    "VERDICT: CONSISTENT"
)

# Scores near zero on every component: wrong topic, no technical terms,
# no connectives, no verdict line.
OFF_TOPIC_ANSWER = (
    "My weekend plans involve hiking near the lake. A picnic basket with "
    "sandwiches sounds perfect. Maybe a swim afterwards."
)


def _ordered(tasks: Sequence[TaskKind]) -> list[TaskKind]:
    requested = set(tasks)
    return [t for t in DEFAULT_TASKS if t in requested]


def golden_script(tasks: Sequence[TaskKind] = DEFAULT_TASKS) -> tuple[str, ...]:
    """Scripted responses for a first-try-pass run over ``tasks``.

    Order matches the default plan: two info-sync answers, one review
    answer per task, the alignment answer (the default tasks always
    trigger alignment via the revision task), and the two document
    answers.
    """
    ordered = _ordered(tasks)
    script = [GOLDEN_MODALITY_ANSWER, GOLDEN_LANGUAGE_ANSWER]
    script.extend(_GOLDEN_BY_GOAL[task.value] for task in ordered)
    if TaskKind.CR in ordered:
        script.append(GOLDEN_ALIGNMENT_ANSWER)
    script.extend([GOLDEN_SUMMARY_ANSWER, GOLDEN_FINAL_ANSWER])
    return tuple(script)


def adversarial_script(
    tasks: Sequence[TaskKind] = DEFAULT_TASKS,
    max_rounds: int = 10,
) -> tuple[str, ...]:
    """A script that never engages: every gated conversation runs to the cap."""
    ordered = _ordered(tasks)
    gated = len(ordered) + (1 if TaskKind.CR in ordered else 0)
    ungated = 4  # two info-sync plus two document conversations
    return (OFF_TOPIC_ANSWER,) * (gated * max_rounds + ungated)


def second_try_script(tasks: Sequence[TaskKind] = (TaskKind.CA,)) -> tuple[str, ...]:
    """Like golden_script, but the first review answer drifts off topic once."""
    script = list(golden_script(tasks))
    script.insert(2, TOPIC_SWAPPED_CA_ANSWER)
    return tuple(script)
