"""Unified diff parsing and rendering.

Accepts both plain ``--- / +++ / @@`` diffs and git-style diffs (the
``diff --git`` / ``index`` / mode / rename header lines are understood
and folded into the delta).  Rendering emits the canonical plain form;
``parse(render(parse(text)))`` always yields the same delta list, and
for canonical input the rendered text is byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DEV_NULL = "/dev/null"

LINE_TAGS = ("context", "add", "del")

_HUNK_HEADER_RE = re.compile(
    r"^@@ -(?P<old_start>\d+)(?:,(?P<old_len>\d+))? "
    r"\+(?P<new_start>\d+)(?:,(?P<new_len>\d+))? @@(?P<section>.*)$"
)

# Git extended header lines that carry no hunk content.
_SKIP_HEADER_RE = re.compile(
    r"^(index |old mode |new mode |new file mode |deleted file mode "
    r"|similarity index |dissimilarity index |copy from |copy to |Binary files )"
)

NO_NEWLINE_MARKER = "\\ No newline at end of file"


class DiffParseError(ValueError):
    """Raised for malformed diff text; carries the 1-based input line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.message = message
        self.line = line


@dataclass(frozen=True)
class HunkLine:
    """One body line of a hunk.

    ``no_newline`` marks a line followed by the ``\\ No newline at end
    of file`` marker in the source text.
    """

    tag: str
    text: str
    no_newline: bool = False

    def __post_init__(self) -> None:
        if self.tag not in LINE_TAGS:
            raise ValueError(f"bad line tag {self.tag!r}")


@dataclass(frozen=True)
class Hunk:
    old_start: int
    old_len: int
    new_start: int
    new_len: int
    lines: tuple[HunkLine, ...]
    section: str = ""

    def __post_init__(self) -> None:
        for value in (self.old_start, self.old_len, self.new_start, self.new_len):
            if value < 0:
                raise ValueError("hunk header values must be non-negative")
        old = sum(1 for ln in self.lines if ln.tag in ("context", "del"))
        new = sum(1 for ln in self.lines if ln.tag in ("context", "add"))
        if old != self.old_len or new != self.new_len:
            raise ValueError(
                f"hunk line counts ({old}, {new}) do not match header "
                f"({self.old_len}, {self.new_len})"
            )


@dataclass(frozen=True)
class FileDelta:
    old_path: str
    new_path: str
    hunks: tuple[Hunk, ...]
    change_kind: str

    def __post_init__(self) -> None:
        if self.change_kind not in ("added", "deleted", "modified", "renamed"):
            raise ValueError(f"bad change_kind {self.change_kind!r}")
        if self.change_kind == "added" and self.old_path != DEV_NULL:
            raise ValueError("added files must use the /dev/null old path")

    @property
    def path(self) -> str:
        """The path the delta is best known by (new side unless deleted)."""
        return self.old_path if self.new_path == DEV_NULL else self.new_path

    def added_lines(self) -> int:
        return sum(1 for h in self.hunks for ln in h.lines if ln.tag == "add")

    def deleted_lines(self) -> int:
        return sum(1 for h in self.hunks for ln in h.lines if ln.tag == "del")


def _strip_label(label: str) -> str:
    # Drop the optional timestamp ("path\t2023-04-01 ...") and the git
    # a/ b/ prefixes; keep the /dev/null sentinel untouched.
    label = label.split("\t", 1)[0].strip()
    if label == DEV_NULL:
        return label
    if label.startswith(("a/", "b/")):
        label = label[2:]
    return label


def _infer_kind(old_path: str, new_path: str, renamed: bool) -> str:
    if old_path == DEV_NULL:
        return "added"
    if new_path == DEV_NULL:
        return "deleted"
    if renamed or old_path != new_path:
        return "renamed"
    return "modified"


def parse_unified_diff(text: str) -> list[FileDelta]:
    """Parse unified diff text into an ordered list of file deltas."""
    lines = text.split("\n")
    # split() leaves a trailing "" when the text ends with a newline.
    if lines and lines[-1] == "":
        lines.pop()

    deltas: list[FileDelta] = []
    i = 0
    n = len(lines)

    current_old: str | None = None
    current_new: str | None = None
    current_hunks: list[Hunk] = []
    rename_from: str | None = None
    rename_to: str | None = None
    saw_git_header = False

    def flush(at_line: int) -> None:
        nonlocal current_old, current_new, current_hunks, rename_from, rename_to
        nonlocal saw_git_header
        if current_old is None and rename_from is None:
            if saw_git_header:
                raise DiffParseError("file header without --- / +++ labels", at_line)
            return
        renamed = rename_from is not None
        old_path = current_old if current_old is not None else rename_from
        new_path = current_new if current_new is not None else rename_to
        assert old_path is not None and new_path is not None
        deltas.append(
            FileDelta(
                old_path=old_path,
                new_path=new_path,
                hunks=tuple(current_hunks),
                change_kind=_infer_kind(old_path, new_path, renamed),
            )
        )
        current_old = current_new = None
        current_hunks = []
        rename_from = rename_to = None
        saw_git_header = False

    while i < n:
        line = lines[i]
        lineno = i + 1

        if line.startswith("diff --git "):
            flush(lineno)
            saw_git_header = True
            i += 1
            continue
        if line.startswith("rename from "):
            rename_from = _strip_label(line[len("rename from "):])
            i += 1
            continue
        if line.startswith("rename to "):
            rename_to = _strip_label(line[len("rename to "):])
            i += 1
            continue
        if _SKIP_HEADER_RE.match(line):
            if line.startswith("Binary files "):
                # Binary entries carry no hunks; drop the whole entry.
                saw_git_header = False
            i += 1
            continue
        if line.startswith("--- "):
            if current_old is not None:
                flush(lineno)
            if i + 1 >= n or not lines[i + 1].startswith("+++ "):
                raise DiffParseError("--- label not followed by +++ label", lineno)
            current_old = _strip_label(line[4:])
            current_new = _strip_label(lines[i + 1][4:])
            i += 2
            continue
        if line.startswith("@@"):
            match = _HUNK_HEADER_RE.match(line)
            if match is None:
                raise DiffParseError(f"malformed hunk header {line!r}", lineno)
            if current_old is None and rename_from is None:
                raise DiffParseError("hunk before any file header", lineno)
            old_len = int(match.group("old_len") or "1")
            new_len = int(match.group("new_len") or "1")
            body: list[HunkLine] = []
            need_old, need_new = old_len, new_len
            i += 1
            while need_old > 0 or need_new > 0:
                if i >= n:
                    raise DiffParseError(
                        f"hunk truncated: still expecting {need_old} old / "
                        f"{need_new} new lines",
                        i,
                    )
                raw = lines[i]
                lineno = i + 1
                if raw.startswith("+"):
                    if need_new <= 0:
                        raise DiffParseError("hunk has more added lines than its header", lineno)
                    body.append(HunkLine("add", raw[1:]))
                    need_new -= 1
                elif raw.startswith("-"):
                    if need_old <= 0:
                        raise DiffParseError("hunk has more deleted lines than its header", lineno)
                    body.append(HunkLine("del", raw[1:]))
                    need_old -= 1
                elif raw.startswith(" ") or raw == "":
                    if need_old <= 0 or need_new <= 0:
                        raise DiffParseError("hunk has more context lines than its header", lineno)
                    body.append(HunkLine("context", raw[1:]))
                    need_old -= 1
                    need_new -= 1
                elif raw.startswith("\\"):
                    if not body:
                        raise DiffParseError("no-newline marker before any hunk line", lineno)
                    prev = body[-1]
                    body[-1] = HunkLine(prev.tag, prev.text, no_newline=True)
                else:
                    raise DiffParseError(
                        f"unexpected line inside hunk (still expecting {need_old} old / "
                        f"{need_new} new lines)",
                        lineno,
                    )
                i += 1
            # A trailing no-newline marker belongs to the hunk's last line.
            if i < n and lines[i].startswith("\\"):
                prev = body[-1]
                body[-1] = HunkLine(prev.tag, prev.text, no_newline=True)
                i += 1
            current_hunks.append(
                Hunk(
                    old_start=int(match.group("old_start")),
                    old_len=old_len,
                    new_start=int(match.group("new_start")),
                    new_len=new_len,
                    lines=tuple(body),
                    section=match.group("section"),
                )
            )
            continue
        if line.strip() == "":
            i += 1
            continue
        raise DiffParseError(f"unexpected line outside any hunk: {line!r}", lineno)

    flush(n)
    if not deltas:
        raise DiffParseError("no file header", 1)
    return deltas


_TAG_PREFIX = {"context": " ", "add": "+", "del": "-"}


def render_file_delta(delta: FileDelta) -> str:
    out: list[str] = [f"--- {delta.old_path}", f"+++ {delta.new_path}"]
    for hunk in delta.hunks:
        out.append(
            f"@@ -{hunk.old_start},{hunk.old_len} "
            f"+{hunk.new_start},{hunk.new_len} @@{hunk.section}"
        )
        for ln in hunk.lines:
            out.append(f"{_TAG_PREFIX[ln.tag]}{ln.text}")
            if ln.no_newline:
                out.append(NO_NEWLINE_MARKER)
    return "\n".join(out) + "\n"


def render_file_deltas(deltas: list[FileDelta]) -> str:
    return "".join(render_file_delta(d) for d in deltas)


def changed_paths(deltas: list[FileDelta]) -> list[str]:
    """Paths touched by the diff, in order of appearance."""
    return [d.path for d in deltas]


def new_side_text(deltas: list[FileDelta]) -> str:
    """The post-change text carried by the diff (context + added lines)."""
    parts = [
        ln.text
        for delta in deltas
        for hunk in delta.hunks
        for ln in hunk.lines
        if ln.tag in ("context", "add")
    ]
    return "\n".join(parts)
