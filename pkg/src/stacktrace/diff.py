"""Parse unified-diff text into a structured model of files, hunks and lines.

The parser is tolerant: unknown header lines are skipped, truncated hunks are
accepted (and logged), and only an undecodable hunk range is a hard error.
Whitespace inside content lines is preserved exactly; rating code downstream
depends on the unmodified text.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


class DiffParseError(ValueError):
    """Raised when a hunk range line cannot be decoded."""


_HUNK_RE = re.compile(
    r"^@@ -(?P<old_start>\d+)(?:,(?P<old_len>\d+))?"
    r" \+(?P<new_start>\d+)(?:,(?P<new_len>\d+))? @@(?: (?P<heading>.*))?$"
)


@dataclass
class Hunk:
    """One contiguous change region: heading, added/removed/context lines."""

    heading: str
    added: list[str] = field(default_factory=list)
    removed: list[str] = field(default_factory=list)
    context: list[str] = field(default_factory=list)
    old_start: int = 0
    old_len: int = 0
    new_start: int = 0
    new_len: int = 0

    @property
    def range(self) -> tuple[int, int, int, int]:
        return (self.old_start, self.old_len, self.new_start, self.new_len)


@dataclass
class FileDiff:
    """All hunks of one file, in textual order. Binary or mode-only entries
    carry zero hunks but still count as touched files."""

    path: str
    hunks: list[Hunk] = field(default_factory=list)


@dataclass
class Diff:
    """Ordered map of file path to FileDiff for one commit."""

    files: dict[str, FileDiff] = field(default_factory=dict)

    @property
    def changed_files(self) -> set[str]:
        return set(self.files)


def changed_files(diff: Diff) -> set[str]:
    """All paths touched by the diff."""
    return diff.changed_files


def get_hunks(diff: Diff, path: str) -> list[Hunk]:
    """Hunks of one file, textual order; empty list for untouched paths."""
    entry = diff.files.get(path)
    return entry.hunks if entry is not None else []


def _unquote(path: str) -> str:
    """Undo git's C-style path quoting (core.quotePath)."""
    if len(path) >= 2 and path.startswith('"') and path.endswith('"'):
        try:
            return (
                path[1:-1]
                .encode("latin-1", "backslashreplace")
                .decode("unicode_escape")
                .encode("latin-1")
                .decode("utf-8", "replace")
            )
        except UnicodeError:
            return path[1:-1]
    return path


def _strip_prefix(path: str, prefix: str) -> str:
    return path[len(prefix):] if path.startswith(prefix) else path


def _header_path(line: str, marker: str, prefix: str) -> str | None:
    """Path from a `--- a/...` or `+++ b/...` line, None for /dev/null."""
    raw = line[len(marker):].split("\t", 1)[0].strip()
    if raw == "/dev/null":
        return None
    return _strip_prefix(_unquote(raw), prefix)


def _git_header_new_path(line: str) -> str | None:
    """New-side path from a `diff --git a/X b/Y` line (best effort)."""
    body = line[len("diff --git "):]
    if body.startswith('"'):
        # quoted paths: the second quoted string is the new side
        parts = re.findall(r'"(?:[^"\\]|\\.)*"|\S+', body)
        if parts:
            return _strip_prefix(_unquote(parts[-1]), "b/")
        return None
    cut = body.rfind(" b/")
    if cut == -1:
        return None
    return body[cut + 3:]


def parse_diff(text: str) -> Diff:
    """Decode unified-diff text.

    Every `@@ ... @@ heading` opens a hunk whose heading is the text after
    the closing `@@`; `+`, `-` and space prefixes sort lines into added,
    removed and context. Hunk content is consumed by the declared line
    counts, which disambiguates removed lines starting with `--` from file
    headers. `\\ No newline at end of file` markers are dropped.
    """
    files: dict[str, FileDiff] = {}
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # a trailing newline does not introduce an empty line

    git_new: str | None = None
    old_path: str | None = None
    new_path: str | None = None
    hunks: list[Hunk] = []
    entry_open = False

    def flush() -> None:
        nonlocal git_new, old_path, new_path, hunks, entry_open
        if entry_open:
            path = new_path if new_path is not None else old_path
            if path is None:
                path = git_new
            if path is None:
                if hunks:
                    logger.warning("dropping %d hunk(s) with no file header", len(hunks))
            elif path in files:
                files[path].hunks.extend(hunks)
            else:
                files[path] = FileDiff(path, hunks)
        git_new = old_path = new_path = None
        hunks = []
        entry_open = False

    i = 0
    total = len(lines)
    while i < total:
        line = lines[i]
        if line.startswith("diff --git "):
            flush()
            git_new = _git_header_new_path(line)
            entry_open = True
        elif line.startswith("--- "):
            if new_path is not None or hunks:
                flush()
            old_path = _header_path(line, "--- ", "a/")
            entry_open = True
        elif line.startswith("+++ "):
            new_path = _header_path(line, "+++ ", "b/")
            entry_open = True
        elif line.startswith("@@"):
            match = _HUNK_RE.match(line)
            if match is None:
                raise DiffParseError(f"line {i + 1}: malformed hunk range: {line!r}")
            hunk = Hunk(
                heading=match.group("heading") or "",
                old_start=int(match.group("old_start")),
                old_len=int(match.group("old_len") or 1),
                new_start=int(match.group("new_start")),
                new_len=int(match.group("new_len") or 1),
            )
            entry_open = True
            hunks.append(hunk)
            i = _consume_hunk(lines, i + 1, hunk)
            continue
        elif line.startswith("Binary files ") or line == "GIT binary patch":
            entry_open = True
        # anything else is an unknown header line; skipped in tolerant mode
        i += 1
    flush()
    return Diff(files)


def _consume_hunk(lines: list[str], start: int, hunk: Hunk) -> int:
    """Consume hunk content lines until the declared counts are satisfied.

    Returns the index of the first unconsumed line. A hunk that ends early
    (input exhausted or an unclassifiable line) is kept as parsed and logged.
    """
    old_need = hunk.old_len
    new_need = hunk.new_len
    i = start
    while (old_need > 0 or new_need > 0) and i < len(lines):
        line = lines[i]
        if line.startswith("+"):
            hunk.added.append(line[1:])
            new_need -= 1
        elif line.startswith("-"):
            hunk.removed.append(line[1:])
            old_need -= 1
        elif line.startswith(" ") or line == "":
            # truly empty lines stand for empty context in some producers
            hunk.context.append(line[1:])
            old_need -= 1
            new_need -= 1
        elif line.startswith("\\"):
            pass  # "\ No newline at end of file"
        else:
            logger.warning("line %d: hunk truncated by unexpected line %r", i + 1, line)
            return i
        i += 1
    # swallow a trailing no-newline marker belonging to this hunk
    if i < len(lines) and lines[i].startswith("\\"):
        i += 1
    if old_need > 0 or new_need > 0:
        logger.warning(
            "hunk at input line %d truncated: %d old / %d new line(s) missing",
            start,
            max(old_need, 0),
            max(new_need, 0),
        )
    elif old_need < 0 or new_need < 0:
        logger.warning(
            "hunk at input line %d has more lines than its declared counts", start
        )
    return i
