"""Read-only access to a git repository: release enumeration, commit
snapshots and the changed-file index.

Stack release sets are computed by set difference against the mainline
branch. Merge commits never enter a release set (patches are single-parent
changes); mainline keeps its merges since only hash membership matters
there. author_date drives all temporal analytics because it survives
rebases; commit_date is retained for diagnostics.
"""

from __future__ import annotations

import logging
import subprocess
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .config import StackDefinition
from .diff import Diff, _unquote, parse_diff

logger = logging.getLogger(__name__)


class RepoError(RuntimeError):
    """Raised when the repository or a revision cannot be read."""


class UnknownCommitError(RepoError):
    """Raised for commit ids that do not resolve."""


class MergeCommitError(RepoError):
    """Raised when a snapshot of a multi-parent commit is requested."""


class GitRepo:
    """Thin wrapper over the git CLI for one on-disk repository."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        if not self.path.exists():
            raise RepoError(f"repository path does not exist: {self.path}")
        self._run("rev-parse", "--git-dir")

    def _run(self, *args: str) -> bytes:
        proc = subprocess.run(
            ["git", "-C", str(self.path), *args], capture_output=True
        )
        if proc.returncode != 0:
            message = proc.stderr.decode("utf-8", "replace").strip()
            raise RepoError(f"git {args[0]} failed in {self.path}: {message}")
        return proc.stdout

    def resolve(self, rev: str) -> str:
        """Commit hash for a revision name."""
        try:
            out = self._run("rev-parse", "--verify", f"{rev}^{{commit}}")
        except RepoError as exc:
            raise UnknownCommitError(f"cannot resolve {rev!r}: {exc}") from exc
        return out.decode("ascii").strip()

    def rev_list(self, rev: str) -> list[str]:
        """All commit hashes reachable from a revision."""
        out = self._run("rev-list", rev)
        return out.decode("ascii").split()

    def rev_list_with_parents(self, rev: str) -> list[tuple[str, tuple[str, ...]]]:
        """(hash, parent hashes) for every commit reachable from a revision."""
        out = self._run("rev-list", "--parents", rev)
        entries = []
        for line in out.decode("ascii").splitlines():
            parts = line.split()
            entries.append((parts[0], tuple(parts[1:])))
        return entries


@dataclass(frozen=True)
class Commit:
    """Immutable snapshot of one change."""

    id: str
    message: str
    diff: Diff
    author_date: int  # UTC seconds
    commit_date: int
    raw_diff: str = ""  # verbatim unified diff, shown to reviewers
    lossy: bool = False  # undecodable bytes were replaced


@dataclass(frozen=True)
class CommitIndex:
    """Hash sets of interest: mainline, per-release stack sets, and their
    unions. Stack sets are disjoint from mainline by construction."""

    upstream: frozenset[str]
    per_release: dict[str, frozenset[str]]
    release_order: tuple[str, ...]

    def __post_init__(self) -> None:
        for release_id, ids in self.per_release.items():
            overlap = ids & self.upstream
            if overlap:
                raise ValueError(
                    f"release {release_id} overlaps mainline: {sorted(overlap)[:3]}"
                )

    @cached_property
    def all_stack(self) -> frozenset[str]:
        result: set[str] = set()
        for ids in self.per_release.values():
            result |= ids
        return frozenset(result)

    @cached_property
    def universe(self) -> frozenset[str]:
        return self.all_stack | self.upstream

    @cached_property
    def release_indices(self) -> dict[str, tuple[int, ...]]:
        """For each stack commit, the indices of the releases containing it."""
        member: dict[str, list[int]] = {}
        for position, release_id in enumerate(self.release_order):
            for commit_id in self.per_release[release_id]:
                member.setdefault(commit_id, []).append(position)
        return {commit_id: tuple(idx) for commit_id, idx in member.items()}


def build_index(repo: GitRepo, definition: StackDefinition) -> CommitIndex:
    """Enumerate mainline and per-release commit sets.

    per_release[i] = reachable(release branch) minus reachable(mainline),
    minus merge commits (logged).
    """
    try:
        mainline = frozenset(repo.rev_list(definition.mainline_branch))
    except RepoError as exc:
        raise RepoError(
            f"cannot enumerate mainline branch {definition.mainline_branch!r}: {exc}"
        ) from exc
    per_release: dict[str, frozenset[str]] = {}
    for release in definition.releases:
        try:
            entries = repo.rev_list_with_parents(release.branch)
        except RepoError as exc:
            raise RepoError(
                f"cannot enumerate release branch {release.branch!r}: {exc}"
            ) from exc
        ids: set[str] = set()
        for commit_id, parents in entries:
            if commit_id in mainline:
                continue
            if len(parents) > 1:
                logger.info(
                    "release %s: excluding merge commit %s",
                    release.release_id,
                    commit_id,
                )
                continue
            ids.add(commit_id)
        per_release[release.release_id] = frozenset(ids)
    return CommitIndex(
        upstream=mainline,
        per_release=per_release,
        release_order=definition.release_order(),
    )


def get_commit(repo: GitRepo, commit_id: str) -> Commit:
    """Materialize one commit: full message and the unified diff against its
    first parent (the empty tree for root commits).

    Multi-parent commits are refused; undecodable bytes are replaced and the
    commit flagged.
    """
    try:
        meta = repo._run(
            "show", "-s", "--format=%H%x00%at%x00%ct%x00%P%x00%B", commit_id
        )
    except RepoError as exc:
        raise UnknownCommitError(f"unknown commit {commit_id!r}: {exc}") from exc
    lossy = False
    try:
        text = meta.decode("utf-8")
    except UnicodeDecodeError:
        text = meta.decode("utf-8", "replace")
        lossy = True
    sha, author_ts, commit_ts, parent_field, message = text.split("\x00", 4)
    parents = parent_field.split()
    if len(parents) > 1:
        raise MergeCommitError(f"{sha} is a merge commit ({len(parents)} parents)")
    diff_bytes = repo._run(
        "diff-tree", "--no-commit-id", "--patch", "--no-renames", "--root", sha
    )
    try:
        raw_diff = diff_bytes.decode("utf-8")
    except UnicodeDecodeError:
        raw_diff = diff_bytes.decode("utf-8", "replace")
        lossy = True
    if lossy:
        logger.warning("commit %s: replaced undecodable bytes", sha)
    diff = parse_diff(raw_diff)
    if not diff.files:
        logger.info("commit %s has an empty diff", sha)
    return Commit(
        id=sha,
        message=message.rstrip("\n"),
        diff=diff,
        author_date=int(author_ts),
        commit_date=int(commit_ts),
        raw_diff=raw_diff,
        lossy=lossy,
    )


def load_commits(repo: GitRepo, ids: Iterable[str]) -> dict[str, Commit]:
    """Materialize many commits, keyed by id, in sorted id order."""
    return {commit_id: get_commit(repo, commit_id) for commit_id in sorted(ids)}


def build_file_index(commits: Iterable[Commit]) -> dict[str, set[str]]:
    """Map file path to the ids of the commits touching it."""
    index: dict[str, set[str]] = {}
    for commit in commits:
        for path in commit.diff.changed_files:
            index.setdefault(path, set()).add(commit.id)
    return index


def scan_changed_files(repo: GitRepo, rev: str) -> dict[str, tuple[str, ...]]:
    """Changed file paths per commit reachable from a revision, in one
    batched pass (no diff content, no per-commit subprocess).

    Merge commits yield an empty path tuple and are thereby never candidates
    for content comparison.
    """
    out = repo._run("log", "--format=%x01%H", "--name-only", "--no-renames", rev)
    text = out.decode("utf-8", "replace")
    result: dict[str, tuple[str, ...]] = {}
    current: str | None = None
    paths: list[str] = []
    for line in text.split("\n"):
        if line.startswith("\x01"):
            if current is not None:
                result[current] = tuple(paths)
            current = line[1:].strip()
            paths = []
        elif line:
            paths.append(_unquote(line))
    if current is not None:
        result[current] = tuple(paths)
    return result
