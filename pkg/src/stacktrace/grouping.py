"""Equivalence classes over stack commits and their links into mainline.

Groups are the connected components of the similar relation (disjoint-set
union over recorded verdicts, human decisions overriding automatic ones).
Each group elects the member from the latest release as representative;
representatives are then compared against file-sharing mainline commits and
linked to the best-rated similar one, if any.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .cache import EvaluationCache, Pair
from .repo import Commit, CommitIndex
from .similarity import EvaluationResult, Thresholds, Verdict, evaluate_pair

logger = logging.getLogger(__name__)


class UnionFind:
    """Disjoint sets over arbitrary hashable ids (path compression +
    union by size)."""

    def __init__(self, ids: Iterable[str] = ()):
        self.parent: dict[str, str] = {i: i for i in ids}
        self.size: dict[str, int] = {i: 1 for i in self.parent}

    def add(self, x: str) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def components(self) -> dict[str, list[str]]:
        groups: dict[str, list[str]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return groups


@dataclass(frozen=True)
class PatchGroup:
    """One equivalence class: member stack commits, the elected
    representative, and an optional mainline twin."""

    members: tuple[str, ...]  # ordered by (first release, id)
    representative: str
    upstream: str | None = None


def min_release_index(index: CommitIndex, commit_id: str) -> int:
    return min(index.release_indices[commit_id])


def canonical_stack_pair(index: CommitIndex, a: str, b: str) -> Pair:
    """Fixed evaluation order for a stack/stack pair: the commit from the
    earlier release first, ids breaking ties. Pair ratings are never
    computed in both orders."""
    ka = (min_release_index(index, a), a)
    kb = (min_release_index(index, b), b)
    return (a, b) if ka <= kb else (b, a)


def _elect_representative(
    members: list[str], index: CommitIndex, commits: Mapping[str, Commit]
) -> str:
    """Member from the latest release; ties by latest author_date, then id."""
    return max(
        members,
        key=lambda m: (
            max(index.release_indices[m]),
            commits[m].author_date,
            m,
        ),
    )


def group_stack(
    index: CommitIndex,
    commits: Mapping[str, Commit],
    decisions: EvaluationCache,
) -> list[PatchGroup]:
    """Partition the stack commits into groups.

    Every stack commit lands in exactly one group; singletons are groups of
    their own. A commit id shared by several releases is a single node, so
    identical ids group together without any evaluation.
    """
    union = UnionFind(sorted(index.all_stack))
    for id_a, id_b in sorted(decisions.similar_pairs()):
        if id_a in union.parent and id_b in union.parent:
            union.union(id_a, id_b)
    groups = []
    for members in union.components().values():
        ordered = tuple(
            sorted(members, key=lambda m: (min_release_index(index, m), m))
        )
        groups.append(
            PatchGroup(
                members=ordered,
                representative=_elect_representative(members, index, commits),
            )
        )
    groups.sort(key=lambda g: (min_release_index(index, g.members[0]), g.members[0]))
    return groups


def link_upstream(
    groups: list[PatchGroup],
    commits: Mapping[str, Commit],
    upstream_file_index: Mapping[str, Iterable[str]],
    fetch_upstream: Callable[[str], Commit | None],
    decisions: EvaluationCache,
    evaluate: Callable[[list[tuple[Commit, Commit]]], dict[Pair, EvaluationResult]],
) -> list[PatchGroup]:
    """Attach at most one mainline commit to each group.

    Candidates for a representative are the mainline commits sharing at
    least one changed file (anything else would be pre-filtered anyway).
    All candidate pairs go through ``evaluate``; among candidates whose
    resolved verdict is similar, the highest automatic rating wins, ids
    breaking ties. Groups without a link are invariant: they only exist on
    the stack.
    """
    candidate_ids: dict[str, list[str]] = {}
    pairs: list[tuple[Commit, Commit]] = []
    for group in groups:
        rep = commits[group.representative]
        ids = sorted(
            {
                commit_id
                for path in rep.diff.changed_files
                for commit_id in upstream_file_index.get(path, ())
            }
        )
        reachable = []
        for commit_id in ids:
            upstream_commit = fetch_upstream(commit_id)
            if upstream_commit is None:
                continue
            reachable.append(commit_id)
            pairs.append((rep, upstream_commit))
        candidate_ids[group.representative] = reachable
    results = evaluate(pairs)
    for pair in sorted(results):
        decisions.record_evaluation(results[pair])

    linked: list[PatchGroup] = []
    for group in groups:
        best: str | None = None
        best_rating = -1.0
        similar: list[str] = []
        for commit_id in candidate_ids[group.representative]:
            pair = (group.representative, commit_id)
            result = results[pair]
            verdict = decisions.resolved_verdict(pair) or result.verdict
            if verdict is not Verdict.SIMILAR:
                continue
            similar.append(commit_id)
            if result.rating > best_rating:
                best = commit_id
                best_rating = result.rating
        if len(similar) > 1:
            logger.info(
                "representative %s matches %d mainline commits; keeping %s (%.6f)",
                group.representative,
                len(similar),
                best,
                best_rating,
            )
        linked.append(replace(group, upstream=best))
    return linked


def sequential_evaluator(
    thresholds: Thresholds,
) -> Callable[[list[tuple[Commit, Commit]]], dict[Pair, EvaluationResult]]:
    """Default pair evaluator: one process, in order."""

    def run(pairs: list[tuple[Commit, Commit]]) -> dict[Pair, EvaluationResult]:
        return {(a.id, b.id): evaluate_pair(a, b, thresholds) for a, b in pairs}

    return run


def write_group_file(path: Path | str, groups: Iterable[PatchGroup]) -> None:
    """One group per line: member ids in release order, space separated,
    with ` => <upstream-id>` when the group is linked."""
    lines = []
    for group in groups:
        line = " ".join(group.members)
        if group.upstream is not None:
            line += f" => {group.upstream}"
        lines.append(line)
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_group_file(path: Path | str) -> list[PatchGroup]:
    """Reload a group file; the last member is taken as representative
    (members are written in release order, the representative comes from
    the latest release)."""
    groups = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        member_part, _, upstream = line.partition(" => ")
        members = tuple(member_part.split())
        groups.append(
            PatchGroup(
                members=members,
                representative=members[-1],
                upstream=upstream.strip() or None,
            )
        )
    return groups
