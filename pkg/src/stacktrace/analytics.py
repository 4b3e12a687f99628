"""Classify patch groups and derive per-release flow statistics.

A group linked to a mainline commit is a forwardport when it showed up on
the stack first, a backport when mainline had it first; unlinked groups are
invariant, they only exist on the stack. Integration time is the signed day
count from first stack appearance to the mainline commit, truncated toward
zero, so same-day ports land in the bin containing zero.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .grouping import PatchGroup
from .repo import Commit, CommitIndex

SECONDS_PER_DAY = 86_400


class PatchClass(Enum):
    FORWARDPORT = "forwardport"
    BACKPORT = "backport"
    INVARIANT = "invariant"


@dataclass(frozen=True)
class ClassifiedGroup:
    group: PatchGroup
    patch_class: PatchClass
    first_stack_date: int
    upstream_date: int | None
    integration_days: int | None


def classify_groups(
    groups: Sequence[PatchGroup],
    commits: Mapping[str, Commit],
    upstream_commits: Mapping[str, Commit],
) -> list[ClassifiedGroup]:
    """One classification per group, ordered by representative id.

    First stack appearance is the earliest author_date over the members;
    the upstream side uses the linked commit's author_date.
    """
    classified = []
    for group in groups:
        first_stack = min(commits[m].author_date for m in group.members)
        if group.upstream is None:
            classified.append(
                ClassifiedGroup(group, PatchClass.INVARIANT, first_stack, None, None)
            )
            continue
        upstream_date = upstream_commits[group.upstream].author_date
        days = int((upstream_date - first_stack) / SECONDS_PER_DAY)
        patch_class = (
            PatchClass.FORWARDPORT
            if upstream_date >= first_stack
            else PatchClass.BACKPORT
        )
        classified.append(
            ClassifiedGroup(group, patch_class, first_stack, upstream_date, days)
        )
    classified.sort(key=lambda c: c.group.representative)
    return classified


def stack_size_series(index: CommitIndex) -> list[tuple[str, int]]:
    """(release_id, patch count) per release, in release order."""
    return [
        (release_id, len(index.per_release[release_id]))
        for release_id in index.release_order
    ]


def release_composition(
    classified: Sequence[ClassifiedGroup],
    index: CommitIndex,
    releases: Sequence[str] | None = None,
) -> list[tuple[str, int, int, int]]:
    """(release_id, forwardport, backport, invariant) commit counts per
    release; the three counts always sum to the release size.

    ``releases`` restricts the rows (e.g. to the last release of each major
    version); which releases those are is stack-specific, so the caller
    decides. Release order is preserved either way."""
    class_of: dict[str, PatchClass] = {}
    for item in classified:
        for member in item.group.members:
            class_of[member] = item.patch_class
    wanted = set(releases) if releases is not None else None
    rows = []
    for release_id in index.release_order:
        if wanted is not None and release_id not in wanted:
            continue
        counts = Counter(class_of[m] for m in index.per_release[release_id])
        rows.append(
            (
                release_id,
                counts[PatchClass.FORWARDPORT],
                counts[PatchClass.BACKPORT],
                counts[PatchClass.INVARIANT],
            )
        )
    return rows


def integration_time_histogram(
    classified: Iterable[ClassifiedGroup], bin_days: int
) -> list[tuple[int, int]]:
    """Histogram of integration times over the linked groups.

    Bins are half-open [k*bin_days, (k+1)*bin_days); the returned pairs are
    (bin start in days, count), sorted by bin start.
    """
    if bin_days < 1:
        raise ValueError(f"bin_days must be >= 1, got {bin_days}")
    counts = Counter(
        math.floor(item.integration_days / bin_days) * bin_days
        for item in classified
        if item.integration_days is not None
    )
    return sorted(counts.items())


@dataclass(frozen=True)
class FlowRecord:
    """Patch flow over one release transition. Conservation holds by
    construction: |to| = |from| - outflow + inflow."""

    from_release: str
    to_release: str
    inflow: int
    outflow: int
    invariant: int


def flow_records(
    groups: Sequence[PatchGroup], index: CommitIndex
) -> list[FlowRecord]:
    """Inflow/outflow/invariant counts for each consecutive release pair.

    The invariant count is the number of groups present on both sides;
    outflow and inflow are the commit counts not covered by those groups.
    """
    present: dict[str, set[int]] = {
        release_id: set() for release_id in index.release_order
    }
    for number, group in enumerate(groups):
        for member in group.members:
            for position in index.release_indices[member]:
                present[index.release_order[position]].add(number)
    records = []
    for rel_from, rel_to in zip(index.release_order, index.release_order[1:]):
        invariant = len(present[rel_from] & present[rel_to])
        records.append(
            FlowRecord(
                from_release=rel_from,
                to_release=rel_to,
                inflow=len(index.per_release[rel_to]) - invariant,
                outflow=len(index.per_release[rel_from]) - invariant,
                invariant=invariant,
            )
        )
    return records


def outflow_details(
    classified: Sequence[ClassifiedGroup], index: CommitIndex
) -> list[tuple[str, str, str, str]]:
    """Per-transition annotation of leaving groups: (from, to,
    representative, reason), reason `upstream` when the group is linked to a
    mainline commit, `dropped` otherwise. Inspection aid; the flow records
    themselves do not distinguish the two."""
    rows = []
    for rel_from, rel_to in zip(index.release_order, index.release_order[1:]):
        ids_from = index.per_release[rel_from]
        ids_to = index.per_release[rel_to]
        for item in classified:
            members = set(item.group.members)
            if members & ids_from and not members & ids_to:
                reason = "dropped" if item.group.upstream is None else "upstream"
                rows.append((rel_from, rel_to, item.group.representative, reason))
    return rows
