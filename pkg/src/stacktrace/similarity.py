"""Rate pairs of commits by message and diff similarity.

The classifier compares the tag-stripped commit messages and, per commonly
touched file, the added and removed lines of heading-matched hunks. Both
ratings are combined into a weighted mean and classified against an
auto-accept threshold and an interactive floor; everything in between is
queued for human review.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from .diff import Hunk, get_hunks

if TYPE_CHECKING:
    from .repo import Commit

logger = logging.getLogger(__name__)

DEFAULT_DIST_CAP = 50_000

# message lines whose leading `token:` is listed here are ignored entirely
DEFAULT_TAGS = frozenset(
    {
        "cc",
        "signed-off-by",
        "acked-by",
        "reviewed-by",
        "tested-by",
        "reported-by",
        "suggested-by",
        "link",
        "cherry-picked-from",
    }
)


class Verdict(Enum):
    SIMILAR = "similar"
    DISSIMILAR = "dissimilar"
    NEEDS_REVIEW = "needs-review"
    PRE_FILTERED = "pre-filtered"


@dataclass(frozen=True)
class Thresholds:
    """Classification thresholds and the message weight.

    ``auto_accept`` and ``interactive_floor`` partition [0, 1] into
    dissimilar / needs-review / similar; ``heading_floor`` is the minimum
    heading rating for two hunks to be compared at all; ``message_weight``
    balances message against diff rating. ``dist_cap`` bounds the worst-case
    cost of a single string comparison.
    """

    auto_accept: float = 0.82
    interactive_floor: float = 0.70
    heading_floor: float = 0.80
    message_weight: float = 0.40
    dist_cap: int = DEFAULT_DIST_CAP

    def __post_init__(self) -> None:
        if not 0.0 <= self.interactive_floor <= self.auto_accept <= 1.0:
            raise ValueError(
                "thresholds must satisfy 0 <= interactive_floor <= auto_accept <= 1, "
                f"got {self.interactive_floor} / {self.auto_accept}"
            )
        if not 0.0 <= self.heading_floor <= 1.0:
            raise ValueError(f"heading_floor out of [0, 1]: {self.heading_floor}")
        if not 0.0 <= self.message_weight <= 1.0:
            raise ValueError(f"message_weight out of [0, 1]: {self.message_weight}")
        if self.dist_cap < 1:
            raise ValueError(f"dist_cap must be positive: {self.dist_cap}")


@dataclass(frozen=True)
class EvaluationResult:
    """Outcome of rating one pair of commits."""

    pair: tuple[str, str]
    message_rating: float
    diff_rating: float
    rating: float
    verdict: Verdict


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit insert/delete/substitute costs (two rows)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) > len(a):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, char_a in enumerate(a, 1):
        current = [i]
        append = current.append
        for j, char_b in enumerate(b, 1):
            append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (char_a != char_b),
                )
            )
        previous = current
    return previous[-1]


def similarity(
    a: str | Sequence[str], b: str | Sequence[str], cap: int = DEFAULT_DIST_CAP
) -> float:
    """Normalized similarity in [0, 1]: 0 no commonalities, 1 identical.

    Line lists are joined with a single newline so intra-line edits remain
    visible. Two empty operands rate 1. Inputs beyond ``cap`` characters
    rate 0 to bound the quadratic worst case.
    """
    text_a = a if isinstance(a, str) else "\n".join(a)
    text_b = b if isinstance(b, str) else "\n".join(b)
    longest = max(len(text_a), len(text_b))
    if longest == 0:
        return 1.0
    if longest > cap:
        logger.warning(
            "similarity operand of %d chars exceeds cap of %d; rating 0", longest, cap
        )
        return 0.0
    return 1.0 - levenshtein(text_a, text_b) / longest


def strip_tag_lines(message: str, tags: frozenset[str] = DEFAULT_TAGS) -> str:
    """Drop message lines whose first `token:` is a known tag (case-insensitive)."""
    kept = []
    for line in message.split("\n"):
        head, sep, _ = line.partition(":")
        if sep and head.strip().lower() in tags:
            continue
        kept.append(line)
    return "\n".join(kept)


def have_common_files(a: "Commit", b: "Commit") -> bool:
    """Pre-evaluation gate: commits can only be similar if they touch at
    least one common file."""
    return bool(a.diff.changed_files & b.diff.changed_files)


def closest_hunk_by_heading(
    hunks: Sequence[Hunk], heading: str, floor: float, cap: int = DEFAULT_DIST_CAP
) -> Hunk | None:
    """The hunk whose heading is closest to ``heading`` with rating >= floor.

    Ties are broken by earliest list position; None if no hunk qualifies.
    """
    best: Hunk | None = None
    best_rating = -1.0
    for hunk in hunks:
        rating = similarity(hunk.heading, heading, cap)
        if rating >= floor and rating > best_rating:
            best = hunk
            best_rating = rating
    return best


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def evaluate_pair(
    a: "Commit", b: "Commit", thresholds: Thresholds = Thresholds()
) -> EvaluationResult:
    """Classify a pair of commits as similar, dissimilar or needing review.

    Pairs with disjoint changed files are pre-filtered without any rating.
    Otherwise the message rating is the similarity of the tag-stripped
    messages, and the diff rating averages, over the files of ``a``, the
    per-file mean of added-line and removed-line similarities of hunks
    matched by heading. A file of ``a`` that ``b`` does not touch, or whose
    hunks find no heading match, contributes a zero per-file rating.
    Context lines never contribute.
    """
    pair = (a.id, b.id)
    if not have_common_files(a, b):
        return EvaluationResult(pair, 0.0, 0.0, 0.0, Verdict.PRE_FILTERED)
    cap = thresholds.dist_cap
    message_rating = similarity(
        strip_tag_lines(a.message), strip_tag_lines(b.message), cap
    )
    per_file: list[float] = []
    for path in a.diff.files:
        hunks_b = get_hunks(b.diff, path)
        ratings: list[float] = []
        for left in get_hunks(a.diff, path):
            right = closest_hunk_by_heading(
                hunks_b, left.heading, thresholds.heading_floor, cap
            )
            if right is None:
                continue
            # insertions and deletions are compared independently
            ratings.append(similarity(left.added, right.added, cap))
            ratings.append(similarity(left.removed, right.removed, cap))
        per_file.append(_mean(ratings))
    diff_rating = _mean(per_file)
    weight = thresholds.message_weight
    rating = weight * message_rating + (1.0 - weight) * diff_rating
    if rating >= thresholds.auto_accept:
        verdict = Verdict.SIMILAR
    elif rating >= thresholds.interactive_floor:
        verdict = Verdict.NEEDS_REVIEW
    else:
        verdict = Verdict.DISSIMILAR
    return EvaluationResult(pair, message_rating, diff_rating, rating, verdict)
