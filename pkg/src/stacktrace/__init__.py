"""Patch-stack analysis: mine release branches of a git repository, detect
similar patches with a string-distance classifier, group them into
cross-release equivalence classes, link them to mainline commits, and derive
flow statistics (forwardports, backports, invariant patches, integration
times, stack-size evolution).
"""

__version__ = "0.1.0"

from .diff import Diff, DiffParseError, FileDiff, Hunk, parse_diff
from .similarity import EvaluationResult, Thresholds, Verdict, evaluate_pair

__all__ = [
    "Diff",
    "DiffParseError",
    "EvaluationResult",
    "FileDiff",
    "Hunk",
    "Thresholds",
    "Verdict",
    "evaluate_pair",
    "parse_diff",
]
