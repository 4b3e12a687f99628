"""Persistent store of pair evaluations and human review verdicts.

The store is an append-only UTF-8 text file, one record per line:

    <id_a> <id_b> <source> <verdict> [<rating>] <unix-ts>

Automatic records carry a rating (6 decimal digits), human records do not.
For each pair the last line per source wins and human records override
automatic ones, so re-evaluating with different thresholds replaces the
automatic layer while human work is never repeated. Ratings are compared as
written, never re-parsed through floats.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator

from .similarity import EvaluationResult, Verdict

logger = logging.getLogger(__name__)

Pair = tuple[str, str]

AUTO = "auto"
HUMAN = "human"


class CacheError(RuntimeError):
    """Raised when the store file cannot be decoded."""


@dataclass(frozen=True)
class DecisionRecord:
    """One persisted decision about a pair."""

    pair: Pair
    source: str  # auto | human
    verdict: Verdict
    rating: str | None  # formatted with 6 decimals; None for human records
    timestamp: int


class EvaluationCache:
    """Single-writer store over the record file; readers may share it after
    load. Writes append and flush immediately."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._auto: dict[Pair, DecisionRecord] = {}
        self._human: dict[Pair, DecisionRecord] = {}
        self._handle: IO[str] | None = None
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with self.path.open("r", encoding="utf-8", newline="\n") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    record = _parse_line(line)
                except ValueError as exc:
                    raise CacheError(f"{self.path}:{lineno}: {exc}") from exc
                self._store(record)

    def _store(self, record: DecisionRecord) -> None:
        layer = self._human if record.source == HUMAN else self._auto
        layer[record.pair] = record

    def _append(self, record: DecisionRecord) -> None:
        if self._handle is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.path.open("a", encoding="utf-8", newline="\n")
        self._handle.write(_format_line(record) + "\n")
        self._handle.flush()
        self._store(record)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def __enter__(self) -> "EvaluationCache":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def record_evaluation(
        self, result: EvaluationResult, now: int | None = None
    ) -> None:
        """Persist an automatic evaluation; a no-op if the stored record
        already matches (same verdict, same formatted rating)."""
        record = DecisionRecord(
            pair=result.pair,
            source=AUTO,
            verdict=result.verdict,
            rating=f"{result.rating:.6f}",
            timestamp=int(time.time()) if now is None else now,
        )
        existing = self._auto.get(result.pair)
        if (
            existing is not None
            and existing.verdict == record.verdict
            and existing.rating == record.rating
        ):
            return
        self._append(record)

    def record_human(
        self, pair: Pair, verdict: Verdict, now: int | None = None
    ) -> None:
        """Persist a human verdict; overrides any automatic record."""
        if verdict not in (Verdict.SIMILAR, Verdict.DISSIMILAR):
            raise ValueError(f"human verdicts are similar/dissimilar, got {verdict}")
        existing = self._human.get(pair)
        if existing is not None and existing.verdict == verdict:
            return
        record = DecisionRecord(
            pair=pair,
            source=HUMAN,
            verdict=verdict,
            rating=None,
            timestamp=int(time.time()) if now is None else now,
        )
        self._append(record)

    def lookup(self, pair: Pair) -> DecisionRecord | None:
        """The most authoritative record for a pair: human over automatic."""
        return self._human.get(pair) or self._auto.get(pair)

    def resolved_verdict(self, pair: Pair) -> Verdict | None:
        record = self.lookup(pair)
        return record.verdict if record is not None else None

    def pending_reviews(self) -> list[Pair]:
        """Pairs rated needs-review with no human decision, sorted by ids."""
        return sorted(
            pair
            for pair, record in self._auto.items()
            if record.verdict is Verdict.NEEDS_REVIEW and pair not in self._human
        )

    def similar_pairs(self) -> set[Pair]:
        """Pairs whose resolved verdict is similar."""
        pairs = {
            pair
            for pair, record in self._auto.items()
            if record.verdict is Verdict.SIMILAR and pair not in self._human
        }
        pairs.update(
            pair
            for pair, record in self._human.items()
            if record.verdict is Verdict.SIMILAR
        )
        return pairs

    def records(self) -> Iterator[DecisionRecord]:
        yield from self._auto.values()
        yield from self._human.values()


def _format_line(record: DecisionRecord) -> str:
    id_a, id_b = record.pair
    fields = [id_a, id_b, record.source, record.verdict.value]
    if record.rating is not None:
        fields.append(record.rating)
    fields.append(str(record.timestamp))
    return " ".join(fields)


def _parse_line(line: str) -> DecisionRecord:
    parts = line.split(" ")
    if len(parts) == 6:
        id_a, id_b, source, verdict, rating, ts = parts
        if source != AUTO:
            raise ValueError(f"rating on non-automatic record: {line!r}")
        float(rating)  # validates the token; the string stays authoritative
    elif len(parts) == 5:
        id_a, id_b, source, verdict, ts = parts
        rating = None
        if source != HUMAN:
            raise ValueError(f"missing rating on automatic record: {line!r}")
    else:
        raise ValueError(f"unrecognized record: {line!r}")
    try:
        verdict_value = Verdict(verdict)
    except ValueError as exc:
        raise ValueError(f"unknown verdict token {verdict!r}") from exc
    if source == HUMAN and verdict_value not in (Verdict.SIMILAR, Verdict.DISSIMILAR):
        raise ValueError(f"human verdict must be similar/dissimilar: {line!r}")
    return DecisionRecord((id_a, id_b), source, verdict_value, rating, int(ts))
