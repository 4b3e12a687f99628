"""Write the delimited outputs and render the charts next to them.

Four CSV files (UTF-8, LF, header row) carry the raw series; each series
also renders to an SVG and a PNG in the same directory. CSV bytes are fully
deterministic; chart metadata is stripped of dates so repeated runs stay
comparable.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import ClassifiedGroup, FlowRecord

# integrated patches green, backports red, invariant blue
COMPOSITION_COLORS = {
    "forwardport": "tab:green",
    "backport": "tab:red",
    "invariant": "tab:blue",
}

CSV_NAMES = ("stack_size.csv", "composition.csv", "integration.csv", "flow.csv")


def _write_rows(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_stack_size_csv(path: Path, series: Sequence[tuple[str, int]]) -> None:
    _write_rows(path, ("release_id", "size"), series)


def write_composition_csv(
    path: Path, rows: Sequence[tuple[str, int, int, int]]
) -> None:
    _write_rows(path, ("release_id", "forwardport", "backport", "invariant"), rows)


def write_integration_csv(path: Path, classified: Sequence[ClassifiedGroup]) -> None:
    rows = [
        (
            item.group.representative,
            item.patch_class.value,
            "" if item.integration_days is None else item.integration_days,
        )
        for item in classified
    ]
    _write_rows(path, ("group_representative", "class", "integration_days"), rows)


def write_flow_csv(path: Path, records: Sequence[FlowRecord]) -> None:
    rows = [
        (r.from_release, r.to_release, r.inflow, r.outflow, r.invariant)
        for r in records
    ]
    _write_rows(path, ("from", "to", "inflow", "outflow", "invariant"), rows)


def write_outflow_detail_csv(
    path: Path, rows: Sequence[tuple[str, str, str, str]]
) -> None:
    _write_rows(path, ("from", "to", "group_representative", "reason"), rows)


def _save(fig: "plt.Figure", base: Path) -> list[Path]:
    written = []
    for suffix in (".svg", ".png"):
        target = base.with_suffix(suffix)
        fig.savefig(target, metadata={"Date": None} if suffix == ".svg" else None)
        written.append(target)
    plt.close(fig)
    return written


def render_stack_size_chart(
    base: Path, series: Sequence[tuple[str, int]]
) -> list[Path]:
    """Stack size per release, as a marked line over release order."""
    fig, ax = plt.subplots(figsize=(8, 4))
    labels = [release_id for release_id, _ in series]
    ax.plot(range(len(series)), [size for _, size in series], marker="o")
    ax.set_xticks(range(len(series)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_xlabel("release")
    ax.set_ylabel("patches on the stack")
    ax.set_title("Stack size per release")
    fig.tight_layout()
    return _save(fig, base)


def render_composition_chart(
    base: Path, rows: Sequence[tuple[str, int, int, int]]
) -> list[Path]:
    """Per-release composition as stacked bars."""
    fig, ax = plt.subplots(figsize=(8, 4))
    labels = [row[0] for row in rows]
    positions = range(len(rows))
    bottom = [0] * len(rows)
    for offset, key in ((1, "forwardport"), (2, "backport"), (3, "invariant")):
        values = [row[offset] for row in rows]
        ax.bar(
            positions,
            values,
            bottom=bottom,
            label=key,
            color=COMPOSITION_COLORS[key],
        )
        bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_xlabel("release")
    ax.set_ylabel("patches")
    ax.set_title("Release composition")
    ax.legend()
    fig.tight_layout()
    return _save(fig, base)


def render_integration_chart(
    base: Path, histogram: Sequence[tuple[int, int]], bin_days: int
) -> list[Path]:
    """Distribution of integration times in days; positive bins are
    forwardports, negative bins backports."""
    fig, ax = plt.subplots(figsize=(8, 4))
    if histogram:
        ax.bar(
            [start for start, _ in histogram],
            [count for _, count in histogram],
            width=bin_days,
            align="edge",
            edgecolor="black",
            linewidth=0.4,
        )
    ax.axvline(0, color="black", linewidth=0.8)
    ax.set_xlabel("integration time (days)")
    ax.set_ylabel("groups")
    ax.set_title(f"Integration time distribution ({bin_days}-day bins)")
    fig.tight_layout()
    return _save(fig, base)
