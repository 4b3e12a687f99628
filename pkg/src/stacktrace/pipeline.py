"""End-to-end analysis: index, evaluate, group, link, classify, export.

Pair evaluation is embarrassingly parallel; the worker pool maps over a
sorted pair list and the single collector merges results back in canonical
order, so any parallelism degree produces identical outputs.
"""

from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Mapping

from .analytics import (
    ClassifiedGroup,
    FlowRecord,
    classify_groups,
    flow_records,
    integration_time_histogram,
    outflow_details,
    release_composition,
    stack_size_series,
)
from .cache import EvaluationCache, Pair
from .config import RunConfig, load_stack_definition
from .grouping import (
    PatchGroup,
    canonical_stack_pair,
    group_stack,
    link_upstream,
    write_group_file,
)
from .repo import (
    Commit,
    CommitIndex,
    GitRepo,
    MergeCommitError,
    build_file_index,
    build_index,
    get_commit,
    load_commits,
    scan_changed_files,
)
from .similarity import EvaluationResult, Thresholds
from . import report

logger = logging.getLogger(__name__)

DEFAULT_HISTOGRAM_BIN_DAYS = 7

_worker_commits: Mapping[str, Commit] | None = None
_worker_thresholds: Thresholds | None = None


def _init_worker(commits: Mapping[str, Commit], thresholds: Thresholds) -> None:
    global _worker_commits, _worker_thresholds
    _worker_commits = commits
    _worker_thresholds = thresholds


def _evaluate_ids(pair: Pair) -> EvaluationResult:
    from .similarity import evaluate_pair

    assert _worker_commits is not None and _worker_thresholds is not None
    return evaluate_pair(
        _worker_commits[pair[0]], _worker_commits[pair[1]], _worker_thresholds
    )


def evaluate_pairs(
    commits: Mapping[str, Commit],
    pairs: set[Pair] | list[Pair],
    thresholds: Thresholds,
    jobs: int = 1,
) -> dict[Pair, EvaluationResult]:
    """Evaluate id pairs, optionally across a process pool.

    Results are keyed by pair and independent of the parallelism degree.
    """
    ordered = sorted(pairs)
    if jobs <= 1 or len(ordered) < 2:
        _init_worker(commits, thresholds)
        results = [_evaluate_ids(pair) for pair in ordered]
        _init_worker(None, None)  # type: ignore[arg-type]
    else:
        chunksize = max(1, len(ordered) // (jobs * 4))
        with multiprocessing.Pool(
            processes=jobs, initializer=_init_worker, initargs=(commits, thresholds)
        ) as pool:
            results = pool.map(_evaluate_ids, ordered, chunksize=chunksize)
    return dict(zip(ordered, results))


def candidate_stack_pairs(
    index: CommitIndex, file_index: Mapping[str, set[str]]
) -> set[Pair]:
    """Stack pairs worth evaluating: sharing at least one file and spanning
    two distinct releases, in canonical order."""
    pairs: set[Pair] = set()
    for ids in file_index.values():
        for id_a, id_b in combinations(sorted(ids), 2):
            rel_a = index.release_indices[id_a]
            rel_b = index.release_indices[id_b]
            if len(rel_a) == 1 and rel_a == rel_b:
                continue  # both exist only in the same single release
            pairs.add(canonical_stack_pair(index, id_a, id_b))
    return pairs


@dataclass
class AnalysisResult:
    index: CommitIndex
    commits: dict[str, Commit]
    upstream_commits: dict[str, Commit]
    groups: list[PatchGroup]
    classified: list[ClassifiedGroup]
    flows: list[FlowRecord]
    pending: list[Pair]
    out_dir: Path
    csv_paths: dict[str, Path] = field(default_factory=dict)


def run_analysis(config: RunConfig) -> AnalysisResult:
    """Run the full pipeline and write every output file.

    Human decisions present in the cache are honored; automatic records are
    recomputed (the configured thresholds may differ from the recorded
    ones) and re-appended only when they changed.
    """
    definition = load_stack_definition(config.stack_path)
    thresholds = config.thresholds
    repo = GitRepo(config.repo_path)
    index = build_index(repo, definition)
    logger.info(
        "indexed %d mainline commits, %d stack commits over %d releases",
        len(index.upstream),
        len(index.all_stack),
        len(index.release_order),
    )

    commits = load_commits(repo, index.all_stack)
    file_index = build_file_index(commits.values())
    config.out_dir.mkdir(parents=True, exist_ok=True)
    cache = EvaluationCache(config.cache_path)

    pairs = candidate_stack_pairs(index, file_index)
    logger.info("evaluating %d stack pair(s) with %d job(s)", len(pairs), config.jobs)
    results = evaluate_pairs(commits, pairs, thresholds, config.jobs)
    for pair in sorted(results):
        cache.record_evaluation(results[pair])

    groups = group_stack(index, commits, cache)

    upstream_files = scan_changed_files(repo, definition.mainline_branch)
    upstream_file_index: dict[str, set[str]] = {}
    for commit_id, paths in upstream_files.items():
        for path in paths:
            upstream_file_index.setdefault(path, set()).add(commit_id)

    upstream_commits: dict[str, Commit] = {}

    def fetch_upstream(commit_id: str) -> Commit | None:
        if commit_id not in upstream_commits:
            try:
                upstream_commits[commit_id] = get_commit(repo, commit_id)
            except MergeCommitError:
                logger.info("skipping mainline merge commit %s", commit_id)
                return None
        return upstream_commits[commit_id]

    def parallel_evaluate(
        commit_pairs: list[tuple[Commit, Commit]]
    ) -> dict[Pair, EvaluationResult]:
        merged = {**commits, **upstream_commits}
        return evaluate_pairs(
            merged, [(a.id, b.id) for a, b in commit_pairs], thresholds, config.jobs
        )

    groups = link_upstream(
        groups, commits, upstream_file_index, fetch_upstream, cache, parallel_evaluate
    )

    classified = classify_groups(groups, commits, upstream_commits)
    flows = flow_records(groups, index)

    csv_paths = export_outputs(
        config.out_dir,
        index,
        groups,
        classified,
        flows,
        bin_days=config.bin_days,
        composition_releases=config.composition_releases,
    )
    pending = cache.pending_reviews()
    cache.close()
    return AnalysisResult(
        index=index,
        commits=commits,
        upstream_commits=upstream_commits,
        groups=groups,
        classified=classified,
        flows=flows,
        pending=pending,
        out_dir=config.out_dir,
        csv_paths=csv_paths,
    )


def export_outputs(
    out_dir: Path,
    index: CommitIndex,
    groups: list[PatchGroup],
    classified: list[ClassifiedGroup],
    flows: list[FlowRecord],
    bin_days: int = DEFAULT_HISTOGRAM_BIN_DAYS,
    composition_releases: tuple[str, ...] | None = None,
) -> dict[str, Path]:
    """Write the group file, the four CSVs, the outflow annotation and the
    three charts into the output directory."""
    out_dir.mkdir(parents=True, exist_ok=True)
    sizes = stack_size_series(index)
    composition = release_composition(classified, index, composition_releases)
    histogram = integration_time_histogram(classified, bin_days)

    paths = {
        "stack_size": out_dir / "stack_size.csv",
        "composition": out_dir / "composition.csv",
        "integration": out_dir / "integration.csv",
        "flow": out_dir / "flow.csv",
        "outflow_detail": out_dir / "outflow_detail.csv",
        "groups": out_dir / "groups.txt",
    }
    report.write_stack_size_csv(paths["stack_size"], sizes)
    report.write_composition_csv(paths["composition"], composition)
    report.write_integration_csv(paths["integration"], classified)
    report.write_flow_csv(paths["flow"], flows)
    report.write_outflow_detail_csv(
        paths["outflow_detail"], outflow_details(classified, index)
    )
    write_group_file(paths["groups"], groups)

    report.render_stack_size_chart(out_dir / "stack_size", sizes)
    report.render_composition_chart(out_dir / "composition", composition)
    report.render_integration_chart(out_dir / "integration", histogram, bin_days)
    return paths
