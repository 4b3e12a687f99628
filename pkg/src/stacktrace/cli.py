"""Command-line entry points: analyse, review, serve.

Exit codes: 0 clean, 1 configuration or environment problem, 2 human review
work still pending. CI can therefore gate on unresolved reviews.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .cache import CacheError, EvaluationCache
from .config import (
    DEFAULT_PORT,
    ConfigError,
    RunConfig,
    config_path_from_env,
    load_path_settings,
    load_thresholds,
)
from .pipeline import DEFAULT_HISTOGRAM_BIN_DAYS, run_analysis
from .repo import GitRepo, RepoError, get_commit
from .service import ReviewServer, build_review_items, run_terminal_review, serve
from .similarity import Thresholds

logger = logging.getLogger(__name__)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--repo", type=Path, help="repository path")
    parser.add_argument(
        "--stack",
        type=Path,
        help="stack definition / configuration file "
        "(defaults to $STACKTRACE_CONFIG)",
    )
    parser.add_argument("--out", type=Path, help="output directory (default: out)")
    parser.add_argument("--cache", type=Path, help="evaluation cache file")
    parser.add_argument("--jobs", type=int, default=None, help="parallel workers")
    parser.add_argument("--ta", type=float, default=None, help="auto-accept threshold")
    parser.add_argument("--ti", type=float, default=None, help="interactive floor")
    parser.add_argument("--th", type=float, default=None, help="heading match floor")
    parser.add_argument("--w", type=float, default=None, help="message weight")
    parser.add_argument("--port", type=int, default=None, help="review service port")
    parser.add_argument("--ui", type=Path, default=None, help="review client assets")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stacktrace",
        description="Track the evolution of a patch stack across releases.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    analyse = sub.add_parser(
        "analyse", aliases=["analyze"], help="run the full analysis pipeline"
    )
    _add_common_options(analyse)
    analyse.add_argument(
        "--review",
        choices=("terminal", "serve", "none"),
        default="none",
        help="how to resolve borderline pairs",
    )
    analyse.add_argument(
        "--bin-days",
        type=int,
        default=DEFAULT_HISTOGRAM_BIN_DAYS,
        help="integration histogram bin width in days",
    )
    analyse.add_argument(
        "--composition-releases",
        default=None,
        help="comma-separated release ids to restrict the composition report",
    )
    analyse.set_defaults(func=cmd_analyse)

    review = sub.add_parser("review", help="resolve pending pairs on the terminal")
    _add_common_options(review)
    review.set_defaults(func=cmd_review_terminal)

    serve_cmd = sub.add_parser("serve", help="serve the review API and client")
    _add_common_options(serve_cmd)
    serve_cmd.set_defaults(func=cmd_serve)
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    stack_path = args.stack or config_path_from_env()
    if stack_path is None:
        raise ConfigError(
            "no configuration file: pass --stack or set STACKTRACE_CONFIG"
        )
    stack_path = Path(stack_path)
    thresholds = load_thresholds(stack_path)
    overrides = {
        "auto_accept": args.ta,
        "interactive_floor": args.ti,
        "heading_floor": args.th,
        "message_weight": args.w,
    }
    changed = {key: value for key, value in overrides.items() if value is not None}
    if changed:
        try:
            thresholds = dataclasses.replace(thresholds, **changed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    paths = load_path_settings(stack_path)
    repo_path = args.repo or paths.get("repo")
    if repo_path is None:
        raise ConfigError("no repository: pass --repo or set [paths] repo")
    out_dir = args.out or paths.get("out") or "out"
    cache_path = args.cache or paths.get("cache")
    ui_dir = args.ui
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = Path("frontend/dist")
    composition_releases = None
    raw_filter = getattr(args, "composition_releases", None)
    if raw_filter:
        composition_releases = tuple(
            token.strip() for token in raw_filter.split(",") if token.strip()
        )
    return RunConfig(
        repo_path=Path(repo_path),
        stack_path=stack_path,
        thresholds=thresholds,
        cache_path=Path(cache_path) if cache_path else None,
        out_dir=Path(out_dir),
        jobs=args.jobs if args.jobs is not None else 1,
        review_mode=getattr(args, "review", "none"),
        port=args.port if args.port is not None else DEFAULT_PORT,
        ui_dir=ui_dir,
        bin_days=getattr(args, "bin_days", DEFAULT_HISTOGRAM_BIN_DAYS),
        composition_releases=composition_releases,
    )


def _print_summary(result) -> None:
    print(f"releases analysed:   {len(result.index.release_order)}")
    print(f"stack commits:       {len(result.index.all_stack)}")
    print(f"patch groups:        {len(result.groups)}")
    by_class = {"forwardport": 0, "backport": 0, "invariant": 0}
    for item in result.classified:
        by_class[item.patch_class.value] += 1
    for name, count in by_class.items():
        print(f"  {name + ':':<19}{count}")
    print(f"pending reviews:     {len(result.pending)}")
    print(f"outputs written to:  {result.out_dir}")


def _pending_items(config: RunConfig, cache: EvaluationCache):
    """Review items for the current pending queue, fetching commits by id."""
    repo = GitRepo(config.repo_path)
    commits = {}
    for pair in cache.pending_reviews():
        for commit_id in pair:
            if commit_id not in commits:
                try:
                    commits[commit_id] = get_commit(repo, commit_id)
                except RepoError as exc:
                    logger.warning("cannot materialize %s: %s", commit_id, exc)
    return build_review_items(cache, commits, config.thresholds)


def cmd_analyse(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    result = run_analysis(config)
    _print_summary(result)
    if not result.pending:
        return 0

    if config.review_mode == "none":
        print(
            f"{len(result.pending)} pair(s) need review; "
            "run the review or serve command to resolve them",
            file=sys.stderr,
        )
        return 2

    if config.review_mode == "terminal":
        status = cmd_review_terminal(args)
        if status != 0:
            return status
    else:  # serve
        status = _serve_until_interrupted(config)
        if status != 0:
            return status

    result = run_analysis(config)  # regroup with the new human decisions
    _print_summary(result)
    return 2 if result.pending else 0


def cmd_review_terminal(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    if not sys.stdin.isatty():
        print("review requires an interactive terminal", file=sys.stderr)
        return 1
    with EvaluationCache(config.cache_path) as cache:
        items = _pending_items(config, cache)
        if not items:
            print("nothing to review")
            return 0
        similar, dissimilar, skipped = run_terminal_review(cache, items)
    print(f"recorded {similar} similar, {dissimilar} dissimilar; {skipped} skipped")
    return 0


def _serve_until_interrupted(config: RunConfig) -> int:
    cache = EvaluationCache(config.cache_path)

    def provider():
        return _pending_items(config, cache)

    try:
        server = ReviewServer(
            ("127.0.0.1", config.port), cache, provider, ui_dir=config.ui_dir
        )
    except OSError as exc:
        print(f"cannot bind port {config.port}: {exc}", file=sys.stderr)
        cache.close()
        return 1
    print(f"review service on http://127.0.0.1:{config.port}/ (Ctrl-C to stop)")
    serve(server)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    return _serve_until_interrupted(config)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ConfigError, RepoError, CacheError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
