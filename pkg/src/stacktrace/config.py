"""Configuration: stack definition file, thresholds, paths and run settings.

The configuration format is line-oriented key-value text with INI-style
sections. `[release]` sections repeat, one per stack release, and their file
order defines the release order; standard-library configparser cannot
express that, hence the small parser here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .similarity import DEFAULT_DIST_CAP, Thresholds

ENV_CONFIG = "STACKTRACE_CONFIG"
DEFAULT_PORT = 8718


class ConfigError(ValueError):
    """Raised for unreadable, unparsable or invalid configuration."""


def read_sections(path: Path | str) -> list[tuple[str, dict[str, str]]]:
    """All `[section]` blocks of the file as (name, key/value dict), in order."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration file {path}: {exc}") from exc
    sections: list[tuple[str, dict[str, str]]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = {}
            sections.append((line[1:-1].strip(), current))
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        if current is None:
            raise ConfigError(f"{path}:{lineno}: key outside of any section")
        current[key.strip()] = value.strip()
    return sections


@dataclass(frozen=True)
class StackRelease:
    release_id: str
    branch: str
    base_version: str = ""


@dataclass(frozen=True)
class StackDefinition:
    """One patch stack: its mainline branch and the ordered release branches."""

    name: str
    mainline_branch: str
    releases: tuple[StackRelease, ...]

    def release_order(self) -> tuple[str, ...]:
        return tuple(release.release_id for release in self.releases)


def load_stack_definition(path: Path | str) -> StackDefinition:
    """Decode and validate the `[stack]` and `[release]` sections.

    Release order equals file order. Duplicate release ids and an empty
    release list are rejected; branch existence is checked later, against
    the repository.
    """
    sections = read_sections(path)
    stack: dict[str, str] | None = None
    releases: list[StackRelease] = []
    seen: set[str] = set()
    for name, values in sections:
        if name == "stack":
            stack = values
        elif name == "release":
            release_id = values.get("id")
            branch = values.get("branch")
            if not release_id or not branch:
                raise ConfigError(
                    f"{path}: every [release] section needs 'id' and 'branch'"
                )
            if release_id in seen:
                raise ConfigError(f"{path}: duplicate release id {release_id!r}")
            seen.add(release_id)
            releases.append(StackRelease(release_id, branch, values.get("base", "")))
    if stack is None:
        raise ConfigError(f"{path}: missing [stack] section")
    if not stack.get("name") or not stack.get("mainline"):
        raise ConfigError(f"{path}: [stack] needs 'name' and 'mainline'")
    if not releases:
        raise ConfigError(f"{path}: no [release] sections")
    return StackDefinition(stack["name"], stack["mainline"], tuple(releases))


_THRESHOLD_KEYS = {
    "ta": "auto_accept",
    "ti": "interactive_floor",
    "th": "heading_floor",
    "w": "message_weight",
}


def load_thresholds(path: Path | str) -> Thresholds:
    """Thresholds from the `[thresholds]` section; defaults where absent."""
    values: dict[str, float | int] = {}
    for name, section in read_sections(path):
        if name != "thresholds":
            continue
        for key, raw in section.items():
            try:
                if key in _THRESHOLD_KEYS:
                    values[_THRESHOLD_KEYS[key]] = float(raw)
                elif key == "dist-cap":
                    values["dist_cap"] = int(raw)
                else:
                    raise ConfigError(f"{path}: unknown thresholds key {key!r}")
            except ValueError as exc:
                if isinstance(exc, ConfigError):
                    raise
                raise ConfigError(f"{path}: bad value for {key!r}: {raw!r}") from exc
    try:
        return Thresholds(**values)  # type: ignore[arg-type]
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_path_settings(path: Path | str) -> dict[str, str]:
    """The `[paths]` section (cache and friends), empty when absent."""
    for name, section in read_sections(path):
        if name == "paths":
            return dict(section)
    return {}


def config_path_from_env() -> str | None:
    return os.environ.get(ENV_CONFIG) or None


@dataclass
class RunConfig:
    """Everything one pipeline run needs."""

    repo_path: Path
    stack_path: Path
    thresholds: Thresholds = field(default_factory=Thresholds)
    cache_path: Path | None = None
    out_dir: Path = Path("out")
    jobs: int = 1
    review_mode: str = "none"  # terminal | serve | none
    port: int = DEFAULT_PORT
    ui_dir: Path | None = None
    bin_days: int = 7  # integration histogram bin width
    composition_releases: tuple[str, ...] | None = None  # optional release filter

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.jobs}")
        if self.bin_days < 1:
            raise ConfigError(f"bin_days must be >= 1, got {self.bin_days}")
        if self.review_mode not in ("terminal", "serve", "none"):
            raise ConfigError(f"unknown review mode {self.review_mode!r}")
        self.repo_path = Path(self.repo_path)
        self.stack_path = Path(self.stack_path)
        self.out_dir = Path(self.out_dir)
        if self.cache_path is None:
            self.cache_path = self.out_dir / "evaluations.cache"
        self.cache_path = Path(self.cache_path)


__all__ = [
    "ConfigError",
    "DEFAULT_DIST_CAP",
    "DEFAULT_PORT",
    "ENV_CONFIG",
    "RunConfig",
    "StackDefinition",
    "StackRelease",
    "config_path_from_env",
    "load_path_settings",
    "load_stack_definition",
    "load_thresholds",
    "read_sections",
]
