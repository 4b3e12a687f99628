"""Shared fixtures: scripted git repositories with planted patch structure.

Each builder records what it planted (commit ids per logical patch and
release, twin commits in mainline, dates, expected partition and counts) so
tests compare pipeline output against the construction script rather than
against values the implementation produced.
"""

from __future__ import annotations

import os
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import pytest

DAY = 86_400
EPOCH = 1_600_000_000  # fixed base timestamp, keeps fixtures reproducible


def day(n: float) -> int:
    return int(EPOCH + n * DAY)


class GitSandbox:
    """Minimal git driver for building fixture repositories."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.run("init", "-q", "-b", "master")
        self.run("config", "user.name", "Fixture Dev")
        self.run("config", "user.email", "dev@example.org")

    def run(self, *args: str, env: dict | None = None) -> str:
        merged = dict(os.environ, **(env or {}))
        proc = subprocess.run(
            ["git", "-C", str(self.path), *args],
            capture_output=True,
            text=True,
            env=merged,
        )
        if proc.returncode != 0:
            raise RuntimeError(f"git {' '.join(args)} failed: {proc.stderr}")
        return proc.stdout

    def write(self, relative: str, text: str) -> None:
        target = self.path / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")

    def write_bytes(self, relative: str, blob: bytes) -> None:
        target = self.path / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(blob)

    def commit(self, message: str, when: int, allow_empty: bool = False) -> str:
        self.run("add", "-A")
        args = ["commit", "-q", "-m", message]
        if allow_empty:
            args.append("--allow-empty")
        self.run(
            *args,
            env={
                "GIT_AUTHOR_DATE": f"{when} +0000",
                "GIT_COMMITTER_DATE": f"{when} +0000",
            },
        )
        return self.head()

    def head(self) -> str:
        return self.run("rev-parse", "HEAD").strip()

    def checkout(self, rev: str) -> None:
        self.run("checkout", "-q", rev)

    def checkout_new(self, name: str, start: str) -> None:
        self.run("checkout", "-q", "-b", name, start)

    def merge(self, rev: str, when: int) -> str:
        self.run(
            "merge",
            "-q",
            "--no-ff",
            "-m",
            f"merge {rev}",
            rev,
            env={
                "GIT_AUTHOR_DATE": f"{when} +0000",
                "GIT_COMMITTER_DATE": f"{when} +0000",
            },
        )
        return self.head()


def write_stack_config(
    path: Path,
    name: str,
    mainline: str,
    releases: list[tuple[str, str, str]],
    extra: str = "",
) -> Path:
    parts = [f"[stack]\nname = {name}\nmainline = {mainline}\n"]
    for release_id, branch, base in releases:
        parts.append(f"[release]\nid = {release_id}\nbranch = {branch}\nbase = {base}\n")
    # acceptance fixtures pin the thresholds explicitly
    parts.append("[thresholds]\nta = 0.82\nti = 0.70\nth = 0.80\nw = 0.40\n")
    if extra:
        parts.append(extra)
    path.write_text("\n".join(parts), encoding="utf-8")
    return path


def feature_source(name: str, variant: int) -> str:
    """Content of one logical patch; the token drift moves to a different
    line on each step so first and last version accumulate both edits."""
    arg = ["0", "1", "1"][variant]
    note = ["default", "default", "tuned"][variant]
    return (
        f"int {name}_setup(void)\n"
        "{\n"
        f"        return {name}_register({arg});\n"
        "}\n"
        f"/* mode: {note} */\n"
    )


def feature_message(name: str, variant: int) -> str:
    return [
        f"{name}: add {name} setup helper",
        f"{name}: add the {name} setup helper",
        f"{name}: add the {name} setup helper routine",
    ][variant]


SIGN_OFF = "Signed-off-by: Ann Dev <ann@example.org>"


@dataclass
class StackFixture:
    """One scripted repository plus everything the builder planted."""

    repo_path: Path
    config_path: Path
    release_ids: list[str]
    mainline: list[str] = field(default_factory=list)
    # logical patch name -> release_id -> commit id
    logical: dict[str, dict[str, str]] = field(default_factory=dict)
    twins: dict[str, str] = field(default_factory=dict)  # logical name -> mainline id
    expected_groups: set[frozenset[str]] = field(default_factory=set)
    expected_class: dict[str, str] = field(default_factory=dict)  # name -> class
    expected_days: dict[str, int] = field(default_factory=dict)
    sizes: dict[str, int] = field(default_factory=dict)
    composition: dict[str, tuple[int, int, int]] = field(default_factory=dict)

    def commit_of(self, name: str, release_id: str) -> str:
        return self.logical[name][release_id]

    def all_stack_ids(self) -> set[str]:
        return {sha for per in self.logical.values() for sha in per.values()}


# --- planted fixture -------------------------------------------------------
#
# 20 mainline commits, 3 releases of 5 patches each. Logical patches one to
# four drift mildly (every cross-release pair rates well above the accept
# threshold); the fifth is tuned as a chain: consecutive versions rate 0.84,
# first-to-last rates 0.68, so the group forms only through the middle
# member. Two logical patches have mainline twins: one forwardport (+30
# days) and one backport (-12 days).

CHAIN_MSG_BASE = "throttle: raise the idle poll delay "  # 36 chars
CHAIN_MSGS = [CHAIN_MSG_BASE + s for s in ("alfa", "alfb", "blfb")]
CHAIN_LINES = ["a" * 40, "a" * 20 + "c" * 20, "c" * 40]


@pytest.fixture(scope="session")
def planted_stack(tmp_path_factory: pytest.TempPathFactory) -> StackFixture:
    root = tmp_path_factory.mktemp("planted")
    git = GitSandbox(root / "repo")
    fixture = StackFixture(
        repo_path=root / "repo",
        config_path=root / "stack.conf",
        release_ids=["v1", "v2", "v3"],
    )

    assert len(CHAIN_MSG_BASE) == 36
    for text in CHAIN_MSGS:
        assert len(text) == 40
    for line in CHAIN_LINES:
        assert len(line) == 40

    # mainline: 18 fillers, then the two twins
    for k in range(1, 19):
        git.write(f"src/core_{k:02d}.c", f"/* core module {k} */\nint core_{k};\n")
        fixture.mainline.append(git.commit(f"core: extend module {k:02d}", day(k - 1)))
    bases = {"v1": fixture.mainline[4], "v2": fixture.mainline[5], "v3": fixture.mainline[6]}

    # backport origin: authored before any stack release carried it
    git.write("features/batch_io.c", feature_source("batch_io", 0))
    twin_backport = git.commit(

        "batch_io: bound queue depth during resume\n\n" + SIGN_OFF, day(10)
    )
    fixture.mainline.append(twin_backport)
    fixture.twins["batch_io"] = twin_backport

    # forwardport landing: authored after the stack carried it
    git.write("features/watchdog.c", feature_source("watchdog", 2))
    twin_forward = git.commit(
        feature_message("watchdog", 2) + "\n\n" + SIGN_OFF, day(51)
    )
    fixture.mainline.append(twin_forward)
    fixture.twins["watchdog"] = twin_forward

    logical_names = ["watchdog", "batch_io", "hotplug", "softirq", "throttle"]
    for release_index, release_id in enumerate(fixture.release_ids):
        git.checkout_new(f"stack/{release_id}", bases[release_id])
        base_day = 21 + 10 * release_index
        for offset, name in enumerate(logical_names):
            when = day(base_day + offset)
            if name == "throttle":
                git.write("features/throttle.c", CHAIN_LINES[release_index] + "\n")
                message = CHAIN_MSGS[release_index]
            elif name == "batch_io":
                git.write("features/batch_io.c", feature_source(name, release_index))
                message = "batch_io: bound queue depth during resume"
            else:
                git.write(f"features/{name}.c", feature_source(name, release_index))
                message = feature_message(name, release_index)
            sha = git.commit(message, when)
            fixture.logical.setdefault(name, {})[release_id] = sha
        git.checkout("master")

    write_stack_config(
        fixture.config_path,
        "planted",
        "master",
        [(rid, f"stack/{rid}", bases[rid][:7]) for rid in fixture.release_ids],
    )

    fixture.expected_groups = {
        frozenset(per.values()) for per in fixture.logical.values()
    }
    fixture.expected_class = {
        "watchdog": "forwardport",
        "batch_io": "backport",
        "hotplug": "invariant",
        "softirq": "invariant",
        "throttle": "invariant",
    }
    fixture.expected_days = {"watchdog": 30, "batch_io": -12}
    fixture.sizes = {"v1": 5, "v2": 5, "v3": 5}
    fixture.composition = {rid: (1, 1, 3) for rid in fixture.release_ids}
    return fixture


# --- flow fixture ----------------------------------------------------------
#
# Releases of sizes 5, 6 and 4: one patch dropped without a twin, one
# forwardported (+27 days) and later dropped, one backported the very same
# day (integration time truncates to the zero bin), two patches added in the
# second release.


@pytest.fixture(scope="session")
def flow_stack(tmp_path_factory: pytest.TempPathFactory) -> StackFixture:
    root = tmp_path_factory.mktemp("flow")
    git = GitSandbox(root / "repo")
    fixture = StackFixture(
        repo_path=root / "repo",
        config_path=root / "stack.conf",
        release_ids=["r1", "r2", "r3"],
    )

    for k in range(1, 5):
        git.write(f"src/base_{k}.c", f"/* base {k} */\n")
        fixture.mainline.append(git.commit(f"base: module {k}", day(k - 1)))
    bases = {"r1": fixture.mainline[1], "r2": fixture.mainline[2], "r3": fixture.mainline[3]}

    git.write("features/console.c", feature_source("console", 1))
    twin_console = git.commit(
        feature_message("console", 1) + "\n\n" + SIGN_OFF, day(40)
    )
    fixture.mainline.append(twin_console)
    fixture.twins["console"] = twin_console

    git.write("features/dma.c", feature_source("dma", 0))
    twin_dma = git.commit("dma: guard map teardown against reentry\n\n" + SIGN_OFF, day(14))
    fixture.mainline.append(twin_dma)
    fixture.twins["dma"] = twin_dma

    per_release = {
        "r1": ["affinity", "balloon", "console", "dma", "epoll"],
        "r2": ["affinity", "balloon", "console", "dma", "fuse", "gpio"],
        "r3": ["affinity", "balloon", "fuse", "gpio"],
    }
    release_days = {"r1": 11, "r2": 21, "r3": 31}
    for release_index, release_id in enumerate(fixture.release_ids):
        git.checkout_new(f"stack/{release_id}", bases[release_id])
        for offset, name in enumerate(per_release[release_id]):
            when = day(release_days[release_id] + offset)
            if name == "dma":
                if release_id == "r1":
                    when = day(14) + 5 * 3600  # five hours after the twin
                git.write(f"features/{name}.c", feature_source(name, release_index))
                message = "dma: guard map teardown against reentry"
            else:
                git.write(f"features/{name}.c", feature_source(name, release_index))
                message = feature_message(name, release_index)
            sha = git.commit(message, when)
            fixture.logical.setdefault(name, {})[release_id] = sha
        git.checkout("master")

    write_stack_config(
        fixture.config_path,
        "flow",
        "master",
        [(rid, f"stack/{rid}", bases[rid][:7]) for rid in fixture.release_ids],
    )

    fixture.expected_groups = {
        frozenset(per.values()) for per in fixture.logical.values()
    }
    fixture.expected_class = {
        "affinity": "invariant",
        "balloon": "invariant",
        "console": "forwardport",
        "dma": "backport",
        "epoll": "invariant",
        "fuse": "invariant",
        "gpio": "invariant",
    }
    fixture.expected_days = {"console": 27, "dma": 0}
    fixture.sizes = {"r1": 5, "r2": 6, "r3": 4}
    fixture.composition = {"r1": (1, 1, 3), "r2": (1, 1, 4), "r3": (0, 0, 4)}
    return fixture


# --- borderline fixture ----------------------------------------------------
#
# One cross-release pair tuned to rate exactly 0.76 with the pinned
# thresholds: message rating 0.7 (12 edits over 40 chars), added-line rating
# 0.6 (16 edits over 40 chars), removed lines identical, so
# 0.4*0.7 + 0.6*(0.6+1)/2 = 0.76 — inside [0.70, 0.82).

BORDER_MSG_BASE = "tuning: rework flush policy "  # 28 chars
BORDER_LINE_BASE = "flush_watermark_limit = "  # 24 chars
BORDER_RATING = 0.4 * 0.7 + 0.6 * ((0.6 + 1.0) / 2.0)


@pytest.fixture(scope="session")
def borderline_stack(tmp_path_factory: pytest.TempPathFactory) -> StackFixture:
    root = tmp_path_factory.mktemp("borderline")
    git = GitSandbox(root / "repo")
    fixture = StackFixture(
        repo_path=root / "repo",
        config_path=root / "stack.conf",
        release_ids=["s1", "s2"],
    )

    assert len(BORDER_MSG_BASE) == 28
    assert len(BORDER_LINE_BASE) == 24

    base_file = BORDER_LINE_BASE + "100\n" + "".join(
        f"option_{k} = {k}\n" for k in range(7)
    )
    git.write("notes/tuning.txt", base_file)
    base = git.commit("notes: document tuning defaults", day(0))
    fixture.mainline.append(base)
    git.write("src/base.c", "/* base */\n")
    fixture.mainline.append(git.commit("base: scaffold", day(1)))

    messages = {
        "s1": BORDER_MSG_BASE + "a" * 12,
        "s2": BORDER_MSG_BASE + "b" * 12,
    }
    lines = {
        "s1": BORDER_LINE_BASE + "a" * 16,
        "s2": BORDER_LINE_BASE + "b" * 16,
    }
    for release_id in fixture.release_ids:
        assert len(messages[release_id]) == 40
        assert len(lines[release_id]) == 40
        git.checkout_new(f"stack/{release_id}", base)
        rest = base_file.split("\n", 1)[1]
        git.write("notes/tuning.txt", lines[release_id] + "\n" + rest)
        when = day(5 if release_id == "s1" else 6)
        sha = git.commit(messages[release_id], when)
        fixture.logical.setdefault("tuning", {})[release_id] = sha
        git.checkout("master")

    write_stack_config(
        fixture.config_path,
        "borderline",
        "master",
        [(rid, f"stack/{rid}", base[:7]) for rid in fixture.release_ids],
    )
    fixture.sizes = {"s1": 1, "s2": 1}
    return fixture
