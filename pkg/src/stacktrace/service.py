"""Localhost JSON interface over the evaluation cache for the human review
loop, plus static serving of the browser review client.

Routes: GET /api/pending, POST /api/verdict, GET /api/health. Requests are
handled sequentially, which keeps cache writes serialized. Diffs are sent
verbatim; presentation belongs to the client.
"""

from __future__ import annotations

import json
import logging
import mimetypes
from dataclasses import asdict, dataclass
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path
from typing import Callable, Mapping

from .cache import EvaluationCache, Pair
from .repo import Commit
from .similarity import Thresholds, Verdict, evaluate_pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReviewItem:
    """One borderline pair, ready for human judgement."""

    id_a: str
    id_b: str
    msg_a: str
    msg_b: str
    diff_a: str
    diff_b: str
    rm: float
    rd: float
    r: float


def build_review_items(
    cache: EvaluationCache,
    commits: Mapping[str, Commit],
    thresholds: Thresholds,
) -> list[ReviewItem]:
    """Materialize the pending queue. Ratings are recomputed from the
    commits (the store only persists the combined rating). Pairs whose
    commits are gone are skipped with a warning."""
    items = []
    for id_a, id_b in cache.pending_reviews():
        commit_a = commits.get(id_a)
        commit_b = commits.get(id_b)
        if commit_a is None or commit_b is None:
            logger.warning("pending pair (%s, %s) no longer resolvable", id_a, id_b)
            continue
        result = evaluate_pair(commit_a, commit_b, thresholds)
        items.append(
            ReviewItem(
                id_a=id_a,
                id_b=id_b,
                msg_a=commit_a.message,
                msg_b=commit_b.message,
                diff_a=commit_a.raw_diff,
                diff_b=commit_b.raw_diff,
                rm=result.message_rating,
                rd=result.diff_rating,
                r=result.rating,
            )
        )
    return items


class ReviewServer(HTTPServer):
    """Single-threaded HTTP server bound to the review handler."""

    def __init__(
        self,
        address: tuple[str, int],
        cache: EvaluationCache,
        item_provider: Callable[[], list[ReviewItem]],
        ui_dir: Path | None = None,
    ):
        super().__init__(address, ReviewHandler)
        self.cache = cache
        self.item_provider = item_provider
        self.ui_dir = ui_dir


class ReviewHandler(BaseHTTPRequestHandler):
    server: ReviewServer

    def log_message(self, format: str, *args: object) -> None:
        logger.debug("%s %s", self.address_string(), format % args)

    def _send_json(self, status: int, payload: object) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_empty(self, status: int) -> None:
        self.send_response(status)
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        if self.path == "/api/health":
            self._send_json(200, {"status": "ok"})
        elif self.path == "/api/pending":
            try:
                items = [asdict(item) for item in self.server.item_provider()]
            except Exception:
                logger.exception("pending queue unavailable")
                self._send_json(500, {"error": "cache read failure"})
                return
            self._send_json(200, items)
        else:
            self._serve_static()

    def do_POST(self) -> None:  # noqa: N802
        if self.path != "/api/verdict":
            self._send_json(404, {"error": "unknown route"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length) or b"{}")
            id_a = payload["id_a"]
            id_b = payload["id_b"]
            verdict_token = payload["verdict"]
        except (ValueError, KeyError, TypeError):
            self._send_json(400, {"error": "body must be JSON with id_a, id_b, verdict"})
            return
        if verdict_token not in ("similar", "dissimilar"):
            self._send_json(400, {"error": f"bad verdict {verdict_token!r}"})
            return
        pair: Pair = (id_a, id_b)
        cache = self.server.cache
        record = cache.lookup(pair)
        if record is None or (
            record.source == "auto" and record.verdict is not Verdict.NEEDS_REVIEW
        ):
            self._send_json(404, {"error": "pair is not under review"})
            return
        if record.source == "human":
            self._send_json(409, {"error": "pair already decided"})
            return
        cache.record_human(pair, Verdict(verdict_token))
        self._send_empty(204)

    def _serve_static(self) -> None:
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            self._send_json(404, {"error": "no ui directory configured"})
            return
        relative = self.path.lstrip("/") or "index.html"
        target = (ui_dir / relative).resolve()
        try:
            target.relative_to(ui_dir.resolve())
        except ValueError:
            self._send_json(404, {"error": "not found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def serve(server: ReviewServer) -> None:
    """Serve until interrupted, then close cleanly (cache flushed)."""
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        logger.info("interrupted, shutting down")
    finally:
        server.server_close()
        server.cache.close()


def run_terminal_review(
    cache: EvaluationCache,
    items: list[ReviewItem],
    ask: Callable[[str], str] = input,
    emit: Callable[[str], None] = print,
) -> tuple[int, int, int]:
    """Walk the pending queue on a terminal.

    Shows both messages and both diffs per pair and asks for y / n / s
    (similar / dissimilar / skip). Returns (similar, dissimilar, skipped)
    counts; skipped pairs stay pending.
    """
    similar = dissimilar = skipped = 0
    for number, item in enumerate(items, 1):
        emit(f"\n=== review {number}/{len(items)}: {item.id_a} vs {item.id_b} ===")
        emit(f"ratings: message {item.rm:.4f}  diff {item.rd:.4f}  combined {item.r:.4f}")
        emit(f"\n--- message A ({item.id_a}) ---\n{item.msg_a}")
        emit(f"\n--- message B ({item.id_b}) ---\n{item.msg_b}")
        emit(f"\n--- diff A ---\n{item.diff_a}")
        emit(f"--- diff B ---\n{item.diff_b}")
        while True:
            answer = ask("similar? [y/n/s] ").strip().lower()
            if answer in ("y", "yes"):
                cache.record_human((item.id_a, item.id_b), Verdict.SIMILAR)
                similar += 1
                break
            if answer in ("n", "no"):
                cache.record_human((item.id_a, item.id_b), Verdict.DISSIMILAR)
                dissimilar += 1
                break
            if answer in ("s", "skip", ""):
                skipped += 1
                break
            emit("please answer y, n or s")
    return similar, dissimilar, skipped
