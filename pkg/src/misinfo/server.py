"""HTTP+JSON annotation service over an AnnotationStore.

All /api responses are JSON; errors map to 4xx with {"error": msg}.
The server optionally serves a static UI directory for non-API paths.
CORS is wide open so a separately hosted UI can talk to it.
"""

from __future__ import annotations

import json
import logging
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .annotation import AnnotationStore, save_labeled
from .errors import (AdjudicationError, MisinfoError, NotFoundError,
                     ValidationError)

log = logging.getLogger(__name__)

MAX_BODY_BYTES = 1 << 20


class AnnotationServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, store: AnnotationStore, output_path,
                 ui_dir=None):
        super().__init__(address, _Handler)
        self.store = store
        self.output_path = Path(output_path)
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None

    @property
    def port(self) -> int:
        return self.server_address[1]


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        log.debug("%s %s", self.address_string(), fmt % args)

    # -- plumbing -----------------------------------------------------

    def _send_json(self, code: int, obj) -> None:
        body = json.dumps(obj).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _error(self, code: int, message: str) -> None:
        self._send_json(code, {"error": message})

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY_BYTES:
            raise ValidationError("request body too large")
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"request body is not JSON: {exc.msg}")
        if not isinstance(obj, dict):
            raise ValidationError("request body must be a JSON object")
        return obj

    def _dispatch(self, handlers) -> None:
        url = urlparse(self.path)
        handler = handlers.get(url.path)
        try:
            if handler is not None:
                handler(parse_qs(url.query))
            elif self.command == "GET" and self.server.ui_dir:
                self._serve_static(url.path)
            else:
                self._error(404, f"no such endpoint: {url.path}")
        except ValidationError as exc:
            self._error(400, str(exc))
        except NotFoundError as exc:
            self._error(404, str(exc))
        except AdjudicationError as exc:
            self._send_json(409, {"error": str(exc),
                                  "tweet_ids": exc.tweet_ids})
        except MisinfoError as exc:
            self._error(400, str(exc))

    # -- endpoints ------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        self._dispatch({
            "/api/session": self._get_session,
            "/api/next": self._get_next,
            "/api/ties": self._get_ties,
            "/api/agreement": self._get_agreement,
        })

    def do_POST(self):
        self._dispatch({
            "/api/labels": self._post_label,
            "/api/adjudications": self._post_adjudication,
            "/api/finalize": self._post_finalize,
        })

    def _get_session(self, query):
        store = self.server.store
        outcomes = store.outcomes().values()
        decided: dict[str, int] = {}
        ties = unlabeled = 0
        for o in outcomes:
            if o.status == "decided":
                decided[o.decided] = decided.get(o.decided, 0) + 1
            elif o.status == "tie":
                ties += 1
            else:
                unlabeled += 1
        self._send_json(200, {
            "dataset_size": len(store.dataset),
            "provenance": store.dataset.provenance,
            "decided": decided,
            "ties": ties,
            "unlabeled": unlabeled,
        })

    def _get_next(self, query):
        annotator = (query.get("annotator") or [""])[0]
        record = self.server.store.next_for(annotator)
        if record is None:
            self._send_json(200, {"done": True, "tweet": None})
        else:
            self._send_json(200, {"done": False, "tweet": {
                "id": record.id, "text": record.text, "date": record.date}})

    def _get_ties(self, query):
        queue = self.server.store.adjudication_queue()
        self._send_json(200, {"ties": [o.to_json() for o in queue]})

    def _get_agreement(self, query):
        self._send_json(200, self.server.store.agreement().to_json())

    def _post_label(self, query):
        body = self._read_body()
        for key in ("tweet_id", "annotator_id", "label"):
            if not isinstance(body.get(key), str):
                raise ValidationError(f"missing or non-string field {key!r}")
        outcome = self.server.store.record_label(
            body["tweet_id"], body["annotator_id"], body["label"])
        self._send_json(200, outcome.to_json())

    def _post_adjudication(self, query):
        body = self._read_body()
        for key in ("tweet_id", "label"):
            if not isinstance(body.get(key), str):
                raise ValidationError(f"missing or non-string field {key!r}")
        self.server.store.record_adjudication(body["tweet_id"], body["label"])
        self._send_json(200, {"ok": True})

    def _post_finalize(self, query):
        body = self._read_body()
        extra = body.get("adjudications") or {}
        if not isinstance(extra, dict):
            raise ValidationError("adjudications must be an object")
        labeled = self.server.store.finalize(extra)
        save_labeled(labeled, self.server.output_path)
        self._send_json(200, {
            "written": str(self.server.output_path),
            "entries": len(labeled.entries),
            "class_counts": labeled.class_counts,
        })

    # -- static UI ----------------------------------------------------------

    def _serve_static(self, path: str) -> None:
        root = self.server.ui_dir
        name = path.lstrip("/") or "index.html"
        target = (root / name).resolve()
        if root not in target.parents and target != root:
            self._error(404, "not found")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            # SPA fallback keeps client-side routes working
            target = root / "index.html"
            if not target.is_file():
                self._error(404, "not found")
                return
        body = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)


def make_server(store: AnnotationStore, output_path, host: str = "127.0.0.1",
                port: int = 0, ui_dir=None) -> AnnotationServer:
    """Bind the service; port 0 picks a free port (see .port)."""
    try:
        return AnnotationServer((host, port), store, output_path, ui_dir)
    except OSError as exc:
        raise MisinfoError(
            f"cannot bind {host}:{port}: {exc.strerror or exc}") from exc
