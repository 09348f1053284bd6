"""HTTP scoring service.

POST /score takes one original tweet plus packet-shaped comment
objects and returns per-comment sentiment, emotion, and troll flags;
GET /health reports readiness and loaded model versions.  Models are
loaded once before the server starts and shared read-only across the
threaded request handlers, so identical requests produce byte-identical
responses, sequentially or concurrently.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .bundle import ModelBundle, score_comments
from .corpus import comment_from_packet_element

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8650

CORS_HEADERS = {
    "Access-Control-Allow-Origin": "*",
    "Access-Control-Allow-Methods": "GET, POST, OPTIONS",
    "Access-Control-Allow-Headers": "Content-Type",
}


class ScoringApp:
    """Transport-independent request handling; the HTTP layer only
    moves bytes."""

    def __init__(self, bundle: ModelBundle | None):
        self.bundle = bundle

    def ready(self) -> bool:
        return self.bundle is not None and self.bundle.troll is not None

    def handle_health(self) -> tuple[int, dict]:
        versions = self.bundle.versions() if self.bundle is not None else {}
        return 200, {"ready": self.ready(), "model_versions": versions}

    def handle_score(self, body: bytes) -> tuple[int, dict]:
        if not self.ready():
            return 503, {"error": "models are not loaded"}
        try:
            payload = json.loads(body)
        except json.JSONDecodeError as exc:
            return 400, {"error": f"body is not valid JSON: {exc}"}
        if not isinstance(payload, dict):
            return 400, {"error": "body must be a JSON object"}
        original_text = payload.get("original_text")
        comments = payload.get("comments")
        if not isinstance(original_text, str):
            return 400, {"error": "original_text must be a string"}
        if not isinstance(comments, list) or not comments:
            return 400, {"error": "comments must be a non-empty array"}

        records = []
        ids = []
        pre_rejected = []  # (index, id, reason) for schema-invalid elements
        for i, element in enumerate(comments):
            comment_id = str(element.get("id", i)) if isinstance(element, dict) else str(i)
            record, problem = comment_from_packet_element(element)
            if record is None:
                pre_rejected.append((i, comment_id, problem))
            else:
                records.append(record)
                ids.append(comment_id)

        outcome = score_comments(self.bundle, records, original_text, comment_ids=ids)
        scored = [
            {
                "id": s.comment_id,
                "sentiment": s.sentiment,
                "emotion": s.emotion,
                "troll_probability": s.troll_probability,
                "troll_flag": s.troll_flag,
            }
            for s in outcome.scored
        ]
        rejected = [{"id": r.comment_id, "reason": r.reason} for r in outcome.rejected]
        rejected += [{"id": cid, "reason": f"bad-element: {why}"} for _, cid, why in pre_rejected]
        return 200, {
            "model_versions": self.bundle.versions(),
            "original_sentiment": outcome.original_sentiment,
            "scored": scored,
            "rejected": rejected,
        }


def _encode(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


class _Handler(BaseHTTPRequestHandler):
    app: ScoringApp  # set by make_server

    def _send(self, status: int, doc: dict) -> None:
        body = _encode(doc)
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        for name, value in CORS_HEADERS.items():
            self.send_header(name, value)
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/health":
            self._send(*self.app.handle_health())
        else:
            self._send(404, {"error": f"unknown path {self.path}"})

    def do_POST(self):
        if self.path != "/score":
            self._send(404, {"error": f"unknown path {self.path}"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length)
        self._send(*self.app.handle_score(body))

    def do_OPTIONS(self):
        self.send_response(204)
        for name, value in CORS_HEADERS.items():
            self.send_header(name, value)
        self.end_headers()

    def log_message(self, format, *args):  # quiet by default
        pass


def make_server(app: ScoringApp, host: str = DEFAULT_HOST, port: int = DEFAULT_PORT) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"app": app})
    return ThreadingHTTPServer((host, port), handler)


def serve(bundle: ModelBundle, host: str = DEFAULT_HOST, port: int = DEFAULT_PORT) -> None:
    server = make_server(ScoringApp(bundle), host, port)
    address = f"http://{server.server_address[0]}:{server.server_address[1]}"
    print(f"scoring service listening on {address}")
    try:
        server.serve_forever()
    finally:
        server.server_close()
