"""Deterministic mock implementation of the abstractive wire contract.

Stands in for the real seq2seq service in tests and local runs: the
"summary" is the first N sentences of the input, truncated to
max_length words when the request provides one.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..summarizers.abstractive import truncate_words
from ..textproc import segment_sentences

DEFAULT_SENTENCES = 2


def mock_summary(text: str, max_length: int | None, n_sentences: int = DEFAULT_SENTENCES) -> str:
    sents = segment_sentences(text)
    summary = " ".join(s.text for s in sents[:n_sentences])
    if max_length is not None:
        summary = truncate_words(summary, max_length)
    return summary


class _MockHandler(BaseHTTPRequestHandler):
    n_sentences = DEFAULT_SENTENCES

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        if self.path == "/health":
            self._send(200, {"status": "ok"})
        else:
            self._send(404, {"error": f"unknown path {self.path}"})

    def do_POST(self) -> None:  # noqa: N802
        if self.path != "/summarize":
            self._send(404, {"error": f"unknown path {self.path}"})
            return
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length)
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._send(400, {"error": "body is not valid JSON"})
            return
        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            self._send(400, {"error": "body must be a JSON object with a string 'text'"})
            return
        text = payload["text"]
        if not text.strip():
            self._send(400, {"error": "'text' must be non-empty"})
            return
        max_length = payload.get("max_length")
        if max_length is not None and (not isinstance(max_length, int) or max_length <= 0):
            self._send(400, {"error": "'max_length' must be a positive integer"})
            return
        self._send(200, {"summary": mock_summary(text, max_length, self.n_sentences)})

    def log_message(self, *args) -> None:  # silence per-request stderr noise
        pass


class MockAbstractiveServer:
    """Loopback mock server; use as a context manager in tests."""

    def __init__(self, port: int = 0, n_sentences: int = DEFAULT_SENTENCES):
        handler = type("Handler", (_MockHandler,), {"n_sentences": n_sentences})
        self._httpd = ThreadingHTTPServer(("127.0.0.1", port), handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self) -> "MockAbstractiveServer":
        self._thread.start()
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def serve_forever(self) -> None:
        print(f"mock abstractive server listening on {self.url}", flush=True)
        self._thread.start()
        self._thread.join()
