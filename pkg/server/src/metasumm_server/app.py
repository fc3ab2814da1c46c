"""FastAPI application implementing the abstractive wire contract.

POST /summarize {"text": str, "max_length": int?} -> {"summary": str};
GET /health -> {"status": "ok"}. The request body is parsed manually so
malformed JSON and invalid fields answer 400, matching the mock server.
"""

from __future__ import annotations

import json
import logging
import threading
import time

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .model import Seq2SeqEngine

logger = logging.getLogger("metasumm_server")


def create_app(engine: Seq2SeqEngine) -> FastAPI:
    app = FastAPI(title="metasumm abstractive server", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/summarize")
    async def summarize(request: Request) -> JSONResponse:
        raw = await request.body()
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            return JSONResponse({"error": "body is not valid JSON"}, status_code=400)
        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            return JSONResponse(
                {"error": "body must be a JSON object with a string 'text'"}, status_code=400
            )
        text = payload["text"]
        if not text.strip():
            return JSONResponse({"error": "'text' must be non-empty"}, status_code=400)
        max_length = payload.get("max_length")
        if max_length is not None and (not isinstance(max_length, int) or max_length <= 0):
            return JSONResponse({"error": "'max_length' must be a positive integer"}, status_code=400)
        try:
            summary = engine.summarize(text, max_length)
        except Exception as exc:  # surfaced as a 5xx model failure per contract
            logger.exception("generation failed")
            return JSONResponse({"error": f"generation failed: {exc}"}, status_code=500)
        return JSONResponse({"summary": summary})

    return app


class ServerHandle:
    """Serve an app from a background thread; used by tests and scripts."""

    def __init__(self, app: FastAPI, port: int = 0):
        config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
        self._server = uvicorn.Server(config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self) -> "ServerHandle":
        self._thread.start()
        deadline = time.monotonic() + 30
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server failed to start within 30s")
            time.sleep(0.02)
        return self

    @property
    def url(self) -> str:
        host, port = self._server.servers[0].sockets[0].getsockname()[:2]
        return f"http://{host}:{port}"

    def __exit__(self, *exc) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)
