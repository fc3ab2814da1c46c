"""HTTP client for the abstractive summarization service, plus hybrid-long.

Wire contract: POST /summarize {"text": str, "max_length": int?} ->
{"summary": str}; GET /health -> {"status": "ok"}. The client truncates
input to the configured token cap before sending and retries transport
failures only.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import requests

from ..errors import ConfigError, ProtocolError, ServiceError, TransportError
from ..textproc import Document, NormalizationConfig, document
from . import SummaryBudget, SummaryResult, SummarizerId

ENDPOINT_ENV_VAR = "METASUMM_ABSTRACTIVE_URL"


@dataclass(frozen=True)
class AbstractiveClientConfig:
    endpoint: str
    timeout_s: float = 30.0
    max_input_tokens: int = 512
    retries: int = 2
    max_concurrency: int = 4

    def __post_init__(self) -> None:
        if self.timeout_s <= 0:
            raise ConfigError(f"timeout must be positive, got {self.timeout_s}")
        if self.max_input_tokens <= 0:
            raise ConfigError(f"max input tokens must be positive, got {self.max_input_tokens}")


def canonical_text(doc: Document) -> str:
    """Document text as its sentence spans joined by single spaces."""
    return " ".join(s.text for s in doc.sentences)


def truncate_words(text: str, max_tokens: int) -> str:
    """Keep the first `max_tokens` whitespace-delimited words."""
    return " ".join(text.split()[:max_tokens])


class AbstractiveClient:
    """Thread-safe client; at most `max_concurrency` requests are in flight."""

    def __init__(self, cfg: AbstractiveClientConfig):
        self.cfg = cfg
        self._endpoint = cfg.endpoint.rstrip("/")
        self._sem = threading.BoundedSemaphore(cfg.max_concurrency)

    def health(self) -> bool:
        try:
            resp = requests.get(f"{self._endpoint}/health", timeout=self.cfg.timeout_s)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TransportError(f"health check failed for {self._endpoint}: {exc}") from exc
        return resp.ok

    def summarize(self, text: str, max_length: int | None = None) -> str:
        body: dict = {"text": text}
        if max_length is not None:
            body["max_length"] = int(max_length)
        last_exc: Exception | None = None
        with self._sem:
            for _ in range(self.cfg.retries + 1):
                try:
                    resp = requests.post(
                        f"{self._endpoint}/summarize", json=body, timeout=self.cfg.timeout_s
                    )
                    break
                except (requests.ConnectionError, requests.Timeout) as exc:
                    last_exc = exc
            else:
                raise TransportError(
                    f"abstractive service unreachable at {self._endpoint} "
                    f"after {self.cfg.retries + 1} attempts: {last_exc}"
                ) from last_exc
        if not resp.ok:
            raise ServiceError(resp.status_code, resp.text)
        try:
            payload = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"response is not JSON: {resp.text[:200]}") from exc
        summary = payload.get("summary") if isinstance(payload, dict) else None
        if not isinstance(summary, str):
            raise ProtocolError(f"response lacks a string 'summary' field: {payload!r}")
        return summary


def abstractive_summarize(
    doc: Document, client: AbstractiveClient, max_length: int | None = None
) -> SummaryResult:
    """Truncate to the client's input cap, call the service, tag t5_article."""
    text = truncate_words(canonical_text(doc), client.cfg.max_input_tokens)
    return SummaryResult(
        summarizer=SummarizerId.t5_article,
        text=client.summarize(text, max_length=max_length),
    )


def hybrid_long(
    doc: Document,
    client: AbstractiveClient,
    budget: SummaryBudget | None = None,
    norm: NormalizationConfig | None = None,
    encoder=None,
) -> SummaryResult:
    """Graph-extract down to the service's input cap, then summarize abstractively."""
    from .graph import graph_summarize

    budget = budget or SummaryBudget()
    extraction = graph_summarize(
        doc,
        budget=SummaryBudget(target_words=client.cfg.max_input_tokens),
        norm=norm,
        encoder=encoder,
    )
    reduced = document(doc.id + "#extracted", extraction.text)
    inner = abstractive_summarize(reduced, client, max_length=budget.target_words)
    return SummaryResult(summarizer=SummarizerId.hybrid_long, text=inner.text)
