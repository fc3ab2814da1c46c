"""Conformance checks for the abstractive wire contract.

Any server claiming compatibility (the built-in mock, the reference
seq2seq server, or a third-party implementation) must pass
`check_wire_contract` unchanged; the test suites of both packages run
exactly this function.
"""

from __future__ import annotations

import requests

_PROBE_TEXT = "Prva poved o vremenu danes. Druga poved o jutrišnjem dnevu. Tretja poved o čem drugem."


def check_wire_contract(base_url: str, timeout_s: float = 60.0) -> None:
    """Assert the full request/response contract against a running server."""
    base = base_url.rstrip("/")

    resp = requests.get(f"{base}/health", timeout=timeout_s)
    assert resp.status_code == 200, f"/health returned {resp.status_code}"
    assert resp.json() == {"status": "ok"}, f"/health payload {resp.text!r}"

    resp = requests.post(f"{base}/summarize", json={"text": _PROBE_TEXT}, timeout=timeout_s)
    assert resp.status_code == 200, f"/summarize returned {resp.status_code}: {resp.text!r}"
    payload = resp.json()
    assert isinstance(payload, dict) and isinstance(payload.get("summary"), str), (
        f"/summarize payload must be {{'summary': str}}, got {payload!r}"
    )
    assert payload["summary"].strip(), "summary must be non-empty for non-empty input"

    for cap in (5, 12):
        resp = requests.post(
            f"{base}/summarize", json={"text": _PROBE_TEXT, "max_length": cap}, timeout=timeout_s
        )
        assert resp.status_code == 200, f"max_length={cap} returned {resp.status_code}"
        summary = resp.json()["summary"]
        assert isinstance(summary, str) and summary.strip(), "summary must be a non-empty string"
        assert len(summary.split()) <= cap, (
            f"summary has {len(summary.split())} words, cap was {cap}: {summary!r}"
        )

    resp = requests.post(
        f"{base}/summarize",
        data=b"{not json",
        headers={"Content-Type": "application/json"},
        timeout=timeout_s,
    )
    assert resp.status_code == 400, f"invalid JSON body must yield 400, got {resp.status_code}"

    for bad in ({"text": ""}, {"text": "   "}, {"no_text": 1}):
        resp = requests.post(f"{base}/summarize", json=bad, timeout=timeout_s)
        assert resp.status_code == 400, f"body {bad!r} must yield 400, got {resp.status_code}"
