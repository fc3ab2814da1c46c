import pytest
import requests

from metasumm.wire import check_wire_contract

from metasumm_server import ServerConfig, create_app
from metasumm_server.app import ServerHandle


def test_wire_contract_same_suite_as_mock(server):
    """The identical conformance checks the main package runs on its mock."""
    check_wire_contract(server.url)


def test_non_empty_summary(server):
    resp = requests.post(
        f"{server.url}/summarize", json={"text": "Danes je lep dan. Jutri bo še lepši."}, timeout=60
    )
    assert resp.status_code == 200
    assert resp.json()["summary"].strip()


def test_summary_respects_max_length(server):
    for cap in (3, 8, 20):
        resp = requests.post(
            f"{server.url}/summarize",
            json={"text": "Ena poved o nečem. Druga poved o drugem. Tretja poved.", "max_length": cap},
            timeout=60,
        )
        assert resp.status_code == 200
        assert len(resp.json()["summary"].split()) <= cap


def test_empty_text_is_400(server):
    resp = requests.post(f"{server.url}/summarize", json={"text": "  "}, timeout=60)
    assert resp.status_code == 400


def test_invalid_json_is_400(server):
    resp = requests.post(
        f"{server.url}/summarize",
        data=b"{nope",
        headers={"Content-Type": "application/json"},
        timeout=60,
    )
    assert resp.status_code == 400


def test_bad_max_length_is_400(server):
    resp = requests.post(
        f"{server.url}/summarize", json={"text": "Nekaj.", "max_length": -3}, timeout=60
    )
    assert resp.status_code == 400


def test_generation_failure_is_500(checkpoint):
    class ExplodingEngine:
        def summarize(self, text, max_length=None):
            raise RuntimeError("boom")

    with ServerHandle(create_app(ExplodingEngine())) as handle:
        resp = requests.post(f"{handle.url}/summarize", json={"text": "Nekaj je."}, timeout=60)
        assert resp.status_code == 500
        assert "boom" in resp.json()["error"]


def test_deterministic_generation(engine):
    a = engine.summarize("Prvi poskus besedila. Drugi del.", None)
    b = engine.summarize("Prvi poskus besedila. Drugi del.", None)
    assert a == b


def test_input_truncation(engine):
    long_text = " ".join(f"beseda{i}" for i in range(5000))
    out = engine.summarize(long_text, 16)
    assert isinstance(out, str) and out.strip()


def test_unicode_roundtrip(server):
    resp = requests.post(
        f"{server.url}/summarize", json={"text": "Čaša žita šumi. Čudno življenje."}, timeout=60
    )
    assert resp.status_code == 200


def test_config_validation():
    with pytest.raises(ValueError):
        ServerConfig(model="x", max_input_tokens=0)


def test_client_from_main_package_interoperates(server):
    """The primary's client consumes this server through the wire contract."""
    from metasumm.summarizers.abstractive import AbstractiveClient, AbstractiveClientConfig

    client = AbstractiveClient(AbstractiveClientConfig(endpoint=server.url, timeout_s=60))
    assert client.health()
    out = client.summarize("Prva poved. Druga poved o vremenu.", max_length=10)
    assert isinstance(out, str) and out.strip()
    assert len(out.split()) <= 10
