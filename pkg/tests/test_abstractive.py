import json

import pytest
import requests

from metasumm.errors import ConfigError, ServiceError, TransportError
from metasumm.pipeline.mockserver import MockAbstractiveServer, mock_summary
from metasumm.summarizers import (
    Engines,
    SummarizerId,
    SummaryBudget,
    abstractive_summarize,
    hybrid_long,
    summarize_all,
)
from metasumm.summarizers.abstractive import (
    AbstractiveClient,
    AbstractiveClientConfig,
    canonical_text,
    truncate_words,
)
from metasumm.textproc import document
from metasumm.wire import check_wire_contract


class TestMockServer:
    def test_wire_contract(self, mock_server):
        check_wire_contract(mock_server.url)

    def test_summarize_returns_first_two_sentences(self, mock_server):
        resp = requests.post(
            f"{mock_server.url}/summarize", json={"text": "Ali res. Bo šlo. Cel dan."}, timeout=5
        )
        assert resp.json() == {"summary": "Ali res. Bo šlo."}

    def test_health(self, mock_server):
        assert requests.get(f"{mock_server.url}/health", timeout=5).json() == {"status": "ok"}

    def test_invalid_json_is_400(self, mock_server):
        resp = requests.post(f"{mock_server.url}/summarize", data=b"{oops", timeout=5)
        assert resp.status_code == 400

    def test_unknown_path_404(self, mock_server):
        assert requests.get(f"{mock_server.url}/nothing", timeout=5).status_code == 404

    def test_mock_rule_truncates(self):
        assert mock_summary("Ena dva tri štiri. Pet šest.", max_length=3) == "Ena dva tri"

    def test_port_busy_raises(self, mock_server):
        port = int(mock_server.url.rsplit(":", 1)[1])
        with pytest.raises(OSError):
            MockAbstractiveServer(port=port)


class TestClient:
    def test_roundtrip(self, mock_client):
        assert mock_client.summarize("Prva poved. Druga poved. Tretja.") == "Prva poved. Druga poved."

    def test_max_length_forwarded(self, mock_client):
        out = mock_client.summarize("Ena dva tri štiri pet. Šest sedem.", max_length=2)
        assert out == "Ena dva"

    def test_unreachable_endpoint_raises_transport_error(self):
        cfg = AbstractiveClientConfig(endpoint="http://127.0.0.1:1", timeout_s=0.5, retries=2)
        client = AbstractiveClient(cfg)
        with pytest.raises(TransportError, match="3 attempts"):
            client.summarize("besedilo tukaj")

    def test_service_error_carries_status(self, mock_client):
        with pytest.raises(ServiceError) as err:
            mock_client.summarize("")  # mock answers 400 for empty text
        assert err.value.status == 400

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            AbstractiveClientConfig(endpoint="x", timeout_s=0)
        with pytest.raises(ConfigError):
            AbstractiveClientConfig(endpoint="x", max_input_tokens=0)

    def test_health_check(self, mock_client):
        assert mock_client.health()


class TestAbstractiveSummarize:
    def test_truncation_contract(self, mock_server):
        """A 700-token document must reach the wire with exactly 512 tokens."""
        seen = {}

        class Recorder(AbstractiveClient):
            def summarize(self, text, max_length=None):
                seen["text"] = text
                return super().summarize(text, max_length)

        client = Recorder(AbstractiveClientConfig(endpoint=mock_server.url, max_input_tokens=512))
        words = [f"w{i}" for i in range(700)]
        doc = document("long", " ".join(words[:350]).capitalize() + ". " + " ".join(words[350:]).capitalize() + ".")
        assert doc.token_count == 700
        abstractive_summarize(doc, client)
        sent = seen["text"].split()
        assert len(sent) == 512
        assert [w.lower().rstrip(".") for w in sent] == words[:512]

    def test_mock_echoes_first_sentence(self, mock_server):
        client = AbstractiveClient(AbstractiveClientConfig(endpoint=mock_server.url))
        server_one = MockAbstractiveServer(n_sentences=1)
        with server_one:
            c1 = AbstractiveClient(AbstractiveClientConfig(endpoint=server_one.url))
            doc = document("d", "Prva poved. Druga poved.")
            assert abstractive_summarize(doc, c1).text == "Prva poved."

    def test_tagged_t5(self, mock_client):
        res = abstractive_summarize(document("d", "Nekaj je. Nekaj ni."), mock_client)
        assert res.summarizer == SummarizerId.t5_article


class TestHybridLong:
    def test_short_document_equals_abstractive(self, mock_client):
        doc = document("d", "Prva poved tukaj. Druga poved tam. Tretja poved.")
        hybrid = hybrid_long(doc, mock_client, SummaryBudget(target_words=50))
        direct = abstractive_summarize(doc, mock_client, max_length=50)
        assert hybrid.text == direct.text
        assert hybrid.summarizer == SummarizerId.hybrid_long

    def test_long_document_request_capped(self, mock_server):
        seen = {}

        class Recorder(AbstractiveClient):
            def summarize(self, text, max_length=None):
                seen["text"] = text
                return super().summarize(text, max_length)

        client = Recorder(AbstractiveClientConfig(endpoint=mock_server.url, max_input_tokens=64))
        sentences = [
            (" ".join(f"w{i}x{j}" for j in range(10))).capitalize() + "." for i in range(200)
        ]
        doc = document("long", " ".join(sentences))
        assert doc.token_count == 2000
        hybrid_long(doc, client, SummaryBudget(target_words=10))
        assert len(seen["text"].split()) <= 64

    def test_identity_mock_returns_graph_extraction(self, mock_server):
        # a mock echoing everything (many sentences, no cap) acts as identity
        with MockAbstractiveServer(n_sentences=50) as identity:
            client = AbstractiveClient(AbstractiveClientConfig(endpoint=identity.url))
            from metasumm.summarizers import graph_summarize
            from metasumm.textproc import NormalizationConfig

            norm = NormalizationConfig(stopwords=frozenset())
            doc = document("d", "Sonce morje pesek. Sonce morje trava. Golob nekaj drugega.")
            budget = SummaryBudget(target_words=50)
            hybrid = hybrid_long(doc, client, budget, norm=norm)
            extraction = graph_summarize(
                doc, SummaryBudget(target_words=client.cfg.max_input_tokens), norm=norm
            )
            assert hybrid.text == extraction.text


class TestSummarizeAll:
    def test_four_entries(self, engines):
        doc = document("d", "Prva poved je tu. Druga prav tako. Tretja tudi.")
        out = summarize_all(doc, engines)
        assert set(out) == set(SummarizerId)
        assert all(o.ok for o in out.values())

    def test_remote_down_records_errors(self):
        dead = AbstractiveClient(
            AbstractiveClientConfig(endpoint="http://127.0.0.1:1", timeout_s=0.3, retries=0)
        )
        eng = Engines(budget=SummaryBudget(target_words=8), client=dead)
        out = summarize_all(document("d", "Prva poved. Druga poved."), eng)
        assert out[SummarizerId.sumbasic].ok
        assert out[SummarizerId.graph_based].ok
        assert not out[SummarizerId.t5_article].ok
        assert "TransportError" in out[SummarizerId.t5_article].error
        assert not out[SummarizerId.hybrid_long].ok

    def test_no_client_records_config_errors(self):
        eng = Engines(budget=SummaryBudget(target_words=8), client=None)
        out = summarize_all(document("d", "Prva poved. Druga."), eng)
        assert not out[SummarizerId.t5_article].ok
        assert "ConfigError" in out[SummarizerId.t5_article].error

    def test_deterministic(self, engines):
        doc = document("d", "Ena poved. Dve povedi. Tri povedi.")
        first = summarize_all(doc, engines)
        second = summarize_all(doc, engines)
        assert {k: v.result.text for k, v in first.items()} == {
            k: v.result.text for k, v in second.items()
        }


def test_canonical_text_and_truncate():
    doc = document("d", "Ena   dva.   Tri štiri.")
    assert canonical_text(doc) == "Ena   dva. Tri štiri."
    assert truncate_words("a b c d", 2) == "a b"
    assert truncate_words("a b", 10) == "a b"
