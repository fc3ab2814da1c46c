import logging
from pathlib import Path

import pytest

from metasumm.pipeline.mockserver import MockAbstractiveServer
from metasumm.summarizers import Engines, SummaryBudget
from metasumm.summarizers.abstractive import AbstractiveClient, AbstractiveClientConfig

logging.getLogger("metasumm").setLevel(logging.ERROR)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def toy_corpus_path() -> Path:
    return DATA_DIR / "toy_corpus.jsonl"


@pytest.fixture(scope="session")
def mock_server():
    with MockAbstractiveServer() as server:
        yield server


@pytest.fixture(scope="session")
def mock_client(mock_server) -> AbstractiveClient:
    return AbstractiveClient(AbstractiveClientConfig(endpoint=mock_server.url, timeout_s=10))


@pytest.fixture()
def engines(mock_client) -> Engines:
    return Engines(budget=SummaryBudget(target_words=8), client=mock_client)
