import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from make_tiny_checkpoint import build  # noqa: E402

from metasumm_server import Seq2SeqEngine, ServerConfig, create_app
from metasumm_server.app import ServerHandle


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory) -> Path:
    return build(tmp_path_factory.mktemp("ckpt"), seed=0)


@pytest.fixture(scope="session")
def engine(checkpoint) -> Seq2SeqEngine:
    return Seq2SeqEngine(ServerConfig(model=str(checkpoint), max_input_tokens=128, max_output_tokens=32))


@pytest.fixture(scope="session")
def server(engine):
    with ServerHandle(create_app(engine)) as handle:
        yield handle
