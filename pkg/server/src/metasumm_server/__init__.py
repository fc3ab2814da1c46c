"""Abstractive summarization server speaking the metasumm wire contract.

Backed by any seq2seq checkpoint loadable through transformers; drop-in
replaceable with the deterministic mock shipped in the main package.
"""

from .app import create_app
from .model import Seq2SeqEngine, ServerConfig

__version__ = "0.1.0"

__all__ = ["create_app", "Seq2SeqEngine", "ServerConfig"]
