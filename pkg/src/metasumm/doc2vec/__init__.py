"""Paragraph-vector (PV-DM) document embeddings trained from scratch."""

from .model import Doc2VecConfig, Doc2VecModel, infer_vector, most_similar, ns_loss_and_grads, train
from .vocab import Vocab, build_vocab

__all__ = [
    "Doc2VecConfig",
    "Doc2VecModel",
    "Vocab",
    "build_vocab",
    "train",
    "infer_vector",
    "most_similar",
    "ns_loss_and_grads",
]
