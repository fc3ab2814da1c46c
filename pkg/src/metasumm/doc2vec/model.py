"""PV-DM training with negative sampling, inference, and similarity queries.

The target word is predicted from the mean of the document vector and the
context word vectors inside the window; negatives are drawn from the
unigram distribution raised to 0.75. Training runs through the selected
kernel backend (numba or pure numpy) and is bit-reproducible in
single-worker mode.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .. import kernels
from ..errors import ConfigError, DataError
from ..io import read_container, stable_seed, write_container
from ..textproc import Document, NormalizationConfig
from .vocab import Vocab, build_vocab, normalized_words

logger = logging.getLogger("metasumm.doc2vec")

MAGIC = "D2V1"
NOISE_POWER = 0.75
NOISE_TABLE_SIZE = 1 << 20


@dataclass(frozen=True)
class Doc2VecConfig:
    dim: int = 256
    window: int = 5
    max_vocab: int = 100_000
    min_count: int = 1
    epochs: int = 5
    negative: int = 5
    alpha: float = 0.025
    min_alpha: float = 1e-4
    seed: int = 1

    def __post_init__(self) -> None:
        if min(self.dim, self.window, self.max_vocab, self.min_count, self.epochs) <= 0:
            raise ConfigError("dim, window, max_vocab, min_count, and epochs must be positive")
        if self.negative < 1:
            raise ConfigError("negative sample count must be >= 1")


def _noise_table(counts: np.ndarray, size: int = NOISE_TABLE_SIZE) -> np.ndarray:
    """Slot table over word ids proportional to count^0.75."""
    probs = counts.astype(np.float64) ** NOISE_POWER
    cum = np.cumsum(probs)
    cum /= cum[-1]
    bounds = np.floor(cum * size).astype(np.int64)
    bounds[-1] = size
    reps = np.diff(np.concatenate(([0], bounds)))
    return np.repeat(np.arange(len(counts), dtype=np.int32), reps)


class Doc2VecModel:
    def __init__(
        self,
        config: Doc2VecConfig,
        vocab: Vocab,
        norm: NormalizationConfig,
        word_in: np.ndarray,
        word_out: np.ndarray,
        doc_vectors: np.ndarray,
        doc_ids: list[str],
        epoch_losses: list[float],
    ):
        self.config = config
        self.vocab = vocab
        self.norm = norm
        self.word_in = word_in
        self.word_out = word_out
        self.doc_vectors = doc_vectors
        self.doc_ids = doc_ids
        self.doc_index = {d: i for i, d in enumerate(doc_ids)}
        self.epoch_losses = epoch_losses
        self._table: np.ndarray | None = None

    @property
    def noise_table(self) -> np.ndarray:
        if self._table is None:
            self._table = _noise_table(self.vocab.counts)
        return self._table

    def doc_vector(self, doc_id: str) -> np.ndarray:
        return self.doc_vectors[self.doc_index[doc_id]]

    def save(self, path: str | Path) -> None:
        meta = {
            "format": 1,
            "config": asdict(self.config),
            "norm": {
                "lowercase": self.norm.lowercase,
                "stopwords": sorted(self.norm.stopwords),
                "lemmatizer": self.norm.lemmatizer,
            },
            "words": self.vocab.words,
            "doc_ids": self.doc_ids,
            "epoch_losses": self.epoch_losses,
        }
        arrays = {
            "vocab_counts": self.vocab.counts.astype(np.int64),
            "word_in": self.word_in.astype(np.float32),
            "word_out": self.word_out.astype(np.float32),
            "doc_vectors": self.doc_vectors.astype(np.float32),
        }
        write_container(path, MAGIC, meta, arrays)

    @classmethod
    def load(cls, path: str | Path) -> "Doc2VecModel":
        meta, arrays = read_container(path, MAGIC)
        words = list(meta["words"])
        vocab = Vocab(
            words=words,
            counts=arrays["vocab_counts"],
            word_ids={w: i for i, w in enumerate(words)},
        )
        norm = NormalizationConfig(
            lowercase=meta["norm"]["lowercase"],
            stopwords=frozenset(meta["norm"]["stopwords"]),
            lemmatizer=meta["norm"]["lemmatizer"],
        )
        return cls(
            config=Doc2VecConfig(**meta["config"]),
            vocab=vocab,
            norm=norm,
            word_in=arrays["word_in"],
            word_out=arrays["word_out"],
            doc_vectors=arrays["doc_vectors"],
            doc_ids=list(meta["doc_ids"]),
            epoch_losses=list(meta["epoch_losses"]),
        )


def _encode_corpus(
    docs: Sequence[Document], vocab: Vocab, norm: NormalizationConfig
) -> tuple[np.ndarray, np.ndarray]:
    streams = [vocab.encode(normalized_words(d, norm)) for d in docs]
    offsets = np.zeros(len(docs) + 1, dtype=np.int64)
    np.cumsum([len(s) for s in streams], out=offsets[1:])
    words = np.concatenate(streams) if streams else np.empty(0, dtype=np.int32)
    return words.astype(np.int32), offsets


def train(
    corpus: Iterable[Document],
    cfg: Doc2VecConfig | None = None,
    norm: NormalizationConfig | None = None,
    workers: int = 1,
) -> Doc2VecModel:
    """Train PV-DM embeddings over the corpus.

    With workers > 1 documents are sharded across threads that update the
    shared matrices without locks; that mode trades bit-reproducibility
    for speed. workers == 1 is fully deterministic.
    """
    cfg = cfg or Doc2VecConfig()
    norm = norm or NormalizationConfig()
    docs = list(corpus)
    vocab = build_vocab(docs, cfg.min_count, cfg.max_vocab, norm)
    words, offsets = _encode_corpus(docs, vocab, norm)
    positions = len(words)
    if positions == 0:
        raise DataError("corpus has no in-vocabulary tokens after normalization")

    rng = np.random.default_rng(cfg.seed)
    n_docs = len(docs)
    word_in = (rng.random((vocab.size, cfg.dim), dtype=np.float32) - 0.5) / cfg.dim
    word_out = np.zeros((vocab.size, cfg.dim), dtype=np.float32)
    doc_vectors = (rng.random((n_docs, cfg.dim), dtype=np.float32) - 0.5) / cfg.dim
    table = _noise_table(vocab.counts)
    doc_rows = np.arange(n_docs, dtype=np.int32)

    total = positions * cfg.epochs
    done = 0
    state = np.uint64(stable_seed(cfg.seed, "lcg"))
    losses: list[float] = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(n_docs).astype(np.int32)
        if workers <= 1:
            loss, n_done, state = kernels.d2v_train_block(
                words, offsets, doc_rows, order,
                word_in, word_out, doc_vectors, table,
                cfg.window, cfg.negative, cfg.alpha, cfg.min_alpha,
                done, total, state, True, True,
            )
            done += n_done
            state = np.uint64(state)
            losses.append(loss / max(n_done, 1))
        else:
            shards = np.array_split(order, workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futs = [
                    pool.submit(
                        kernels.d2v_train_block,
                        words, offsets, doc_rows, shard.astype(np.int32),
                        word_in, word_out, doc_vectors, table,
                        cfg.window, cfg.negative, cfg.alpha, cfg.min_alpha,
                        done, total, np.uint64(stable_seed(cfg.seed, "lcg", epoch, i)), True, True,
                    )
                    for i, shard in enumerate(shards)
                    if len(shard)
                ]
                results = [f.result() for f in futs]
            loss = sum(r[0] for r in results)
            n_done = sum(r[1] for r in results)
            done += n_done
            losses.append(loss / max(n_done, 1))
        logger.debug("epoch %d: mean loss %.6f", epoch, losses[-1])
        if not np.isfinite(losses[-1]):
            raise DataError(f"doc2vec training produced a non-finite loss at epoch {epoch}")

    return Doc2VecModel(
        config=cfg,
        vocab=vocab,
        norm=norm,
        word_in=word_in,
        word_out=word_out,
        doc_vectors=doc_vectors,
        doc_ids=[d.id for d in docs],
        epoch_losses=losses,
    )


def infer_vector(
    model: Doc2VecModel,
    doc: Document,
    steps: int = 50,
    seed: int | None = None,
) -> np.ndarray:
    """Optimize a fresh doc vector against frozen word parameters.

    The per-document RNG is derived from (seed, doc.id), so inference is
    order-independent and reproducible. A document with no in-vocabulary
    words yields the zero vector plus a RuntimeWarning.
    """
    cfg = model.config
    ids = model.vocab.encode(normalized_words(doc, model.norm))
    if len(ids) == 0:
        warnings.warn(
            f"document {doc.id!r} has no in-vocabulary tokens; returning a zero vector",
            RuntimeWarning,
            stacklevel=2,
        )
        return np.zeros(cfg.dim, dtype=np.float32)

    base_seed = cfg.seed if seed is None else seed
    doc_seed = stable_seed(base_seed, "infer", doc.id)
    rng = np.random.default_rng(doc_seed)
    dvec = (rng.random((1, cfg.dim), dtype=np.float32) - 0.5) / cfg.dim
    offsets = np.array([0, len(ids)], dtype=np.int64)
    order = np.zeros(steps, dtype=np.int32)
    kernels.d2v_train_block(
        ids, offsets, np.zeros(1, dtype=np.int32), order,
        model.word_in, model.word_out, dvec, model.noise_table,
        cfg.window, cfg.negative, cfg.alpha, cfg.min_alpha,
        0, steps * len(ids), np.uint64(stable_seed(doc_seed, "lcg")), False, True,
    )
    return dvec[0].copy()


def most_similar(
    model: Doc2VecModel, query: np.ndarray, k: int = 3
) -> list[tuple[str, float]]:
    """Top-k stored documents by cosine similarity, ties by doc id."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q = np.asarray(query, dtype=np.float64)
    qn = np.linalg.norm(q)
    mat = model.doc_vectors.astype(np.float64)
    norms = np.linalg.norm(mat, axis=1)
    denom = np.where(norms > 0, norms, 1.0) * (qn if qn > 0 else 1.0)
    sims = (mat @ q) / denom
    if qn == 0:
        sims = np.zeros_like(sims)
    ranked = sorted(zip(model.doc_ids, sims), key=lambda t: (-t[1], t[0]))
    return [(d, float(s)) for d, s in ranked[:k]]


def ns_loss_and_grads(
    doc_vec: np.ndarray,
    context_vecs: np.ndarray,
    output_vecs: np.ndarray,
    labels: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Negative-sampling loss and exact analytic gradients (float64).

    For one training event: h is the mean of the doc vector and the m
    context vectors; each output vector is scored by sigmoid(h . v).
    Returns (loss, d_doc, d_context, d_output); used by the
    finite-difference gradient checks.
    """
    doc_vec = np.asarray(doc_vec, dtype=np.float64)
    ctx = np.asarray(context_vecs, dtype=np.float64)
    out = np.asarray(output_vecs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    m = ctx.shape[0]
    h = (doc_vec + ctx.sum(axis=0)) / (m + 1)
    scores = out @ h
    probs = 1.0 / (1.0 + np.exp(-scores))
    # -log sigma(s) for positives, -log sigma(-s) for negatives, stably:
    loss = float(np.sum(np.logaddexp(0.0, -scores) * labels + np.logaddexp(0.0, scores) * (1.0 - labels)))
    g_scores = probs - labels
    g_out = g_scores[:, None] * h[None, :]
    g_h = g_scores @ out
    g_doc = g_h / (m + 1)
    g_ctx = np.tile(g_h / (m + 1), (m, 1))
    return loss, g_doc, g_ctx, g_out
