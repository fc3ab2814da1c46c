"""Graph-based extractive summarization via sentence centrality.

Sentences are embedded (TF-IDF by default, or a remote neural encoder),
pairwise cosine similarities form a graph, and a damped power iteration
yields the stationary centrality distribution used for ranking.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np
import requests

from ..errors import DataError, ProtocolError, ServiceError, TransportError
from ..textproc import Document, NormalizationConfig, Sentence, normalize
from . import SummaryBudget, SummaryResult, SummarizerId, select_until_budget

DEFAULT_DAMPING = 0.85
DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITER = 100


def encode_sentences(
    sentences: list[Sentence], norm: NormalizationConfig | None = None
) -> np.ndarray:
    """TF-IDF bag-of-words vectors over the document vocabulary, L2-normalized.

    Sentences with no in-vocabulary tokens map to the zero vector.
    """
    if not sentences:
        raise DataError("empty input: no sentences to encode")
    norm = norm or NormalizationConfig()
    sent_tokens = [[t.normalized for t in normalize(s.tokens, norm)] for s in sentences]
    vocab: dict[str, int] = {}
    for toks in sent_tokens:
        for t in toks:
            vocab.setdefault(t, len(vocab))
    n = len(sentences)
    vecs = np.zeros((n, max(len(vocab), 1)), dtype=np.float64)
    df = Counter(t for toks in sent_tokens for t in set(toks))
    idf = {t: 1.0 + math.log((1.0 + n) / (1.0 + df[t])) for t in vocab}
    for i, toks in enumerate(sent_tokens):
        for t, c in Counter(toks).items():
            vecs[i, vocab[t]] = c * idf[t]
        nrm = np.linalg.norm(vecs[i])
        if nrm > 0:
            vecs[i] /= nrm
    return vecs


class RemoteEncoder:
    """Client for the external-encoder wire contract (POST /encode)."""

    def __init__(self, endpoint: str, timeout_s: float = 30.0):
        self.endpoint = endpoint.rstrip("/")
        self.timeout_s = timeout_s

    def __call__(self, sentences: list[Sentence]) -> np.ndarray:
        payload = {"sentences": [s.text for s in sentences]}
        try:
            resp = requests.post(f"{self.endpoint}/encode", json=payload, timeout=self.timeout_s)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TransportError(f"encoder unreachable at {self.endpoint}: {exc}") from exc
        if not resp.ok:
            raise ServiceError(resp.status_code, resp.text)
        try:
            vectors = resp.json()["vectors"]
            arr = np.asarray(vectors, dtype=np.float64)
        except (ValueError, KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed encoder response: {exc}") from exc
        if arr.ndim != 2 or arr.shape[0] != len(sentences):
            raise ProtocolError(f"encoder returned shape {arr.shape} for {len(sentences)} sentences")
        return arr


def build_similarity_matrix(vectors: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarity, clipped to [0, 1]; unit diagonal for nonzero rows."""
    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    sim = np.clip(unit @ unit.T, 0.0, 1.0)
    np.fill_diagonal(sim, np.where(norms > 0, 1.0, 0.0))
    return sim


def centrality(
    sim: np.ndarray,
    damping: float = DEFAULT_DAMPING,
    epsilon: float = DEFAULT_EPSILON,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Damped power iteration over the row-normalized similarity graph.

    Self-similarities are ignored (no self-votes); rows with no remaining
    mass distribute uniformly. The result is a probability distribution.
    """
    sim = np.asarray(sim, dtype=np.float64)
    if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
        raise ValueError(f"similarity matrix must be square, got shape {sim.shape}")
    if (sim < 0).any():
        raise ValueError("similarity entries must be nonnegative")
    n = sim.shape[0]
    if n == 1:
        return np.ones(1)
    weights = sim.copy()
    np.fill_diagonal(weights, 0.0)
    rowsums = weights.sum(axis=1)
    trans = np.where(rowsums[:, None] > 0, weights / np.where(rowsums[:, None] > 0, rowsums[:, None], 1.0), 1.0 / n)
    base = (1.0 - damping) / n
    scores = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = base + damping * (scores @ trans)
        if np.max(np.abs(nxt - scores)) < epsilon:
            return nxt
        scores = nxt
    return scores


def graph_summarize(
    doc: Document,
    budget: SummaryBudget | None = None,
    norm: NormalizationConfig | None = None,
    encoder=None,
    damping: float = DEFAULT_DAMPING,
    epsilon: float = DEFAULT_EPSILON,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SummaryResult:
    """Rank sentences by centrality and select until the budget is filled."""
    if not doc.sentences:
        raise DataError("empty input: document has no sentences")
    budget = budget or SummaryBudget()
    sentences = list(doc.sentences)
    vectors = encoder(sentences) if encoder is not None else encode_sentences(sentences, norm)
    sim = build_similarity_matrix(np.asarray(vectors, dtype=np.float64))
    scores = centrality(sim, damping, epsilon, max_iter)
    ranked = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))
    chosen = select_until_budget(ranked, [s.token_count for s in sentences], budget)
    return SummaryResult(
        summarizer=SummarizerId.graph_based,
        text=" ".join(sentences[i].text for i in chosen),
        selected_sentence_indices=tuple(chosen),
    )
