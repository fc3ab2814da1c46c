"""Vocabulary construction over the normalized token stream."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..errors import DataError
from ..textproc import Document, NormalizationConfig, normalize


@dataclass
class Vocab:
    """Dense word ids ordered by descending count (ties: lexicographic)."""

    words: list[str]
    counts: np.ndarray  # int64, aligned with `words`
    word_ids: dict[str, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __contains__(self, word: str) -> bool:
        return word in self.word_ids

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        """Map normalized tokens to ids, silently dropping OOV words."""
        ids = [self.word_ids[t] for t in tokens if t in self.word_ids]
        return np.asarray(ids, dtype=np.int32)


def normalized_words(doc: Document, norm: NormalizationConfig) -> list[str]:
    out: list[str] = []
    for sent in doc.sentences:
        out.extend(t.normalized for t in normalize(sent.tokens, norm))
    return out


def build_vocab(
    corpus: Iterable[Document],
    min_count: int = 1,
    max_vocab: int = 100_000,
    norm: NormalizationConfig | None = None,
) -> Vocab:
    """Count normalized tokens, drop rare words, cap at the most frequent."""
    norm = norm or NormalizationConfig()
    counter: Counter[str] = Counter()
    n_docs = 0
    for doc in corpus:
        n_docs += 1
        counter.update(normalized_words(doc, norm))
    if n_docs == 0:
        raise DataError("empty corpus: no documents to build a vocabulary from")
    kept = [(w, c) for w, c in counter.items() if c >= min_count]
    kept.sort(key=lambda wc: (-wc[1], wc[0]))
    kept = kept[:max_vocab]
    words = [w for w, _ in kept]
    counts = np.asarray([c for _, c in kept], dtype=np.int64)
    return Vocab(words=words, counts=counts, word_ids={w: i for i, w in enumerate(words)})
