"""ROUGE-1/2, ROUGE-L, and ROUGE-LSum F1 scoring.

Scores are computed on lowercased alphanumeric tokens with no stemming or
stopword removal. Zero-denominator cases return 0, never NaN.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .textproc import Sentence, segment_sentences

__all__ = [
    "PrecisionRecallF1",
    "RougeSuite",
    "rouge_n",
    "rouge_l",
    "rouge_lsum",
    "rouge_suite",
    "aggregate_score",
]


@dataclass(frozen=True)
class PrecisionRecallF1:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_overlap(overlap: float, candidate_total: float, reference_total: float) -> "PrecisionRecallF1":
        p = overlap / candidate_total if candidate_total > 0 else 0.0
        r = overlap / reference_total if reference_total > 0 else 0.0
        f1 = 2.0 * p * r / (p + r) if p + r > 0 else 0.0
        return PrecisionRecallF1(p, r, f1)


ZERO_PRF = PrecisionRecallF1(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class RougeSuite:
    rouge1: PrecisionRecallF1
    rouge2: PrecisionRecallF1
    rougeL: PrecisionRecallF1
    rougeLsum: PrecisionRecallF1

    def f1_values(self) -> tuple[float, float, float, float]:
        return (self.rouge1.f1, self.rouge2.f1, self.rougeL.f1, self.rougeLsum.f1)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> PrecisionRecallF1:
    """Clipped n-gram overlap: each n-gram counts min(candidate, reference) times."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand = _ngram_counts(candidate, n)
    ref = _ngram_counts(reference, n)
    overlap = sum(min(c, ref[g]) for g, c in cand.items())
    return PrecisionRecallF1.from_overlap(overlap, sum(cand.values()), sum(ref.values()))


def _to_ids(*streams: Sequence[str]) -> list[np.ndarray]:
    vocab: dict[str, int] = {}
    out = []
    for stream in streams:
        ids = np.empty(len(stream), dtype=np.int32)
        for i, tok in enumerate(stream):
            ids[i] = vocab.setdefault(tok, len(vocab))
        out.append(ids)
    return out


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> PrecisionRecallF1:
    """Longest-common-subsequence overlap over whole token streams."""
    if not candidate or not reference:
        return ZERO_PRF
    cand_ids, ref_ids = _to_ids(candidate, reference)
    lcs = kernels.lcs_len(cand_ids, ref_ids)
    return PrecisionRecallF1.from_overlap(lcs, len(candidate), len(reference))


def _sentence_tokens(sentences: Sequence) -> list[list[str]]:
    out = []
    for s in sentences:
        if isinstance(s, Sentence):
            out.append([t.normalized for t in s.tokens])
        else:
            out.append(list(s))
    return out


def rouge_lsum(candidate: Sequence, reference: Sequence) -> PrecisionRecallF1:
    """Summary-level LCS with union matches and token-count clipping.

    For each reference sentence the LCS match positions against every
    candidate sentence are unioned; a matched token scores a hit only
    while both sides still have unconsumed copies of it, so no token
    position is counted twice.
    """
    cand_sents = _sentence_tokens(candidate)
    ref_sents = _sentence_tokens(reference)
    n_cand = sum(len(s) for s in cand_sents)
    n_ref = sum(len(s) for s in ref_sents)
    if n_cand == 0 or n_ref == 0:
        return ZERO_PRF

    all_streams = _to_ids(*ref_sents, *cand_sents)
    ref_ids = all_streams[: len(ref_sents)]
    cand_ids = all_streams[len(ref_sents) :]

    budget_ref = Counter(t for s in ref_sents for t in s)
    budget_cand = Counter(t for s in cand_sents for t in s)
    hits = 0
    for r_toks, r_arr in zip(ref_sents, ref_ids):
        union = np.zeros(len(r_arr), dtype=np.uint8)
        for c_arr in cand_ids:
            union |= kernels.lcs_ref_mask(r_arr, c_arr)
        for i in np.flatnonzero(union):
            tok = r_toks[i]
            if budget_ref[tok] > 0 and budget_cand[tok] > 0:
                hits += 1
                budget_ref[tok] -= 1
                budget_cand[tok] -= 1
    return PrecisionRecallF1.from_overlap(hits, n_cand, n_ref)


def _lower_tokens(sentences: list[Sentence]) -> list[list[str]]:
    return [[t.normalized for t in s.tokens] for s in sentences]


def rouge_suite(candidate: str, reference: str) -> RougeSuite:
    """Tokenize + lowercase both texts and compute all four members."""
    cand_sents = _lower_tokens(segment_sentences(candidate))
    ref_sents = _lower_tokens(segment_sentences(reference))
    cand_flat = [t for s in cand_sents for t in s]
    ref_flat = [t for s in ref_sents for t in s]
    return RougeSuite(
        rouge1=rouge_n(cand_flat, ref_flat, 1),
        rouge2=rouge_n(cand_flat, ref_flat, 2),
        rougeL=rouge_l(cand_flat, ref_flat),
        rougeLsum=rouge_lsum(cand_sents, ref_sents),
    )


def aggregate_score(suite: RougeSuite) -> float:
    """Single 0-100 score: 100 x arithmetic mean of the four F1 values."""
    return 100.0 * sum(suite.f1_values()) / 4.0
