#!/usr/bin/env python3
"""Regenerate tests/data/toy_corpus.jsonl (60 synthetic documents).

Documents are built from pseudo-language topic vocabularies; each carries
a reference summary assembled from its own most topical sentences, so all
four engines produce nonzero ROUGE against it. Deterministic: run with no
arguments to reproduce the committed fixture byte for byte.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

N_DOCS = 60
SEED = 20240

TOPICS = {
    "mork": ["morka", "velan", "sopir", "denat", "kresta", "obal", "trzin", "galun"],
    "zeli": ["zelika", "pirun", "stolba", "mirena", "kovat", "lisar", "bronta", "humel"],
    "tana": ["tanara", "bistre", "solth", "raved", "klopan", "jurata", "vishna", "ledor"],
    "fyra": ["fyrand", "quome", "ethlan", "dorvi", "siplet", "arkoz", "menta", "ulvan"],
}
FILLERS = ["ena", "dva", "tri", "pet", "sedem", "osem", "devet", "deset", "sto", "tisoc"]


def make_sentence(rng: np.random.Generator, topic_words: list[str], length: int) -> str:
    words = []
    for _ in range(length):
        pool = topic_words if rng.random() < 0.6 else FILLERS
        words.append(pool[rng.integers(len(pool))])
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def make_doc(rng: np.random.Generator, doc_idx: int) -> dict:
    topic = list(TOPICS)[doc_idx % len(TOPICS)]
    vocab = TOPICS[topic]
    long_doc = rng.random() < 0.3
    n_sentences = int(rng.integers(10, 16)) if long_doc else int(rng.integers(4, 8))
    sent_len = int(rng.integers(8, 13))
    sentences = [make_sentence(rng, vocab, sent_len + int(rng.integers(-2, 3))) for _ in range(n_sentences)]
    # reference: two mid-document sentences with light word dropout
    picks = sorted(rng.choice(n_sentences, size=min(2, n_sentences), replace=False).tolist())
    ref_parts = []
    for i in picks:
        words = sentences[i].rstrip(".").split()
        kept = [w for w in words if rng.random() > 0.15] or words
        kept[0] = kept[0].capitalize()
        ref_parts.append(" ".join(kept) + ".")
    return {
        "id": f"toy-{doc_idx:03d}",
        "text": " ".join(sentences),
        "summary": " ".join(ref_parts),
    }


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data/toy_corpus.jsonl")
    rng = np.random.default_rng(SEED)
    lines = [json.dumps(make_doc(rng, i), ensure_ascii=False, sort_keys=True) for i in range(N_DOCS)]
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {N_DOCS} documents to {out}")


if __name__ == "__main__":
    main()
