"""Corpus ingestion: JSON-lines records {id, text, summary?} with validation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..textproc import Document, document

SUMMARY_MODES = ("field", "first-paragraph")


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    text: str
    summary: str | None = None


def read_corpus(path: str | Path, summary_from: str = "field") -> list[CorpusRecord]:
    """Stream and validate a JSON-lines corpus.

    With summary_from="first-paragraph" the leading paragraph (up to the
    first blank line) is used as the reference summary; the document text
    is kept intact.
    """
    if summary_from not in SUMMARY_MODES:
        raise DataError(f"summary_from must be one of {SUMMARY_MODES}, got {summary_from!r}")
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    records: list[CorpusRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: invalid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise DataError(f"{path}: line {lineno}: record must be a JSON object")
            doc_id = obj.get("id")
            text = obj.get("text")
            if not isinstance(doc_id, str) or not doc_id:
                raise DataError(f"{path}: line {lineno}: missing or empty 'id'")
            if not isinstance(text, str) or not text.strip():
                raise DataError(f"{path}: line {lineno}: missing or empty 'text'")
            if doc_id in seen:
                raise DataError(f"{path}: line {lineno}: duplicate id {doc_id!r}")
            seen.add(doc_id)
            summary = obj.get("summary")
            if summary is not None and not isinstance(summary, str):
                raise DataError(f"{path}: line {lineno}: 'summary' must be a string")
            if summary_from == "first-paragraph":
                first, _, _ = text.partition("\n\n")
                summary = first.strip() or None
            records.append(CorpusRecord(id=doc_id, text=text, summary=summary))
    if not records:
        raise DataError(f"{path}: corpus is empty")
    return records


def to_documents(
    records: list[CorpusRecord], abbreviations: frozenset[str] | None = None
) -> list[Document]:
    return [document(r.id, r.text, r.summary, abbreviations) for r in records]


def corpus_stats(docs: list[Document], length_threshold: int = 512) -> dict:
    counts = np.asarray([d.token_count for d in docs])
    n_long = int(np.sum(counts > length_threshold))
    return {
        "documents": len(docs),
        "with_summary": sum(1 for d in docs if d.reference_summary),
        "total_tokens": int(counts.sum()),
        "token_count": {
            "min": int(counts.min()),
            "p25": float(np.percentile(counts, 25)),
            "median": float(np.median(counts)),
            "p75": float(np.percentile(counts, 75)),
            "max": int(counts.max()),
            "mean": float(counts.mean()),
        },
        "length_threshold": length_threshold,
        "short": len(docs) - n_long,
        "long": n_long,
        "long_fraction": n_long / len(docs),
    }
