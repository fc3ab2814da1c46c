"""Meta-dataset construction: (document embedding -> per-summarizer score) rows.

Targets live on a 0-100 scale: by default one aggregate ROUGE score per
summarizer (4 columns); "suite" mode keeps all four F1 members per
summarizer (16 columns) in canonical order.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from ..doc2vec import Doc2VecModel, infer_vector
from ..errors import ConfigError, DataError
from ..io import atomic_write_text, dumps_json
from ..rouge import aggregate_score, rouge_suite
from ..summarizers import Engines, SummarizerId
from ..textproc import Document, LengthClass, classify_length

logger = logging.getLogger("metasumm.metamodel")

TARGET_MODES = ("aggregate", "suite")


@dataclass(frozen=True)
class MetaRecord:
    doc_id: str
    features: np.ndarray
    targets: np.ndarray
    length_class: LengthClass
    token_count: int


@dataclass
class MetaDataset:
    records: list[MetaRecord]
    feature_dim: int
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.records:
            raise DataError("meta dataset must contain at least one record")
        dims = {len(r.features) for r in self.records}
        tdims = {len(r.targets) for r in self.records}
        if dims != {self.feature_dim} or len(tdims) != 1:
            raise DataError(f"non-uniform dimensions: features {dims}, targets {tdims}")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def target_dim(self) -> int:
        return len(self.records[0].targets)

    def feature_matrix(self) -> np.ndarray:
        return np.stack([r.features for r in self.records]).astype(np.float64)

    def target_matrix(self) -> np.ndarray:
        return np.stack([r.targets for r in self.records]).astype(np.float64)


@dataclass(frozen=True)
class SplitSpec:
    train: float = 0.90
    validation: float = 0.05
    test: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        fracs = (self.train, self.validation, self.test)
        if min(fracs) <= 0:
            raise ConfigError(f"split fractions must be positive, got {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ConfigError(f"split fractions must sum to 1, got {sum(fracs)}")


def _doc_targets(doc: Document, engines: Engines, target_mode: str) -> np.ndarray | None:
    outcomes = engines.run_all(doc)
    failed = {sid: o.error for sid, o in outcomes.items() if not o.ok}
    if failed:
        logger.warning(
            "excluding document %s: %s",
            doc.id,
            "; ".join(f"{sid.name}: {err}" for sid, err in failed.items()),
        )
        return None
    values: list[float] = []
    for sid in SummarizerId:
        suite = rouge_suite(outcomes[sid].result.text, doc.reference_summary)
        if target_mode == "aggregate":
            values.append(aggregate_score(suite))
        else:
            values.extend(100.0 * f for f in suite.f1_values())
    return np.asarray(values, dtype=np.float64)


def build_meta_dataset(
    corpus: Iterable[Document],
    d2v: Doc2VecModel,
    engines: Engines,
    target_mode: str = "aggregate",
    length_threshold: int = 512,
    infer_steps: int = 50,
    workers: int = 1,
) -> MetaDataset:
    """One record per document: inferred embedding plus per-engine scores.

    Documents on which any engine fails are excluded and logged; building
    fails only if no document survives.
    """
    if target_mode not in TARGET_MODES:
        raise ConfigError(f"target_mode must be one of {TARGET_MODES}, got {target_mode!r}")
    docs = list(corpus)
    missing = [d.id for d in docs if not d.reference_summary]
    if missing:
        raise DataError(f"documents lack reference summaries: {missing[:5]} (and {max(len(missing)-5,0)} more)")

    def work(doc: Document) -> MetaRecord | None:
        targets = _doc_targets(doc, engines, target_mode)
        if targets is None:
            return None
        features = infer_vector(d2v, doc, steps=infer_steps)
        return MetaRecord(
            doc_id=doc.id,
            features=features.astype(np.float64),
            targets=targets,
            length_class=classify_length(doc, length_threshold),
            token_count=doc.token_count,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, docs))
    else:
        results = [work(d) for d in docs]

    records = [r for r in results if r is not None]
    excluded = [d.id for d, r in zip(docs, results) if r is None]
    if not records:
        raise DataError("no document produced a complete set of summaries")
    return MetaDataset(
        records=records,
        feature_dim=len(records[0].features),
        provenance={
            "n_documents": len(docs),
            "excluded": excluded,
            "target_mode": target_mode,
            "length_threshold": length_threshold,
            "infer_steps": infer_steps,
        },
    )


def split(dataset: MetaDataset, spec: SplitSpec) -> tuple[MetaDataset, MetaDataset, MetaDataset]:
    """Seeded shuffle, then partition into train/validation/test."""
    n = len(dataset)
    if n < 3:
        raise DataError(f"dataset too small to split, got {n} records")
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(n)
    n_val = max(1, int(spec.validation * n))
    n_test = max(1, int(spec.test * n))
    n_train = n - n_val - n_test
    if n_train < 1:
        raise DataError(f"split leaves no training records for n={n}")
    parts = (perm[:n_train], perm[n_train : n_train + n_val], perm[n_train + n_val :])
    out = []
    for name, idx in zip(("train", "validation", "test"), parts):
        out.append(
            MetaDataset(
                records=[dataset.records[i] for i in idx],
                feature_dim=dataset.feature_dim,
                provenance={**dataset.provenance, "split": name, "split_seed": spec.seed},
            )
        )
    return tuple(out)


def add_length_feature(dataset: MetaDataset) -> MetaDataset:
    """Append token_count / 1000 as one extra feature column."""
    records = [
        replace(r, features=np.concatenate((r.features, [r.token_count / 1000.0])))
        for r in dataset.records
    ]
    return MetaDataset(
        records=records,
        feature_dim=dataset.feature_dim + 1,
        provenance={**dataset.provenance, "length_feature": True},
    )


def balance_dataset(dataset: MetaDataset, seed: int = 0) -> MetaDataset:
    """Down-sample the majority length class to the minority count."""
    long_idx = [i for i, r in enumerate(dataset.records) if r.length_class.long]
    short_idx = [i for i, r in enumerate(dataset.records) if not r.length_class.long]
    if not long_idx or not short_idx:
        raise DataError(
            f"both length classes must be present to balance "
            f"(short={len(short_idx)}, long={len(long_idx)})"
        )
    if len(long_idx) == len(short_idx):
        return dataset
    minority, majority = sorted((long_idx, short_idx), key=len)
    rng = np.random.default_rng(seed)
    kept = set(minority) | set(rng.choice(majority, size=len(minority), replace=False).tolist())
    records = [r for i, r in enumerate(dataset.records) if i in kept]
    return MetaDataset(
        records=records,
        feature_dim=dataset.feature_dim,
        provenance={**dataset.provenance, "balanced_seed": seed},
    )


def save_jsonl(dataset: MetaDataset, path: str | Path) -> None:
    lines = []
    for r in dataset.records:
        lines.append(
            dumps_json(
                {
                    "id": r.doc_id,
                    "features": [float(x) for x in r.features],
                    "targets": [float(x) for x in r.targets],
                    "length_class": r.length_class.label,
                    "token_count": r.token_count,
                }
            )
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_jsonl(path: str | Path, length_threshold: int = 512, provenance: dict | None = None) -> MetaDataset:
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            records.append(
                MetaRecord(
                    doc_id=obj["id"],
                    features=np.asarray(obj["features"], dtype=np.float64),
                    targets=np.asarray(obj["targets"], dtype=np.float64),
                    length_class=LengthClass(obj["length_class"] == "long", length_threshold),
                    token_count=int(obj["token_count"]),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise DataError(f"{path}: line {lineno}: malformed meta record: {exc}") from exc
    if not records:
        raise DataError(f"{path}: no records")
    return MetaDataset(records=records, feature_dim=len(records[0].features), provenance=provenance or {})
