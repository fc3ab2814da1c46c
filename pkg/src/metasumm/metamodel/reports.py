"""Evaluation reports: regression MSE, routing classification, final ROUGE.

The classification view treats the argmax of the true targets as the true
class and the predictor's recommendation as the predicted class.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..doc2vec import Doc2VecModel, infer_vector
from ..errors import DataError
from ..rouge import aggregate_score, rouge_suite
from ..summarizers import Engines, SummarizerId
from ..textproc import Document
from .dataset import MetaDataset
from .predictors import Predictor, recommend

logger = logging.getLogger("metasumm.metamodel")


def evaluate_mse(p: Predictor, test: MetaDataset) -> float:
    """Mean over records and output columns of squared error (0-100 scale)."""
    pred = p.predict(test.feature_matrix())
    return float(np.mean((pred - test.target_matrix()) ** 2))


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    mse: float
    accuracy: float
    per_class: dict[SummarizerId, ClassMetrics]
    frequencies: dict[SummarizerId, int]

    @property
    def total_support(self) -> int:
        return sum(m.support for m in self.per_class.values())


def _true_classes(test: MetaDataset) -> np.ndarray:
    y = test.target_matrix()
    if y.shape[1] == 4 * len(SummarizerId):
        y = y.reshape(len(y), len(SummarizerId), 4).mean(axis=2)
    return np.argmax(y, axis=1)


def _predicted_classes(p: Predictor, test: MetaDataset) -> np.ndarray:
    return np.asarray([int(recommend(p, r.features)) for r in test.records])


def recommendation_frequencies(p: Predictor, docs: MetaDataset) -> dict[SummarizerId, int]:
    """How many times each engine is recommended; counts sum to len(docs)."""
    pred = _predicted_classes(p, docs)
    return {sid: int(np.sum(pred == int(sid))) for sid in SummarizerId}


def classification_report(p: Predictor, test: MetaDataset) -> EvalReport:
    true = _true_classes(test)
    pred = _predicted_classes(p, test)
    per_class: dict[SummarizerId, ClassMetrics] = {}
    for sid in SummarizerId:
        c = int(sid)
        tp = int(np.sum((pred == c) & (true == c)))
        n_pred = int(np.sum(pred == c))
        support = int(np.sum(true == c))
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class[sid] = ClassMetrics(precision, recall, f1, support)
    return EvalReport(
        mse=evaluate_mse(p, test),
        accuracy=float(np.mean(true == pred)),
        per_class=per_class,
        frequencies={sid: int(np.sum(pred == int(sid))) for sid in SummarizerId},
    )


@dataclass(frozen=True)
class RougeRow:
    rouge1: float
    rouge2: float
    rougeL: float
    aggregate: float


@dataclass(frozen=True)
class FinalRougeTable:
    """Average ROUGE per fixed engine plus the routed and oracle selections.

    Values are F1 x 100. `rows` is keyed by engine name, "meta_model", and
    "oracle"; `n_documents` counts the docs that produced all summaries.
    """

    rows: dict[str, RougeRow]
    n_documents: int


def final_rouge_comparison(
    docs: Iterable[Document],
    engines: Engines,
    p: Predictor,
    d2v: Doc2VecModel,
    length_feature: bool = False,
    infer_steps: int = 50,
) -> FinalRougeTable:
    """Score each fixed engine, the meta-routed choice, and the true-best oracle."""
    docs = list(docs)
    suites_per_doc = []
    kept_docs = []
    for doc in docs:
        if not doc.reference_summary:
            raise DataError(f"document {doc.id} has no reference summary")
        outcomes = engines.run_all(doc)
        if not all(o.ok for o in outcomes.values()):
            failures = {sid.name: o.error for sid, o in outcomes.items() if not o.ok}
            logger.warning("excluding document %s from final comparison: %s", doc.id, failures)
            continue
        suites_per_doc.append(
            {sid: rouge_suite(outcomes[sid].result.text, doc.reference_summary) for sid in SummarizerId}
        )
        kept_docs.append(doc)
    if not suites_per_doc:
        raise DataError("no document produced a complete set of summaries")

    picks_meta = []
    picks_oracle = []
    for doc, suites in zip(kept_docs, suites_per_doc):
        features = infer_vector(d2v, doc, steps=infer_steps).astype(np.float64)
        if length_feature:
            features = np.concatenate((features, [doc.token_count / 1000.0]))
        picks_meta.append(recommend(p, features))
        aggs = [aggregate_score(suites[sid]) for sid in SummarizerId]
        picks_oracle.append(SummarizerId(int(np.argmax(aggs))))

    def row_for(selection: Sequence[SummarizerId] | SummarizerId) -> RougeRow:
        chosen = (
            [selection] * len(suites_per_doc) if isinstance(selection, SummarizerId) else selection
        )
        suites = [s[c] for s, c in zip(suites_per_doc, chosen)]
        return RougeRow(
            rouge1=100.0 * float(np.mean([s.rouge1.f1 for s in suites])),
            rouge2=100.0 * float(np.mean([s.rouge2.f1 for s in suites])),
            rougeL=100.0 * float(np.mean([s.rougeL.f1 for s in suites])),
            aggregate=float(np.mean([aggregate_score(s) for s in suites])),
        )

    rows = {sid.name: row_for(sid) for sid in SummarizerId}
    rows["meta_model"] = row_for(picks_meta)
    rows["oracle"] = row_for(picks_oracle)
    return FinalRougeTable(rows=rows, n_documents=len(suites_per_doc))
