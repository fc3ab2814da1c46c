"""The four summarization engines behind one uniform contract.

Canonical engine order (shared with meta-dataset target columns):
sumbasic=0, graph_based=1, t5_article=2, hybrid_long=3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..errors import ConfigError, MetasummError
from ..textproc import Document, NormalizationConfig

__all__ = [
    "SummarizerId",
    "SummaryResult",
    "SummaryBudget",
    "EngineOutcome",
    "Engines",
    "select_until_budget",
    "sumbasic",
    "graph_summarize",
    "centrality",
    "encode_sentences",
    "build_similarity_matrix",
    "abstractive_summarize",
    "hybrid_long",
    "AbstractiveClient",
    "AbstractiveClientConfig",
    "summarize_all",
]


class SummarizerId(enum.IntEnum):
    sumbasic = 0
    graph_based = 1
    t5_article = 2
    hybrid_long = 3


@dataclass(frozen=True)
class SummaryResult:
    summarizer: SummarizerId
    text: str
    selected_sentence_indices: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SummaryBudget:
    """Word budget for a summary; at least `min_sentences` are always emitted."""

    target_words: int = 80
    min_sentences: int = 1

    def __post_init__(self) -> None:
        if self.target_words <= 0:
            raise ConfigError(f"summary budget must be positive, got {self.target_words}")


def select_until_budget(
    ranked: list[int], token_counts: list[int], budget: SummaryBudget
) -> list[int]:
    """Take sentences in ranked order until the next one would exceed the budget.

    Returns the chosen indices in original document order.
    """
    chosen: list[int] = []
    used = 0
    for idx in ranked:
        if len(chosen) >= budget.min_sentences and used + token_counts[idx] > budget.target_words:
            break
        chosen.append(idx)
        used += token_counts[idx]
    return sorted(chosen)


@dataclass(frozen=True)
class EngineOutcome:
    """Either a summary or an error record; never both."""

    result: SummaryResult | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.result is not None


from .abstractive import (  # noqa: E402
    AbstractiveClient,
    AbstractiveClientConfig,
    abstractive_summarize,
    hybrid_long,
)
from .graph import build_similarity_matrix, centrality, encode_sentences, graph_summarize  # noqa: E402
from .sumbasic import sumbasic  # noqa: E402


@dataclass
class Engines:
    """Configured engine set; `client` may be None when no endpoint is available."""

    budget: SummaryBudget = field(default_factory=SummaryBudget)
    norm: NormalizationConfig = field(default_factory=NormalizationConfig)
    client: AbstractiveClient | None = None
    encoder: object | None = None  # callable(list[Sentence]) -> (n, d) array

    def run(self, which: SummarizerId, doc: Document) -> SummaryResult:
        if which == SummarizerId.sumbasic:
            return sumbasic(doc, self.budget, self.norm)
        if which == SummarizerId.graph_based:
            return graph_summarize(doc, self.budget, norm=self.norm, encoder=self.encoder)
        if self.client is None:
            raise ConfigError(
                f"{which.name} needs an abstractive endpoint; set METASUMM_ABSTRACTIVE_URL or --abstractive-url"
            )
        if which == SummarizerId.t5_article:
            return abstractive_summarize(doc, self.client, max_length=self.budget.target_words)
        return hybrid_long(
            doc,
            self.client,
            self.budget,
            norm=self.norm,
            encoder=self.encoder,
        )

    def run_all(self, doc: Document) -> dict[SummarizerId, EngineOutcome]:
        return summarize_all(doc, self)


def summarize_all(doc: Document, engines: Engines) -> dict[SummarizerId, EngineOutcome]:
    """Run all four engines; remote failures become error records, never gaps."""
    outcomes: dict[SummarizerId, EngineOutcome] = {}
    for which in SummarizerId:
        try:
            outcomes[which] = EngineOutcome(result=engines.run(which, doc))
        except MetasummError as exc:
            outcomes[which] = EngineOutcome(error=f"{type(exc).__name__}: {exc}")
    return outcomes
