"""SumBasic: greedy sentence selection by mean word probability.

After a sentence is picked, the probability of every word it contains is
squared, which penalizes redundancy; probabilities therefore never
increase during a run.
"""

from __future__ import annotations

from collections import Counter

from ..errors import DataError
from ..textproc import Document, NormalizationConfig, normalize
from . import SummaryBudget, SummaryResult, SummarizerId


def word_probabilities(doc: Document, norm: NormalizationConfig) -> dict[str, float]:
    """Initial p(w) = count(w) / total over the normalized token stream."""
    counts: Counter[str] = Counter()
    for sent in doc.sentences:
        counts.update(t.normalized for t in normalize(sent.tokens, norm))
    total = sum(counts.values())
    if total == 0:
        return {}
    return {w: c / total for w, c in counts.items()}


def selection_trace(
    doc: Document,
    budget: SummaryBudget,
    norm: NormalizationConfig,
) -> list[tuple[int, dict[str, float]]]:
    """Run the greedy selection, recording (picked index, p(w) after squaring).

    The trace drives both `sumbasic` and the monotonicity checks.
    """
    probs = word_probabilities(doc, norm)
    sent_words = [
        [t.normalized for t in normalize(s.tokens, norm)] for s in doc.sentences
    ]
    token_counts = [s.token_count for s in doc.sentences]

    remaining = list(range(len(doc.sentences)))
    trace: list[tuple[int, dict[str, float]]] = []
    used = 0
    while remaining:
        weights = {
            i: (sum(probs[w] for w in sent_words[i]) / len(sent_words[i]) if sent_words[i] else 0.0)
            for i in remaining
        }
        best = max(remaining, key=lambda i: (weights[i], -i))
        if len(trace) >= budget.min_sentences and used + token_counts[best] > budget.target_words:
            break
        used += token_counts[best]
        remaining.remove(best)
        for w in set(sent_words[best]):
            probs[w] = probs[w] ** 2
        trace.append((best, dict(probs)))
    return trace


def sumbasic(
    doc: Document,
    budget: SummaryBudget | None = None,
    norm: NormalizationConfig | None = None,
) -> SummaryResult:
    if not doc.sentences:
        raise DataError("empty input: document has no sentences")
    trace = selection_trace(doc, budget or SummaryBudget(), norm or NormalizationConfig())
    chosen = sorted(i for i, _ in trace)
    return SummaryResult(
        summarizer=SummarizerId.sumbasic,
        text=" ".join(doc.sentences[i].text for i in chosen),
        selected_sentence_indices=tuple(chosen),
    )
