"""Deterministic text segmentation, tokenization, and normalization.

Every downstream algorithm (summarizers, ROUGE, Doc2Vec) consumes the
units produced here, so all functions are pure and total unless stated
otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .errors import ConfigError

__all__ = [
    "Token",
    "Sentence",
    "Document",
    "NormalizationConfig",
    "LengthClass",
    "segment_sentences",
    "tokenize",
    "normalize",
    "classify_length",
    "document",
    "register_lemmatizer",
    "load_word_file",
    "DEFAULT_STOPWORDS",
    "DEFAULT_ABBREVIATIONS",
]

# Maximal runs of Unicode letters/digits; underscore and punctuation break runs.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_TERMINATORS = frozenset(".!?")

# Minimal built-in stopword list (English + Slovene function words); real
# deployments override it with a word file, one token per line.
DEFAULT_STOPWORDS = frozenset(
    "a an and are as at be by for from in is it of on or that the to was with "
    "ali da in je ki ni na pa po se so za bo".split()
)

# Abbreviations that suppress a sentence split despite a trailing period.
DEFAULT_ABBREVIATIONS = frozenset(
    "dr mr mrs ms prof st itd ipd npr oz približno št str ur".split()
)


@dataclass(frozen=True)
class Token:
    """A surface token plus its normalized (lowercased/lemmatized) form."""

    surface: str
    normalized: str

    def __post_init__(self) -> None:
        if not self.surface or not self.normalized:
            raise ValueError("token surface and normalized form must be non-empty")


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    tokens: tuple[Token, ...]

    @property
    def token_count(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    raw_text: str
    sentences: tuple[Sentence, ...]
    reference_summary: str | None = None

    @property
    def token_count(self) -> int:
        return sum(s.token_count for s in self.sentences)


_LEMMATIZERS: dict[str, Callable[[str], str]] = {"identity": lambda w: w}


def register_lemmatizer(name: str, fn: Callable[[str], str]) -> None:
    """Register a pluggable lemmatizer under `name`."""
    _LEMMATIZERS[name] = fn


def _resolve_lemmatizer(name: str) -> Callable[[str], str]:
    try:
        return _LEMMATIZERS[name]
    except KeyError:
        raise ConfigError(f"unknown lemmatizer {name!r}; registered: {sorted(_LEMMATIZERS)}") from None


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase: bool = True
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    lemmatizer: str = "identity"

    def __post_init__(self) -> None:
        bad = [w for w in self.stopwords if w != w.lower()]
        if bad:
            raise ConfigError(f"stopword entries must be lowercase, got {bad[:5]}")


@dataclass(frozen=True)
class LengthClass:
    """Short/Long classification of a document at a token-count threshold."""

    long: bool
    threshold: int

    @property
    def label(self) -> str:
        return "long" if self.long else "short"


def tokenize(text: str) -> list[Token]:
    """Split text into maximal alphanumeric runs, dropping punctuation.

    The normalized form defaults to the lowercased surface; `normalize`
    applies the full configuration.
    """
    return [Token(m, m.lower()) for m in _TOKEN_RE.findall(text)]


def normalize(tokens: Iterable[Token], cfg: NormalizationConfig) -> list[Token]:
    """Lowercase/lemmatize tokens per `cfg` and drop stopwords.

    The result is a subsequence of the input (by surface form) and the
    operation is idempotent.
    """
    lemmatize = _resolve_lemmatizer(cfg.lemmatizer)
    out = []
    for tok in tokens:
        norm = tok.surface.lower() if cfg.lowercase else tok.surface
        norm = lemmatize(norm)
        if not norm or norm in cfg.stopwords:
            continue
        out.append(Token(tok.surface, norm))
    return out


def _word_before(text: str, pos: int) -> str:
    """Alphanumeric word immediately preceding `pos` (empty if none adjacent)."""
    end = pos
    start = end
    while start > 0 and _TOKEN_RE.fullmatch(text[start - 1]):
        start -= 1
    return text[start:end]


def segment_sentences(
    raw_text: str, abbreviations: frozenset[str] | None = None
) -> list[Sentence]:
    """Rule-based sentence splitting.

    A boundary is a run of terminator characters (. ! ?) followed by
    whitespace and an uppercase letter, unless the word before the run is
    a known abbreviation. Whitespace-only input yields an empty list.
    """
    abbrevs = DEFAULT_ABBREVIATIONS if abbreviations is None else abbreviations
    spans: list[str] = []
    n = len(raw_text)
    start = 0
    i = 0
    while i < n:
        if raw_text[i] in _TERMINATORS:
            j = i + 1
            while j < n and raw_text[j] in _TERMINATORS:
                j += 1
            k = j
            while k < n and raw_text[k].isspace():
                k += 1
            if k > j and k < n and raw_text[k].isupper():
                word = _word_before(raw_text, i)
                if word.lower().rstrip(".") not in abbrevs:
                    spans.append(raw_text[start:j])
                    start = k
            i = j
        else:
            i += 1
    if start < n:
        spans.append(raw_text[start:])

    sentences = []
    for span in spans:
        text = span.strip()
        if not text:
            continue
        sentences.append(Sentence(len(sentences), text, tuple(tokenize(text))))
    return sentences


def classify_length(doc: Document, threshold: int = 512) -> LengthClass:
    """Long iff the document holds more than `threshold` tokens."""
    if threshold <= 0:
        raise ConfigError(f"length threshold must be positive, got {threshold}")
    return LengthClass(long=doc.token_count > threshold, threshold=threshold)


def document(
    doc_id: str,
    raw_text: str,
    reference_summary: str | None = None,
    abbreviations: frozenset[str] | None = None,
) -> Document:
    """Build a Document: segment, tokenize, and index sentences."""
    return Document(
        id=doc_id,
        raw_text=raw_text,
        sentences=tuple(segment_sentences(raw_text, abbreviations)),
        reference_summary=reference_summary,
    )


def load_word_file(path: str | Path) -> frozenset[str]:
    """Read a UTF-8 word list, one token per line, `#` comments allowed."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        entry = line.split("#", 1)[0].strip()
        if entry:
            words.add(entry.lower())
    return frozenset(words)
