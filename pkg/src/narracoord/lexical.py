"""Lexical diversity metrics: MATTR, word entropy, character-trigram entropy.

Metric functions return ``None`` when their input is degenerate (empty
token stream, text shorter than a trigram); callers report those as
missing metrics rather than zeros.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from .corpus import SourceSlice, _URL_RE, _WS_RE

MATTR_WINDOW = 500

_TOKEN_RE = re.compile(r"#\w+|\w+")


@dataclass(frozen=True)
class LexicalScore:
    """Per-slice lexical diversity summary."""

    mattr: float | None
    h_word: float | None
    h_char3: float | None
    token_count: int
    window_size: int


def tokenize(text: str) -> list[str]:
    """Unicode word tokens, lowercased; URLs dropped, hashtags kept whole.

    Word-boundary segmentation splits on punctuation ("Re-entry" tokenizes
    to "re", "entry"); pure-punctuation runs never produce a token.
    """
    return [t.lower() for t in _TOKEN_RE.findall(_URL_RE.sub(" ", text))]


def mattr(tokens, window: int = MATTR_WINDOW) -> float | None:
    """Moving-average type-token ratio over a sliding token window.

    For N >= window this is the mean of per-window type counts divided by
    the window size, computed with a rolling count in O(N). A stream
    shorter than the window falls back to whole-sequence TTR.
    """
    n = len(tokens)
    if n == 0:
        return None
    if window < 1:
        raise ValueError("window must be positive")
    if n < window:
        return len(set(tokens)) / n

    counts = Counter(tokens[:window])
    distinct = len(counts)
    distinct_sum = distinct
    for i in range(window, n):
        incoming, outgoing = tokens[i], tokens[i - window]
        if incoming != outgoing:
            counts[incoming] += 1
            if counts[incoming] == 1:
                distinct += 1
            counts[outgoing] -= 1
            if counts[outgoing] == 0:
                del counts[outgoing]
                distinct -= 1
        distinct_sum += distinct
    return distinct_sum / (window * (n - window + 1))


def _entropy_bits(counts) -> float:
    """Shannon entropy (bits) of an empirical count distribution."""
    n = sum(counts)
    if n == 0:
        return 0.0
    return math.log2(n) - sum(c * math.log2(c) for c in counts if c) / n


def word_entropy(tokens) -> float | None:
    """Shannon entropy of the unigram distribution, log base 2."""
    if not tokens:
        return None
    return _entropy_bits(Counter(tokens).values())


def char_trigram_entropy(text: str) -> float | None:
    """Shannon entropy over overlapping character 3-grams.

    Expects normalized text (lowercased, whitespace collapsed); returns
    None when fewer than 3 characters remain.
    """
    if len(text) < 3:
        return None
    counts = Counter(text[i : i + 3] for i in range(len(text) - 2))
    return _entropy_bits(counts.values())


def normalize_slice_text(slc: SourceSlice) -> str:
    """Messages joined by a single space, lowercased, whitespace collapsed."""
    joined = " ".join(r.text for r in slc.records)
    return _WS_RE.sub(" ", joined.lower()).strip()


def lexical_score(slc: SourceSlice, window: int = MATTR_WINDOW) -> LexicalScore:
    """All three lexical metrics over the slice's concatenated token stream.

    Messages contribute tokens in timestamp order (the slice is already
    sorted). A slice with no tokens yields a score row with all metrics
    missing.
    """
    tokens: list[str] = []
    for r in slc.records:
        tokens.extend(tokenize(r.text))
    if not tokens:
        return LexicalScore(None, None, None, 0, window)
    return LexicalScore(
        mattr=mattr(tokens, window),
        h_word=word_entropy(tokens),
        h_char3=char_trigram_entropy(normalize_slice_text(slc)),
        token_count=len(tokens),
        window_size=window,
    )
