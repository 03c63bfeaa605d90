"""Lexical diversity metrics against brute-force oracles and hand fixtures."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from narracoord.lexical import (
    char_trigram_entropy,
    lexical_score,
    mattr,
    tokenize,
    word_entropy,
)
from conftest import make_record, make_slice, utc


def mattr_naive(tokens, window):
    """Independent oracle: recount every window from scratch."""
    n = len(tokens)
    if n == 0:
        return None
    if n < window:
        return len(set(tokens)) / n
    k = n - window + 1
    return sum(len(set(tokens[i:i + window])) for i in range(k)) / (window * k)


# ------------------------------------------------------------ tokenize

def test_tokenize_splits_on_punctuation():
    assert tokenize("Re-entry over Kyiv!") == ["re", "entry", "over", "kyiv"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_keeps_hashtags_whole():
    assert tokenize("#breaking news") == ["#breaking", "news"]


def test_tokenize_drops_urls_and_pure_punctuation():
    assert tokenize("see https://example.com/x ... now") == ["see", "now"]


def test_tokenize_cyrillic():
    assert tokenize("Сводка за сутки") == ["сводка", "за", "сутки"]


# --------------------------------------------------------------- mattr

def test_mattr_single_type_degenerate():
    assert mattr(["war"] * 1000) == 1 / 500


def test_mattr_short_stream_is_plain_ttr():
    assert mattr(["a", "b", "b"], window=500) == 2 / 3


def test_mattr_empty_is_missing():
    assert mattr([]) is None


def test_mattr_repeated_block_matches_oracle():
    block = [f"t{i}" for i in range(500)]
    tokens = block * 2
    assert mattr(tokens) == mattr_naive(tokens, 500) == 1.0


def test_mattr_repeated_distinct_block_constant_in_k():
    block = [f"t{i}" for i in range(500)]
    values = {mattr(block * k) for k in range(2, 6)}
    assert values == {1.0}


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.integers(0, 20), min_size=1, max_size=400),
    st.sampled_from([2, 5, 17, 50]),
)
def test_mattr_rolling_equals_naive(values, window):
    tokens = [f"w{v}" for v in values]
    assert mattr(tokens, window) == mattr_naive(tokens, window)


def test_mattr_bounds_random_streams():
    rng = random.Random(4)
    for _ in range(20):
        tokens = [f"w{rng.randrange(30)}" for _ in range(rng.randrange(1, 900))]
        value = mattr(tokens, 50)
        assert 0 < value <= 1


# -------------------------------------------------------- word_entropy

def test_word_entropy_single_symbol():
    assert word_entropy(["a", "a", "a"]) == 0.0


def test_word_entropy_uniform_pair():
    assert word_entropy(["a", "b"]) == 1.0


def test_word_entropy_hand_derived():
    # -(0.5 log2 0.5 + 2 * 0.25 log2 0.25) = 1.5
    assert word_entropy(["a", "a", "b", "c"]) == pytest.approx(1.5, abs=1e-12)


def test_word_entropy_empty_is_missing():
    assert word_entropy([]) is None


@settings(max_examples=100)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=300))
def test_word_entropy_bounded_by_log_types(values):
    tokens = [f"w{v}" for v in values]
    h = word_entropy(tokens)
    distinct = len(set(tokens))
    assert -1e-12 <= h <= math.log2(distinct) + 1e-12
    counts = {t: tokens.count(t) for t in set(tokens)}
    if len(set(counts.values())) == 1:  # uniform -> equality
        assert h == pytest.approx(math.log2(distinct), abs=1e-12)


# ------------------------------------------------ char_trigram_entropy

def test_trigram_entropy_degenerate():
    assert char_trigram_entropy("aaaa") == 0.0


def test_trigram_entropy_two_distinct_uniform():
    # "abcd" holds exactly two trigrams {abc, bcd}, uniform
    assert char_trigram_entropy("abcd") == pytest.approx(1.0, abs=1e-12)


def test_trigram_entropy_abab():
    # hand count: {aba: 1, bab: 1}
    assert char_trigram_entropy("abab") == pytest.approx(1.0, abs=1e-12)


def test_trigram_entropy_too_short_is_missing():
    assert char_trigram_entropy("ab") is None


# -------------------------------------------------------- lexical_score

def test_lexical_score_single_message():
    slc = make_slice([make_record("a b c")])
    score = lexical_score(slc)
    assert score.mattr == 1.0  # N < w single-window path
    assert score.h_word == pytest.approx(math.log2(3), abs=1e-12)
    assert score.token_count == 3


def test_lexical_score_two_identical_messages():
    slc = make_slice([
        make_record("x y", ts=utc(2025, 6, 1, 1)),
        make_record("x y", ts=utc(2025, 6, 1, 2)),
    ])
    assert lexical_score(slc).mattr == 0.5  # 2 types / 4 tokens


def test_lexical_score_no_tokens_is_missing_row():
    slc = make_slice([make_record("... !!! ...")])
    score = lexical_score(slc)
    assert score.token_count == 0
    assert score.mattr is None and score.h_word is None and score.h_char3 is None


def test_entropy_invariant_under_message_reordering():
    msgs = ["alpha beta gamma", "beta beta delta", "gamma alpha alpha"]
    records = [
        make_record(m, ts=utc(2025, 6, 1, i), record_id=f"o{i}")
        for i, m in enumerate(msgs)
    ]
    base = lexical_score(make_slice(records))
    records_rev = [
        make_record(m, ts=utc(2025, 6, 1, i), record_id=f"v{i}")
        for i, m in enumerate(reversed(msgs))
    ]
    other = lexical_score(make_slice(records_rev))
    assert base.h_word == other.h_word
    assert base.token_count == other.token_count
