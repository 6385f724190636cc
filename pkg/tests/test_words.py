"""Free-group word operations, text encoding, sampling, enumeration."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randomgroups.words import (
    EnumerationCapError,
    SamplingBudgetError,
    alphabet,
    concat,
    cyclic_reduce,
    enumerate_words,
    free_reduce,
    inverse_word,
    is_cyclically_reduced,
    is_reduced,
    letter_from_text,
    letter_key,
    letter_to_text,
    sample_cyclically_reduced,
    sample_positive_triple,
    sample_reduced,
    validate_word,
    word_from_text,
    word_key,
    word_to_text,
)

letters_m3 = st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0)
words_m3 = st.lists(letters_m3, max_size=12).map(tuple)


def brute_reduce(w):
    # cancel one adjacent pair at a time until stable
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i : i + 2]
                changed = True
                break
    return tuple(w)


@given(words_m3)
@settings(max_examples=300)
def test_free_reduce_matches_one_step_cancellation(w):
    assert free_reduce(w) == brute_reduce(w)


@given(words_m3)
def test_free_reduce_idempotent_and_reduced(w):
    r = free_reduce(w)
    assert is_reduced(r)
    assert free_reduce(r) == r


@given(words_m3)
def test_inverse_cancels(w):
    assert concat(w, inverse_word(w)) == ()
    assert concat(inverse_word(w), w) == ()


@given(words_m3, words_m3)
def test_concat_is_reduced_product(a, b):
    assert concat(a, b) == free_reduce(a + b)


@given(words_m3, letters_m3)
def test_cyclic_reduce_conjugation(w, x):
    r = cyclic_reduce(w)
    assert is_cyclically_reduced(r)
    # conjugates cyclically reduce to a rotation of the same word
    r2 = cyclic_reduce((x,) + w + (-x,))
    assert len(r2) == len(r)
    rotations = {r[i:] + r[:i] for i in range(len(r))} or {()}
    assert r2 in rotations


def test_empty_word_conventions():
    assert free_reduce(()) == ()
    assert is_reduced(())
    assert is_cyclically_reduced(())
    assert cyclic_reduce(()) == ()
    assert word_to_text(()) == ""
    assert word_from_text("") == ()


def test_alphabet_and_letter_order():
    assert alphabet(2) == [1, -1, 2, -2]
    assert sorted([2, -1, 1, -2], key=letter_key) == [1, -1, 2, -2]
    assert word_key((1, -1)) < word_key((1, 2))


def test_letter_text_round_trip():
    for x in alphabet(4):
        assert letter_from_text(letter_to_text(x)) == x
    assert letter_to_text(3) == "a3"
    assert letter_to_text(-3) == "A3"
    with pytest.raises(ValueError):
        letter_to_text(0)
    for bad in ("a", "b2", "a0", "A-1", "a2.5", ""):
        with pytest.raises(ValueError):
            letter_from_text(bad)


def test_word_text_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        w = sample_reduced(3, rng.randrange(0, 9), rng)
        assert word_from_text(word_to_text(w)) == w
    assert word_from_text("a1 A2 a1") == (1, -2, 1)
    with pytest.raises(ValueError):
        word_from_text("a1 a4", m=3)


def test_validate_word():
    validate_word((1, -2), 2)
    with pytest.raises(ValueError):
        validate_word((0,), 2)
    with pytest.raises(ValueError):
        validate_word((3,), 2)


def test_sample_reduced_is_reduced_and_in_range():
    rng = random.Random(0)
    for _ in range(200):
        w = sample_reduced(2, 7, rng)
        assert len(w) == 7
        assert is_reduced(w)
        validate_word(w, 2)
    assert sample_reduced(1, 0, rng) == ()
    with pytest.raises(ValueError):
        sample_reduced(0, 3, rng)
    with pytest.raises(ValueError):
        sample_reduced(2, -1, rng)


def test_sample_reduced_uniform_over_length_two():
    # 2m(2m-1) = 12 reduced words of length 2 at m = 2
    rng = random.Random(1)
    counts = {}
    n = 12_000
    for _ in range(n):
        w = sample_reduced(2, 2, rng)
        counts[w] = counts.get(w, 0) + 1
    assert len(counts) == 12
    exp = n / 12
    assert max(abs(c - exp) for c in counts.values()) < 5 * exp**0.5


def test_sample_cyclically_reduced():
    rng = random.Random(2)
    for _ in range(200):
        w = sample_cyclically_reduced(2, 5, rng)
        assert is_cyclically_reduced(w)
    # m = 1 never rejects: powers of one letter are cyclically reduced
    assert sample_cyclically_reduced(1, 4, rng) in {(1, 1, 1, 1), (-1, -1, -1, -1)}


def test_sample_positive_triple():
    rng = random.Random(4)
    seen = set()
    for _ in range(500):
        t = sample_positive_triple(2, rng)
        assert all(1 <= x <= 2 for x in t)
        seen.add(t)
    assert len(seen) == 8


def test_enumerate_reduced_counts():
    # 2m (2m-1)^(l-1) reduced words of length l
    for m, l in [(1, 4), (2, 3), (3, 2)]:
        assert len(enumerate_words(m, l, "reduced")) == 2 * m * (2 * m - 1) ** (l - 1)


def test_enumerate_matches_filtered_product():
    letters = [1, -1, 2, -2]
    for l in range(0, 4):
        everything = list(itertools.product(letters, repeat=l))
        red = [w for w in everything if is_reduced(w)]
        cyc = [w for w in everything if is_cyclically_reduced(w)]
        pos = [w for w in red if w and w[0] > 0 and w[-1] > 0]
        assert sorted(enumerate_words(2, l, "reduced")) == sorted(red)
        assert sorted(enumerate_words(2, l, "cyclically-reduced")) == sorted(cyc)
        assert sorted(enumerate_words(2, l, "positive-boundary")) == sorted(pos)


def test_enumerate_support_sizes():
    assert len(enumerate_words(2, 3, "reduced")) == 36
    assert len(enumerate_words(2, 3, "cyclically-reduced")) == 28
    assert len(enumerate_words(2, 2, "positive-boundary")) == 4
    assert len(enumerate_words(2, 3, "positive-boundary")) == 10
    assert len(enumerate_words(2, 4, "positive-boundary")) == 28


def test_enumerate_is_lexicographically_sorted():
    ws = enumerate_words(2, 3, "cyclically-reduced")
    assert ws == sorted(ws, key=word_key)
    assert ws[0] == (1, 1, 1)


def test_enumerate_edge_cases():
    assert enumerate_words(2, 0, "reduced") == [()]
    assert enumerate_words(2, 0, "positive-boundary") == []
    with pytest.raises(ValueError):
        enumerate_words(2, 3, "palindromic")
    with pytest.raises(ValueError):
        enumerate_words(0, 3)
    with pytest.raises(EnumerationCapError):
        enumerate_words(10, 12)


def test_rejection_budget_error_type():
    assert issubclass(SamplingBudgetError, ValueError)
