"""Free-group words over m generators.

A letter is a signed int: +i is the generator a_i (1-based), -i is its
inverse.  A word is a tuple of letters.  The empty tuple is the empty word,
which counts as reduced and cyclically reduced by convention.

Text form: ``a3`` is the third generator, ``A3`` its inverse; letters are
space separated and the empty string is the empty word.

Lexicographic order sorts by generator index first, with the positive
letter before its inverse (a1 < A1 < a2 < A2 < ...).
"""

from __future__ import annotations

import random
from typing import Iterator

Word = tuple[int, ...]

REJECTION_LIMIT = 10_000
ENUMERATION_CAP = 2_000_000


class SamplingBudgetError(ValueError):
    """Rejection sampling failed to accept within its attempt budget."""


class EnumerationCapError(ValueError):
    """The requested enumeration exceeds the configured cap."""


def letter_key(x: int) -> tuple[int, int]:
    """Sort key realising the lexicographic letter order."""
    return (abs(x), 0 if x > 0 else 1)


def word_key(w: Word) -> tuple[tuple[int, int], ...]:
    return tuple(letter_key(x) for x in w)


def alphabet(m: int) -> list[int]:
    """All 2m letters in lexicographic order."""
    out = []
    for i in range(1, m + 1):
        out.append(i)
        out.append(-i)
    return out


def inverse_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Word) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Word) -> bool:
    """Reduced and the last letter is not the inverse of the first."""
    if not w:
        return True
    return is_reduced(w) and w[-1] != -w[0]


def cyclic_reduce(w: Word) -> Word:
    """Strip cancelling boundary pairs from the free reduction of w."""
    r = free_reduce(w)
    while len(r) >= 2 and r[0] == -r[-1]:
        r = r[1:-1]
    return r


def concat(*parts: Word) -> Word:
    """Free product of words, reduced."""
    out: list[int] = []
    for part in parts:
        for x in part:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def validate_word(w: Word, m: int) -> None:
    for x in w:
        if x == 0 or abs(x) > m:
            raise ValueError(f"letter {x} outside alphabet of {m} generators")


def letter_to_text(x: int) -> str:
    if x == 0:
        raise ValueError("0 is not a letter")
    return f"a{x}" if x > 0 else f"A{-x}"


def letter_from_text(s: str) -> int:
    if len(s) < 2 or s[0] not in "aA" or not s[1:].isdigit():
        raise ValueError(f"bad letter {s!r}")
    i = int(s[1:])
    if i < 1:
        raise ValueError(f"bad letter {s!r}")
    return i if s[0] == "a" else -i


def word_to_text(w: Word) -> str:
    return " ".join(letter_to_text(x) for x in w)


def word_from_text(s: str, m: int | None = None) -> Word:
    w = tuple(letter_from_text(tok) for tok in s.split())
    if m is not None:
        validate_word(w, m)
    return w


def sample_reduced(m: int, l: int, rng: random.Random) -> Word:
    """Uniform reduced word of length l over m generators.

    Chain construction: first letter uniform over the 2m letters, each
    following letter uniform over the 2m - 1 letters that do not cancel
    the previous one.  Every reduced word of length l has probability
    exactly 1 / (2m * (2m-1)^(l-1)).
    """
    if m < 1:
        raise ValueError("need m >= 1 generators")
    if l < 0:
        raise ValueError("need l >= 0")
    if l == 0:
        return ()
    letters = alphabet(m)
    w = [rng.choice(letters)]
    for _ in range(l - 1):
        nxt = rng.choice(letters)
        while nxt == -w[-1]:
            nxt = rng.choice(letters)
        w.append(nxt)
    return tuple(w)


def sample_cyclically_reduced(
    m: int, l: int, rng: random.Random, max_attempts: int = REJECTION_LIMIT
) -> Word:
    """Uniform cyclically reduced word of length l over m generators.

    Rejection on top of sample_reduced: a draw is rejected when the last
    letter inverts the first, which conditions the uniform distribution on
    the cyclically reduced subset.  Raises SamplingBudgetError after
    max_attempts rejections (cannot trigger for m = 1, where the chain only
    produces powers of a single letter).
    """
    for _ in range(max_attempts):
        w = sample_reduced(m, l, rng)
        if is_cyclically_reduced(w):
            return w
    raise SamplingBudgetError(
        f"no cyclically reduced word of length {l} over {m} generators "
        f"in {max_attempts} attempts"
    )


def sample_positive_triple(m: int, rng: random.Random) -> Word:
    """Uniform positive length-3 word (all m^3 are admissible)."""
    return (rng.randint(1, m), rng.randint(1, m), rng.randint(1, m))


_CONSTRAINTS = ("reduced", "cyclically-reduced", "positive-boundary")


def enumerate_words(
    m: int, l: int, constraint: str = "reduced", cap: int = ENUMERATION_CAP
) -> list[Word]:
    """All length-l words satisfying the constraint, in lexicographic order.

    constraint is one of "reduced", "cyclically-reduced", or
    "positive-boundary" (reduced with positive first and last letter).
    Guards on (2m)^l <= cap before starting.
    """
    if constraint not in _CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}")
    if m < 1 or l < 0:
        raise ValueError("need m >= 1 and l >= 0")
    if (2 * m) ** l > cap:
        raise EnumerationCapError(f"(2m)^l = {(2 * m) ** l} exceeds cap {cap}")
    if l == 0:
        return [] if constraint == "positive-boundary" else [()]
    letters = sorted(alphabet(m), key=letter_key)
    first = [x for x in letters if x > 0] if constraint == "positive-boundary" else letters
    out: list[Word] = []

    def extend(w: list[int]) -> Iterator[Word]:
        if len(w) == l:
            if constraint == "cyclically-reduced" and w[-1] == -w[0]:
                return
            if constraint == "positive-boundary" and w[-1] < 0:
                return
            yield tuple(w)
            return
        for x in letters:
            if w and x == -w[-1]:
                continue
            w.append(x)
            yield from extend(w)
            w.pop()

    for x in first:
        out.extend(extend([x]))
    return out
