"""Embedding triangular presentations into the density model.

The word table W holds all reduced words of length k = l/3 over n
generators that begin and end with a positive letter, in lexicographic
order.  The substitution phi sends the i-th generator of a positive
triangular presentation to the i-th table word; positive boundary letters
make every junction cancellation free, so relator images are cyclically
reduced words of length exactly l.

coset_normal_form writes any reduced word w as prefix * f_1 * ... * f_r
with a prefix of at most 2 letters and each f_i a table word or an
inverse of one, realising the finite-index property of the image
subgroup.  The factorisation is constructive: the residual after the
prefix is an even-length word whose boundary letters have opposite signs,
and such words split into blocks head * segment * tail^-1, each expressed
as X * Y^-1 for two table words X = head v' u t and Y = tail v''^-1 u t
sharing a padding word u and a trailing positive letter t.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .models import COUNT_CAP, Presentation
from .words import (
    Word,
    concat,
    enumerate_words,
    inverse_word,
    is_cyclically_reduced,
    is_reduced,
    validate_word,
    word_key,
    word_to_text,
)


@dataclass
class WordTable:
    """Lexicographically ordered positive-boundary words of length k."""

    n: int
    k: int
    words: list[Word]
    index: dict[Word, int] = field(repr=False)
    rho_index: list[int] = field(repr=False)

    @property
    def l(self) -> int:
        return 3 * self.k


def build_word_table(n: int, l: int) -> WordTable:
    """Table of the reduced length-(l/3) words with positive boundary.

    l must be a positive multiple of 3.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if l < 3 or l % 3:
        raise ValueError("relator length l must be a positive multiple of 3")
    k = l // 3
    words = enumerate_words(n, k, "positive-boundary")
    index = {w: i for i, w in enumerate(words)}
    rho = []
    for w in words:
        rw = tuple(reversed(w))
        if rw not in index:
            raise AssertionError("table is not closed under reversal")
        rho.append(index[rw])
    return WordTable(n, k, words, index, rho)


def phi_map(p: Presentation, table: WordTable) -> Presentation:
    """Image of a positive triangular presentation under the substitution.

    Every relator s_x s_y s_z becomes w_x w_y w_z, which is cyclically
    reduced of length 3k by the positive-boundary property.
    """
    if p.generator_count != len(table.words):
        raise ValueError(
            f"presentation has {p.generator_count} generators, "
            f"table has {len(table.words)} words"
        )
    images = []
    for w in p.relators:
        if len(w) != 3 or any(x < 0 for x in w):
            raise ValueError(f"relator {word_to_text(w)!r} is not a positive triple")
        img = table.words[w[0] - 1] + table.words[w[1] - 1] + table.words[w[2] - 1]
        if len(img) != table.l or not is_cyclically_reduced(img):
            raise AssertionError("substitution image failed the length-l invariant")
        images.append(img)
    return Presentation(table.n, images, model_tag="gromov-restricted")


def sample_gromov_restricted(
    n: int,
    l: int,
    d: float,
    rng: random.Random,
    count_scale: float = 0.5,
    count: int | None = None,
    cap: int = COUNT_CAP,
) -> Presentation:
    """Density-d sampling with relators uniform over table-word triples.

    The relator count is floor(count_scale * (2m-1)^(3d)) where m is the
    table size, matching the density count of the triangular presentation
    upstairs up to the constant factor count_scale.
    """
    if not 0 < d < 1:
        raise ValueError("density d must lie in (0, 1)")
    table = build_word_table(n, l)
    m = len(table.words)
    if count is None:
        x = count_scale * math.pow(2 * m - 1, 3 * d)
        if x > cap:
            raise ValueError(f"relator count {x:.3g} exceeds cap {cap}")
        count = math.floor(x)
    images = []
    for _ in range(count):
        i, j, h = rng.randrange(m), rng.randrange(m), rng.randrange(m)
        images.append(table.words[i] + table.words[j] + table.words[h])
    return Presentation(n, images, model_tag="gromov-restricted")


# ------------------------------------------------------ coset normal form


def _smallest_positive(n: int, forbidden) -> int | None:
    for c in range(1, n + 1):
        if c not in forbidden:
            return c
    return None


def _fill_padding(n: int, length: int, forbidden_first) -> Word:
    """Deterministic reduced padding word for the block construction.

    The first letter is the smallest letter (positives before negatives)
    outside forbidden_first; later letters alternate a1 a2, skipping a
    letter that would cancel a negative first letter.
    """
    if length == 0:
        return ()
    first = None
    for c in list(range(1, n + 1)) + [-c for c in range(1, n + 1)]:
        if c not in forbidden_first:
            first = c
            break
    if first is None:
        raise AssertionError("padding start over-constrained")
    out = [first]
    alt = 0
    while len(out) < length:
        c = (alt % 2) + 1 if n >= 2 else 1
        if out[-1] < 0 and c == -out[-1]:
            c = ((alt + 1) % 2) + 1
            alt += 2
        else:
            alt += 1
        out.append(c)
    return tuple(out)


def _head_constraint(seg: Word) -> set[int]:
    """Positive letters a block head must avoid (head . seg stays reduced)."""
    if seg and seg[0] < 0:
        return {-seg[0]}
    return set()


def _tail_constraint(seg: Word) -> set[int]:
    """Positive letters a block tail must avoid (tail . seg''^-1 stays reduced)."""
    if seg and seg[-1] > 0:
        return {seg[-1]}
    return set()


def _dead_pair(n: int, seg: Word) -> bool:
    """k = 3 only: no trailing letter works for the 2-letter segment."""
    forb = set()
    if seg[0] < 0:
        forb.add(-seg[0])
    if seg[1] > 0:
        forb.add(seg[1])
    return _smallest_positive(n, forb) is None


def _base_factors(head: int, seg: Word, tail: int, table: WordTable) -> list[int]:
    """Express head * seg * tail^-1 as X * Y^-1 for two table words.

    X = head v' u t and Y = tail v''^-1 u t where seg = v' v'' in equal
    halves and u is padding sized so both words have length k.
    """
    n = table.n
    kk = table.k - 2
    half = len(seg) // 2
    v1, v2 = seg[:half], seg[half:]
    ulen = kk - half
    if ulen < 0:
        raise AssertionError("segment longer than 2(k-2)")
    if ulen == 0:
        forb = set()
        if v1[-1] < 0:
            forb.add(-v1[-1])
        if v2[0] > 0:
            forb.add(v2[0])
        tau = _smallest_positive(n, forb)
        if tau is None:
            raise AssertionError("dead segment reached the block builder")
        u: Word = ()
    else:
        last_x = v1[-1] if v1 else head
        last_y = -v2[0] if v2 else tail
        u = _fill_padding(n, ulen, {-last_x, -last_y})
        tau = _smallest_positive(n, {-u[-1]})
        if tau is None:
            raise AssertionError("no trailing letter after padding")
    x_word = (head,) + tuple(v1) + u + (tau,)
    y_word = (tail,) + inverse_word(tuple(v2)) + u + (tau,)
    for block in (x_word, y_word):
        if block not in table.index:
            raise AssertionError(f"constructed block {word_to_text(block)!r} not in table")
    return [table.index[x_word] + 1, -(table.index[y_word] + 1)]


def _factor_pm(g: Word, table: WordTable) -> list[int]:
    """Factor an even-length reduced word starting positive, ending negative."""
    n = table.n
    kk = table.k - 2
    a, b = g[0], -g[-1]
    v = list(g[1:-1])
    chunk = 2 if kk == 1 else 2 * kk - 2
    segs = [tuple(v[i : i + chunk]) for i in range(0, len(v), chunk)]
    if kk == 1:
        split = []
        for seg in segs:
            if len(seg) == 2 and _dead_pair(n, seg):
                x, y = seg
                split.append((x, -y))
                split.append((y, y))
            else:
                split.append(seg)
        segs = split
    if not segs:
        segs = [()]
    blocks: list[tuple[int, Word, int]] = []
    cur = a
    for i, seg in enumerate(segs):
        if i == len(segs) - 1:
            blocks.append((cur, seg, b))
            break
        want = _tail_constraint(seg) | _head_constraint(segs[i + 1])
        t = _smallest_positive(n, want)
        if t is None:
            left = _smallest_positive(n, _tail_constraint(seg))
            right = _smallest_positive(n, _head_constraint(segs[i + 1]))
            blocks.append((cur, seg, left))
            blocks.append((left, (), right))
            cur = right
        else:
            blocks.append((cur, seg, t))
            cur = t
    factors: list[int] = []
    for head, seg, tail in blocks:
        factors.extend(_base_factors(head, seg, tail, table))
    return factors


def _factor_mp(g: Word, table: WordTable) -> list[int]:
    """Mirror of _factor_pm via the reversal anti-automorphism."""
    rg = tuple(reversed(g))
    fs = _factor_pm(rg, table)
    out = []
    for f in reversed(fs):
        sign = 1 if f > 0 else -1
        out.append(sign * (table.rho_index[abs(f) - 1] + 1))
    return out


def _try_factor(g: Word, table: WordTable) -> list[int] | None:
    if not g:
        return []
    if g in table.index:
        return [table.index[g] + 1]
    ig = inverse_word(g)
    if ig in table.index:
        return [-(table.index[ig] + 1)]
    if len(g) % 2:
        return None
    if g[0] > 0 and g[-1] < 0:
        return _factor_pm(g, table)
    if g[0] < 0 and g[-1] > 0:
        return _factor_mp(g, table)
    return None


def _prefix_candidates(n: int):
    yield ()
    letters = sorted(
        list(range(1, n + 1)) + [-c for c in range(1, n + 1)],
        key=lambda x: (abs(x), 0 if x > 0 else 1),
    )
    for x in letters:
        yield (x,)
    for x in letters:
        for y in letters:
            if y != -x:
                yield (x, y)


def expand_factors(factors: list[int], table: WordTable) -> Word:
    """Free product of the table words named by signed 1-based indices."""
    parts = []
    for f in factors:
        if f == 0 or abs(f) > len(table.words):
            raise ValueError(f"factor index {f} out of range")
        w = table.words[abs(f) - 1]
        parts.append(w if f > 0 else inverse_word(w))
    return concat(*parts)


def coset_normal_form(w: Word, table: WordTable) -> tuple[Word, list[int]]:
    """Write w as prefix times a product of table words and inverses.

    Returns (prefix, factors): the prefix has at most 2 letters and the
    factors are signed 1-based table indices satisfying
    concat(prefix, expansion of factors) == w.  Needs n >= 2 and k >= 3
    (l >= 9); the k = 2 tables leave no room for the padding letter.
    """
    if table.n < 2:
        raise ValueError("coset normal forms need n >= 2")
    if table.k < 3:
        raise ValueError("coset normal forms need l >= 9 (so that l/3 - 2 >= 1)")
    w = tuple(w)
    validate_word(w, table.n)
    if not is_reduced(w):
        raise ValueError("word is not freely reduced")
    for prefix in _prefix_candidates(table.n):
        g = concat(inverse_word(prefix), w)
        factors = _try_factor(g, table)
        if factors is None:
            continue
        check = concat(prefix, expand_factors(factors, table))
        if check != w:
            raise AssertionError("factorisation failed the identity check")
        return prefix, factors
    raise AssertionError("no admissible prefix of length <= 2 found")
