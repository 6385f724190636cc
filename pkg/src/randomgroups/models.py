"""Random presentation and random graph samplers.

Group models: Gromov density model (i.i.d. uniform cyclically reduced
relators of length l, count floor((2n-1)^(l*d))), the triangular model
(length 3), its positive variant (uniform over all m^3 positive triples),
and the permutation model (relators s pi1(s) pi2(s) over all symbols s,
optionally with the reduced-pair constraints).

Graph models: configuration (n vertices, v permutations), its reduced
variant on 2n symbol vertices, G(n, p), G(n, M), and bipartite v-regular.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .linkgraph import Multigraph, symbol_vertex
from .words import (
    REJECTION_LIMIT,
    SamplingBudgetError,
    Word,
    sample_cyclically_reduced,
    sample_positive_triple,
    validate_word,
    word_from_text,
    word_to_text,
)

COUNT_CAP = 10_000_000


@dataclass
class Presentation:
    """A group presentation: generator count plus a relator list."""

    generator_count: int
    relators: list[Word] = field(default_factory=list)
    model_tag: str = ""

    def __post_init__(self) -> None:
        if self.generator_count < 1:
            raise ValueError("need at least one generator")
        for w in self.relators:
            validate_word(w, self.generator_count)


def relator_count(base: int, exponent: float, cap: int = COUNT_CAP) -> int:
    """floor(base^exponent) with an overflow guard.

    base is 2n-1 (or 2m-1) and exponent l*d (or 3*d).
    """
    if base < 1:
        raise ValueError("need base >= 1")
    x = math.pow(base, exponent)
    if x > cap:
        raise ValueError(f"relator count {x:.3g} exceeds cap {cap}")
    return math.floor(x)


def sample_gromov(
    n: int,
    l: int,
    d: float,
    rng: random.Random,
    count: int | None = None,
    cap: int = COUNT_CAP,
) -> Presentation:
    """Gromov model G(n, l, d): i.i.d. uniform cyclically reduced relators.

    count overrides the floor((2n-1)^(l*d)) default.  Duplicates are kept;
    the relator list is a multiset.
    """
    if not 0 < d < 1:
        raise ValueError("density d must lie in (0, 1)")
    if l < 1:
        raise ValueError("need relator length l >= 1")
    if count is None:
        count = relator_count(2 * n - 1, l * d, cap)
    rel = [sample_cyclically_reduced(n, l, rng) for _ in range(count)]
    return Presentation(n, rel, model_tag="gromov")


def sample_triangular(
    m: int,
    d: float,
    rng: random.Random,
    positive: bool = False,
    count: int | None = None,
    cap: int = COUNT_CAP,
) -> Presentation:
    """Triangular model Gamma(m, d), or its positive variant.

    floor((2m-1)^(3d)) relators, i.i.d. uniform over the cyclically
    reduced length-3 words, or over all m^3 positive triples when
    positive is true.
    """
    if not 0 < d < 1:
        raise ValueError("density d must lie in (0, 1)")
    if count is None:
        count = relator_count(2 * m - 1, 3 * d, cap)
    if positive:
        rel = [sample_positive_triple(m, rng) for _ in range(count)]
        return Presentation(m, rel, model_tag="positive-triangular")
    rel = [sample_cyclically_reduced(m, 3, rng) for _ in range(count)]
    return Presentation(m, rel, model_tag="triangular")


@dataclass
class PermutationPairSet:
    """v pairs of permutations of the 2n symbols s_1..s_n, s_1^-1..s_n^-1.

    Each permutation is a tuple of length 2n mapping vertex index to
    vertex index (symbol s sits at index symbol_vertex(s, n)).  reduced
    is set when every pair satisfies pi1(s) != s^-1, pi1(s) != pi2(s)^-1
    and pi2(s) != s^-1 for every symbol s.
    """

    n: int
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]]
    reduced: bool = False

    def apply(self, which: int, pair_index: int, s: int) -> int:
        """Image of symbol s under pi_which (which is 1 or 2)."""
        from .linkgraph import vertex_symbol

        perm = self.pairs[pair_index][which - 1]
        return vertex_symbol(perm[symbol_vertex(s, self.n)], self.n)


def _pair_is_reduced(pi1: tuple[int, ...], pi2: tuple[int, ...], n: int) -> bool:
    for idx in range(2 * n):
        inv_idx = idx + n if idx < n else idx - n
        if pi1[idx] == inv_idx:
            return False
        if pi2[idx] == inv_idx:
            return False
        img, img2 = pi1[idx], pi2[idx]
        inv_img = img + n if img < n else img - n
        if img2 == inv_img:
            return False
    return True


def _symbols_in_order(n: int) -> list[int]:
    return [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]


def sample_permutation_model(
    n: int,
    v: int,
    rng: random.Random,
    reduced: bool = False,
    max_attempts: int = REJECTION_LIMIT,
) -> tuple[Presentation, PermutationPairSet]:
    """Permutation model: relators s pi1_i(s) pi2_i(s) for all s, i = 1..v.

    Unreduced pairs are uniform over all permutation pairs of the 2n
    symbols and may give relators that are not cyclically reduced.  With
    reduced=True, pairs are rejection sampled jointly until the three
    reduced-pair constraints hold, which makes every relator cyclically
    reduced; the acceptance rate tends to e^-3 so the default budget is
    ample.  Relators are listed pair by pair, symbols in the order
    s_1..s_n, s_1^-1..s_n^-1.
    """
    if n < 1 or v < 1:
        raise ValueError("need n >= 1 and v >= 1")
    from .linkgraph import vertex_symbol

    idx = list(range(2 * n))
    pairs = []
    for _ in range(v):
        for _ in range(max_attempts):
            pi1 = tuple(rng.sample(idx, 2 * n))
            pi2 = tuple(rng.sample(idx, 2 * n))
            if not reduced or _pair_is_reduced(pi1, pi2, n):
                pairs.append((pi1, pi2))
                break
        else:
            raise SamplingBudgetError(
                f"no reduced permutation pair for n={n} in {max_attempts} attempts"
            )
    # symbol-major listing: relator for (s, pair i) sits at index
    # (symbol index) * v + i, so a round-robin split by index mod v
    # puts each pair's 2n relators back together
    rel = []
    for s in _symbols_in_order(n):
        i = symbol_vertex(s, n)
        for pi1, pi2 in pairs:
            rel.append((s, vertex_symbol(pi1[i], n), vertex_symbol(pi2[i], n)))
    tag = "permutation-reduced" if reduced else "permutation"
    return Presentation(n, rel, model_tag=tag), PermutationPairSet(n, pairs, reduced)


# ---------------------------------------------------------------- graphs

GRAPH_KINDS = ("configuration", "configuration_reduced", "gnp", "gnm", "bipartite_regular")


def sample_graph(kind: str, rng: random.Random, **params) -> Multigraph:
    """Dispatch to one of the graph samplers by kind name."""
    if kind == "configuration":
        return sample_configuration(params["n"], params["v"], rng)
    if kind == "configuration_reduced":
        return sample_configuration_reduced(params["n"], params["v"], rng)
    if kind == "gnp":
        return sample_gnp(params["n"], params["p"], rng)
    if kind == "gnm":
        return sample_gnm(params["n"], params["M"], rng)
    if kind == "bipartite_regular":
        return sample_bipartite_regular(params["n"], params["v"], rng)
    raise ValueError(f"unknown graph kind {kind!r}")


def sample_configuration(n: int, v: int, rng: random.Random) -> Multigraph:
    """Theta(n, v): edges (i, pi_k(i)) for v uniform permutations of n vertices.

    A 2v-regular multigraph when loops count twice.
    """
    if n < 1 or v < 1:
        raise ValueError("need n >= 1 and v >= 1")
    g = Multigraph(n)
    g.meta["kind"] = "configuration"
    idx = list(range(n))
    for _ in range(v):
        pi = rng.sample(idx, n)
        for i in range(n):
            g.add_edge(i, pi[i])
    return g


def sample_configuration_reduced(
    n: int, v: int, rng: random.Random, max_attempts: int = REJECTION_LIMIT
) -> Multigraph:
    """Reduced configuration model on the 2n symbol vertices.

    Each of the v permutations pi of the symbols is rejection sampled
    until pi(s) != s^-1 for every s, then contributes the n*2 edges
    (s, pi(s)).
    """
    if n < 1 or v < 1:
        raise ValueError("need n >= 1 and v >= 1")
    g = Multigraph(2 * n)
    g.meta["kind"] = "configuration_reduced"
    idx = list(range(2 * n))
    for _ in range(v):
        for _ in range(max_attempts):
            pi = rng.sample(idx, 2 * n)
            if all(pi[i] != (i + n) % (2 * n) for i in range(2 * n)):
                break
        else:
            raise SamplingBudgetError(
                f"no reduced permutation for n={n} in {max_attempts} attempts"
            )
        for i in range(2 * n):
            g.add_edge(i, pi[i])
    return g


def sample_gnp(n: int, p: float, rng: random.Random) -> Multigraph:
    """Erdos-Renyi G(n, p), simple."""
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    g = Multigraph(n)
    g.meta["kind"] = "gnp"
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(i, j)
    return g


def sample_gnm(n: int, M: int, rng: random.Random) -> Multigraph:
    """G(n, M): a uniform M-subset of the n(n-1)/2 pairs, simple.

    Sampled by rejection into a set; when M exceeds half the pairs the
    complement is sampled instead.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    total = n * (n - 1) // 2
    if not 0 <= M <= total:
        raise ValueError(f"M must lie in [0, {total}]")
    g = Multigraph(n)
    g.meta["kind"] = "gnm"
    take_complement = M > total // 2
    k = total - M if take_complement else M
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < k:
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        chosen.add((min(i, j), max(i, j)))
    if take_complement:
        for i in range(n):
            for j in range(i + 1, n):
                if (i, j) not in chosen:
                    g.add_edge(i, j)
    else:
        for i, j in sorted(chosen):
            g.add_edge(i, j)
    return g


def sample_bipartite_regular(n: int, v: int, rng: random.Random) -> Multigraph:
    """Bipartite v-regular multigraph: two sides of n, edges (i, n + pi_j(i))."""
    if n < 1 or v < 1:
        raise ValueError("need n >= 1 and v >= 1")
    g = Multigraph(2 * n)
    g.meta["kind"] = "bipartite_regular"
    idx = list(range(n))
    for _ in range(v):
        pi = rng.sample(idx, n)
        for i in range(n):
            g.add_edge(i, n + pi[i])
    return g


# ----------------------------------------------------------- text format


def write_presentation_text(p: Presentation) -> str:
    """Text form: 'm=<int>' then one relator word per line."""
    lines = [f"m={p.generator_count}"]
    lines.extend(word_to_text(w) for w in p.relators)
    return "\n".join(lines) + "\n"


def parse_presentation_text(text: str) -> Presentation:
    lines = text.splitlines()
    header = None
    rel = []
    for ln in lines:
        ln = ln.strip()
        if not ln:
            continue
        if header is None:
            if not ln.startswith("m="):
                raise ValueError("presentation text must start with 'm=<int>'")
            header = int(ln.split("=", 1)[1])
            continue
        rel.append(word_from_text(ln, header))
    if header is None:
        raise ValueError("empty presentation text")
    return Presentation(header, rel)
