"""3-partite hypergraphs of length-3 relators and perfect matchings.

A relator s_x s_y s_z is a hyperedge (x, y, z) across three parts, each a
copy of the 2n symbols.  A perfect matching (one edge per first-part
symbol, all parts covered exactly once) yields a permutation pair
(pi1(s) = y, pi2(s) = z), inverting the permutation-model construction.

An edge is reduced when its word s_x s_y s_z is cyclically reduced.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import _backend
from .linkgraph import symbol_vertex, vertex_symbol
from .models import PermutationPairSet, Presentation, _pair_is_reduced
from .words import (
    REJECTION_LIMIT,
    SamplingBudgetError,
    is_cyclically_reduced,
    letter_from_text,
    letter_to_text,
)

EXACT_PART_CAP = 64
DEFAULT_BUDGET = 2_000_000
DEFAULT_RESTARTS = 200

Triple = tuple[int, int, int]


@dataclass
class RelatorHypergraph:
    """Deduplicated set of symbol triples over parts of size 2n."""

    n: int
    edges: list[Triple] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen = set()
        out = []
        for t in self.edges:
            if len(t) != 3:
                raise ValueError(f"hyperedge {t!r} is not a triple")
            for s in t:
                if s == 0 or abs(s) > self.n:
                    raise ValueError(f"symbol {s} outside the 2n alphabet")
            if t not in seen:
                seen.add(t)
                out.append(tuple(t))
        self.edges = out

    @property
    def part_size(self) -> int:
        return 2 * self.n


def is_reduced_edge(t: Triple) -> bool:
    """True when the corresponding word is cyclically reduced."""
    return is_cyclically_reduced(t)


def build_hypergraph(p: Presentation) -> RelatorHypergraph:
    """Hypergraph of the length-3 relators of p (others are ignored)."""
    edges = [tuple(w) for w in p.relators if len(w) == 3]
    return RelatorHypergraph(p.generator_count, edges)


def sample_hypergraph(
    part_size: int,
    M: int,
    rng: random.Random,
    reduced: bool = False,
    max_attempts: int = REJECTION_LIMIT,
) -> RelatorHypergraph:
    """Uniform hypergraph with M distinct triples over parts of part_size.

    part_size is even (the parts are copies of the 2n symbols).  With
    reduced=True only cyclically reduced triples are drawn.
    """
    if part_size < 2 or part_size % 2:
        raise ValueError("part_size must be even and >= 2")
    n = part_size // 2
    symbols = [vertex_symbol(i, n) for i in range(2 * n)]
    total = part_size**3
    if M < 0 or M > total:
        raise ValueError(f"M must lie in [0, {total}]")
    chosen: set[Triple] = set()
    stale = 0
    while len(chosen) < M:
        t = (rng.choice(symbols), rng.choice(symbols), rng.choice(symbols))
        if reduced and not is_reduced_edge(t):
            continue
        if t in chosen:
            stale += 1
            if stale > max_attempts:
                raise SamplingBudgetError("hypergraph sampling stalled on duplicates")
            continue
        stale = 0
        chosen.add(t)
    return RelatorHypergraph(n, sorted(chosen))


@dataclass
class Matching:
    """A set of pairwise disjoint hyperedges covering every part."""

    n: int
    edges: list[Triple]
    reduced: bool = False


@dataclass
class MatchResult:
    """Search outcome: found / not_found / proved_none / timeout.

    not_found is a heuristic giving up, proved_none an exhaustive
    certificate, timeout an exact search that exhausted its node budget.
    """

    status: str
    matching: Matching | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def _part_arrays(h: RelatorHypergraph):
    n = h.n
    xs = [symbol_vertex(t[0], n) for t in h.edges]
    ys = [symbol_vertex(t[1], n) for t in h.edges]
    zs = [symbol_vertex(t[2], n) for t in h.edges]
    return xs, ys, zs


def find_perfect_matching(
    h: RelatorHypergraph,
    mode: str = "heuristic",
    budget: int = DEFAULT_BUDGET,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    part_cap: int = EXACT_PART_CAP,
) -> MatchResult:
    """Search for a perfect matching of h.

    mode "exact" runs backtracking (most-constrained-vertex order, sound
    pruning) and can prove none exists; it refuses part sizes above
    part_cap and reports "timeout" when the node budget runs out.  mode
    "heuristic" restarts a randomized greedy matching followed by a local
    augmentation walk (adopt an incident edge for an uncovered vertex,
    evicting up to two clashing matched edges), sharing the node budget
    across restarts, and reports "found" or "not_found" (never a
    nonexistence claim).
    """
    xs, ys, zs = _part_arrays(h)
    P = h.part_size
    if mode == "exact":
        if P > part_cap:
            raise ValueError(f"part size {P} above exact-mode cap {part_cap}")
        status, sel = _backend.exact_match(xs, ys, zs, P, budget)
    elif mode == "heuristic":
        status, sel = _backend.heuristic_match(xs, ys, zs, P, restarts, seed, budget)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if status != "found":
        return MatchResult(status)
    edges = sorted(h.edges[e] for e in sel)
    reduced = all(is_reduced_edge(t) for t in edges)
    return MatchResult("found", Matching(h.n, edges, reduced))


def matching_to_permutations(mt: Matching) -> PermutationPairSet:
    """Invert a perfect matching into one permutation pair.

    pi1 sends s to y and pi2 sends s to z for each matched edge (s, y, z);
    both images must be bijections over the 2n symbols.
    """
    n = mt.n
    pi1 = [-1] * (2 * n)
    pi2 = [-1] * (2 * n)
    for s, y, z in mt.edges:
        i = symbol_vertex(s, n)
        if pi1[i] != -1:
            raise ValueError(f"symbol {letter_to_text(s)} matched twice")
        pi1[i] = symbol_vertex(y, n)
        pi2[i] = symbol_vertex(z, n)
    if -1 in pi1 or sorted(pi1) != list(range(2 * n)) or sorted(pi2) != list(range(2 * n)):
        raise ValueError("matching does not induce a permutation pair")
    pi1_t, pi2_t = tuple(pi1), tuple(pi2)
    return PermutationPairSet(n, [(pi1_t, pi2_t)], _pair_is_reduced(pi1_t, pi2_t, n))


def extract_permutation_subsets(
    p: Presentation,
    v: int,
    mode: str = "heuristic",
    budget: int = DEFAULT_BUDGET,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> tuple[str, PermutationPairSet | None]:
    """Recover v permutation pairs from disjoint relator subsets of p.

    Relators are split round robin by index (relator j goes to part
    j mod v); each part must contain a perfect matching on its own.
    Returns (status, pairs), with pairs set only when every part found one.
    """
    if v < 1:
        raise ValueError("need v >= 1")
    n = p.generator_count
    triples = [tuple(w) for w in p.relators if len(w) == 3]
    if len(triples) < 2 * n * v:
        return "not_found", None
    parts: list[list[Triple]] = [[] for _ in range(v)]
    for j, t in enumerate(triples):
        parts[j % v].append(t)
    pairs = []
    reduced_all = True
    for i, part in enumerate(parts):
        h = RelatorHypergraph(n, part)
        res = find_perfect_matching(
            h, mode=mode, budget=budget, restarts=restarts, seed=seed + i
        )
        if not res.found:
            return res.status, None
        mt = res.matching
        ps = matching_to_permutations(mt)
        pairs.append(ps.pairs[0])
        reduced_all = reduced_all and ps.reduced
    return "found", PermutationPairSet(n, pairs, reduced_all)


# ------------------------------------------------------------ statistics


def derangement_count(n: int) -> int:
    """D(n) by the recurrence D(n) = (n-1)(D(n-1) + D(n-2))."""
    if n < 0:
        raise ValueError("need n >= 0")
    if n == 0:
        return 1
    prev2, prev1 = 1, 0
    for i in range(2, n + 1):
        prev2, prev1 = prev1, (i - 1) * (prev1 + prev2)
    return prev1 if n >= 1 else prev2


def derangement_fraction(
    n: int,
    mode: str = "exact",
    trials: int = 100_000,
    rng: random.Random | None = None,
    max_exact: int = 12,
) -> float:
    """Fraction of permutations of n with no fixed point; tends to 1/e.

    mode "exact" (n capped at max_exact) divides D(n) by n!; mode
    "sample" estimates by drawing random permutations.
    """
    if n < 0:
        raise ValueError("need n >= 0")
    if mode == "exact":
        if n > max_exact:
            raise ValueError(f"exact mode capped at n = {max_exact}")
        return derangement_count(n) / math.factorial(n)
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng or random.Random(0)
    idx = list(range(n))
    hits = 0
    for _ in range(trials):
        pi = rng.sample(idx, n)
        if all(pi[i] != i for i in range(n)):
            hits += 1
    return hits / trials


def two_forbidden_fraction(
    n: int,
    forbidden: list[tuple[int, int]] | None = None,
    mode: str = "exact",
    trials: int = 100_000,
    rng: random.Random | None = None,
    max_exact: int = 12,
) -> float:
    """Fraction of permutations avoiding two forbidden images per position.

    forbidden[i] lists the two distinct values pi(i) must avoid; the
    default is the menage-style pattern (i, i+1 mod n).  Tends to 1/e^2.
    Exact mode counts by bitmask dynamic programming over columns.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if forbidden is None:
        forbidden = [(i, (i + 1) % n) for i in range(n)]
    if len(forbidden) != n:
        raise ValueError("need one forbidden pair per position")
    for a, b in forbidden:
        if a == b or not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"bad forbidden pair {(a, b)!r}")
    if mode == "exact":
        if n > max_exact:
            raise ValueError(f"exact mode capped at n = {max_exact}")
        full = (1 << n) - 1
        counts = [0] * (full + 1)
        counts[0] = 1
        for mask in range(full + 1):
            c = counts[mask]
            if c == 0:
                continue
            row = bin(mask).count("1")
            if row == n:
                continue
            fa, fb = forbidden[row]
            for col in range(n):
                if mask & (1 << col) or col == fa or col == fb:
                    continue
                counts[mask | (1 << col)] += c
        return counts[full] / math.factorial(n)
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng or random.Random(0)
    idx = list(range(n))
    hits = 0
    for _ in range(trials):
        pi = rng.sample(idx, n)
        if all(pi[i] != a and pi[i] != b for i, (a, b) in enumerate(forbidden)):
            hits += 1
    return hits / trials


# ----------------------------------------------------------- text format


def write_hypergraph_text(h: RelatorHypergraph) -> str:
    """Text form: 'parts=<2n>' then one 'x y z' symbol line per edge."""
    lines = [f"parts={h.part_size}"]
    for t in h.edges:
        lines.append(" ".join(letter_to_text(s) for s in t))
    return "\n".join(lines) + "\n"


def parse_hypergraph_text(text: str) -> RelatorHypergraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("parts="):
        raise ValueError("hypergraph text must start with 'parts=<int>'")
    part_size = int(lines[0].split("=", 1)[1])
    if part_size < 2 or part_size % 2:
        raise ValueError("part size must be even and >= 2")
    edges = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 3:
            raise ValueError(f"bad hyperedge line {ln!r}")
        edges.append(tuple(letter_from_text(tok) for tok in toks))
    return RelatorHypergraph(part_size // 2, edges)
