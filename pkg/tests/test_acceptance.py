"""End-to-end acceptance checks, one printed verdict line per requirement.

Every check prints ``<name>: PASS (...)`` or ``<name>: FAIL (...)`` directly
to the terminal (bypassing capture) before asserting, so the verdict lines
survive in any run log.  Two checks probe regimes that the shipped
local-search matcher and sparse uniform graphs are measured not to reach;
they run faithfully and are expected to stay red.  README lists which ones
and points at the analysis.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
import time
from collections import Counter
from fractions import Fraction

import pytest

from randomgroups.embed import (
    build_word_table,
    coset_normal_form,
    expand_factors,
    phi_map,
)
from randomgroups.experiments import SweepConfig, run_sweep, write_csv
from randomgroups.linkgraph import Multigraph, build_link_graph, is_bipartite
from randomgroups.matching import (
    derangement_count,
    derangement_fraction,
    find_perfect_matching,
    sample_hypergraph,
)
from randomgroups.models import (
    Presentation,
    sample_gnm,
    sample_graph,
    sample_triangular,
)
from randomgroups.spectral import (
    decomposition_residual,
    eig_symmetric,
    lambda1,
    laplacian,
    spectral_criterion,
)
from randomgroups.stats import uniformity_pvalue
from randomgroups.words import (
    concat,
    enumerate_words,
    free_reduce,
    is_cyclically_reduced,
    sample_cyclically_reduced,
    sample_positive_triple,
    sample_reduced,
)


@pytest.fixture
def verdict(capsys):
    """Print one live pass/fail line, then assert."""

    def emit(name: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
        assert ok, f"{name}: {detail}"

    return emit


# ---------------------------------------------------------------------------
# exact eigenvalue oracle: integer characteristic polynomial, Sturm bisection
# ---------------------------------------------------------------------------
# Polynomials are coefficient lists of Fractions, lowest power first.  All
# arithmetic is exact, so the only approximation error in an oracle root is
# the final interval width plus one float rounding.

_WIDTH = Fraction(1, 10**10)


def _ptrim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _padd(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _ptrim(out)


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _ptrim(out)


def _pderiv(p):
    return _ptrim([i * c for i, c in enumerate(p)][1:] or [Fraction(0)])


def _pdivmod(p, q):
    q = _ptrim(list(q))
    rem = list(p)
    quot = [Fraction(0)] * max(len(rem) - len(q) + 1, 1)
    while len(rem) >= len(q) and any(rem):
        shift = len(rem) - len(q)
        factor = rem[-1] / q[-1]
        quot[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] -= factor * c
        rem = _ptrim(rem)
        if len(rem) < len(q) or rem == [Fraction(0)]:
            break
    return _ptrim(quot), _ptrim(rem)


def _pgcd(p, q):
    a, b = _ptrim(list(p)), _ptrim(list(q))
    while b != [Fraction(0)]:
        a, b = b, _pdivmod(a, b)[1]
    return [c / a[-1] for c in a]


def _peval(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _charpoly(a: list[list[int]]) -> list[Fraction]:
    """det(xI - A) by permutation expansion, exact integer coefficients."""
    n = len(a)
    acc = [Fraction(0)] * (n + 1)
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            perm[i] > perm[j] for i in range(n) for j in range(i + 1, n)
        )
        term = [Fraction(1)]
        for i, j in enumerate(perm):
            if i == j:
                term = _pmul(term, [Fraction(-a[i][j]), Fraction(1)])
            else:
                term = _pmul(term, [Fraction(-a[i][j])])
        if inversions % 2:
            term = [-c for c in term]
        acc = _padd(acc, term)
    return _ptrim(acc)


def _sturm(p):
    chain = [_ptrim(list(p)), _pderiv(p)]
    while chain[-1] != [Fraction(0)] and len(chain[-1]) > 1:
        rem = _pdivmod(chain[-2], chain[-1])[1]
        chain.append([-c for c in rem])
    if chain[-1] == [Fraction(0)]:
        chain.pop()
    return chain


def _variations(chain, x: Fraction) -> int:
    signs = []
    for q in chain:
        v = _peval(q, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(s != t for s, t in zip(signs, signs[1:]))


def _count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in the half-open interval (lo, hi]."""
    return _variations(chain, lo) - _variations(chain, hi)


def _refine(chain, lo, hi):
    # exactly one root in (lo, hi]; shrink the bracket below _WIDTH
    while hi - lo > _WIDTH:
        mid = (lo + hi) / 2
        if _count_roots(chain, lo, mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _isolate(chain, lo, hi, count):
    if count == 0:
        return []
    if count == 1:
        return [_refine(chain, lo, hi)]
    mid = (lo + hi) / 2
    left = _count_roots(chain, lo, mid)
    return _isolate(chain, lo, mid, left) + _isolate(chain, mid, hi, count - left)


def _exact_sym_eigs(a: list[list[int]]) -> list[float]:
    """Eigenvalues of a symmetric integer matrix, with multiplicity.

    Roots come from Sturm bisection on the square-free part of the exact
    characteristic polynomial; multiplicities from the gcd tower
    p, gcd(p, p'), gcd(gcd, gcd'), ...
    """
    p = _charpoly(a)
    tower = [p]
    while len(tower[-1]) > 1:
        g = _pgcd(tower[-1], _pderiv(tower[-1]))
        if len(g) == 1:
            break
        tower.append(g)
    square_free = _pdivmod(p, _pgcd(p, _pderiv(p)))[0]
    chain = _sturm(square_free)
    bound = Fraction(1) + max(abs(c) for c in square_free)
    total = _count_roots(chain, -bound, bound)
    sub_chains = [_sturm(g) for g in tower[1:]]
    roots: list[float] = []
    for lo, hi in _isolate(chain, -bound, bound, total):
        mult = 1 + sum(_count_roots(c, lo, hi) for c in sub_chains)
        roots.extend([float((lo + hi) / 2)] * mult)
    if len(roots) != len(a):
        raise RuntimeError("oracle lost a root; multiplicity accounting is off")
    return sorted(roots)


def _complete_graph(n: int) -> Multigraph:
    g = Multigraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            g.add_edge(u, v)
    return g


def _cycle_graph(n: int) -> Multigraph:
    g = Multigraph(n)
    for u in range(n):
        g.add_edge(u, (u + 1) % n)
    return g


def _path_graph(n: int) -> Multigraph:
    g = Multigraph(n)
    for u in range(n - 1):
        g.add_edge(u, u + 1)
    return g


def _brute_has_matching(part_size: int, edges) -> bool:
    for combo in itertools.combinations(edges, part_size):
        if all(len({e[i] for e in combo}) == part_size for i in range(3)):
            return True
    return False


# shared between the two sparse-graph clauses so the 20 eigensolves run once
_GNM_TRIALS: dict = {}
# lets the sparse-regime clause fold the dense-regime runtime into its bound
_PROBE_TIMING: dict = {}


def _gnm_trials() -> dict:
    if "lams" not in _GNM_TRIALS:
        lams, ratios = [], []
        t0 = time.perf_counter()
        for t in range(20):
            rng = random.Random(707_000 + t)
            g = sample_gnm(1000, 60_000, rng)
            degs = g.degrees()
            ratios.append(max(degs) / min(degs))
            lam, _ = lambda1(g)
            lams.append(lam)
        _GNM_TRIALS.update(
            lams=lams, ratios=ratios, seconds=time.perf_counter() - t0
        )
    return _GNM_TRIALS


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------


def test_a01_flat_torus_link_is_six_cycle(verdict):
    t0 = time.perf_counter()
    p = Presentation(3, [(1, 2, -3), (2, 1, -3)])
    ok_flag, report = spectral_criterion(p)
    elapsed = time.perf_counter() - t0
    expected = [0.0, 0.5, 0.5, 1.5, 1.5, 2.0]
    spectrum_ok = len(report.eigenvalues) == 6 and all(
        abs(g - e) <= 1e-9 for g, e in zip(report.eigenvalues, expected)
    )
    ok = (
        spectrum_ok
        and abs(report.lambda1 - 0.5) <= 1e-9
        and report.connected
        and ok_flag is False
        and elapsed < 1.0
    )
    verdict(
        "six-cycle link spectrum",
        ok,
        f"eigenvalues match {{0, 1/2, 1/2, 3/2, 3/2, 2}} within 1e-9, "
        f"lambda1={report.lambda1:.10f}, verdict={ok_flag}, {elapsed:.3f}s",
    )


def test_a02_walk_laplacian_decomposition_residual(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(50):
        rng = random.Random(202_000 + trial)
        p = sample_triangular(20 if trial % 2 else 50, 0.45, rng)
        worst = max(worst, decomposition_residual(p))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 10.0
    verdict(
        "per-relator decomposition residual",
        ok,
        f"50 presentations (m in {{20, 50}}, d=0.45), max residual "
        f"{worst:.2e} <= 1e-12, {elapsed:.1f}s",
    )


def test_a03_eigensolver_matches_exact_roots(verdict):
    closed_forms = (
        (_complete_graph(2), [0.0, 2.0]),
        (_complete_graph(4), [0.0, 4 / 3, 4 / 3, 4 / 3]),
        (_cycle_graph(6), [0.0, 0.5, 0.5, 1.5, 1.5, 2.0]),
        (_path_graph(3), [0.0, 1.0, 2.0]),
    )
    closed_ok = True
    for g, expected in closed_forms:
        got = eig_symmetric(laplacian(g))
        closed_ok &= all(abs(a - b) <= 1e-9 for a, b in zip(got, expected))

    rng = random.Random(303)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(500):
        n = rng.randrange(1, 5)
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                a[i][j] = a[j][i] = rng.randrange(-9, 10)
        got = eig_symmetric(a)
        exact = _exact_sym_eigs(a)
        worst = max(worst, max(abs(g - e) for g, e in zip(got, exact)))
    elapsed = time.perf_counter() - t0
    ok = closed_ok and worst <= 1e-8
    verdict(
        "dense eigensolver vs exact roots",
        ok,
        f"closed forms within 1e-9: {closed_ok}; 500 random symmetric "
        f"integer matrices (size <= 4), max |dλ| = {worst:.2e} <= 1e-8, "
        f"{elapsed:.1f}s",
    )


def test_a04_exact_matcher_agrees_with_enumeration(verdict):
    rng = random.Random(404)
    agree = found = 0
    t0 = time.perf_counter()
    for _ in range(200):
        part_size = rng.choice((2, 4))
        m = rng.randrange(0, min(20, part_size**3) + 1)
        h = sample_hypergraph(part_size, m, rng)
        res = find_perfect_matching(h, mode="exact")
        assert res.status in ("found", "proved_none")
        if res.status == "found":
            found += 1
            chosen = res.matching.edges
            assert len(chosen) == part_size
            assert set(chosen) <= set(h.edges)
            assert all(
                len({e[i] for e in chosen}) == part_size for i in range(3)
            )
        agree += (res.status == "found") == _brute_has_matching(
            part_size, h.edges
        )
    elapsed = time.perf_counter() - t0
    ok = agree == 200 and elapsed < 30.0
    verdict(
        "exact matcher vs exhaustive enumeration",
        ok,
        f"{agree}/200 agree (part sizes {{2, 4}}, 0-20 edges, "
        f"{found} with matchings), {elapsed:.1f}s",
    )


def test_a05a_matching_heuristic_at_probe_density(verdict):
    part = 300
    m = math.floor(5 * part * math.log(part))
    assert m == 8555
    hits = 0
    t0 = time.perf_counter()
    for trial in range(50):
        rng = random.Random(505_000 + trial)
        h = sample_hypergraph(part, m, rng)
        res = find_perfect_matching(h, mode="heuristic", seed=trial)
        hits += res.status == "found"
    elapsed = time.perf_counter() - t0
    _PROBE_TIMING["dense_seconds"] = elapsed
    fraction = hits / 50
    verdict(
        "matching probe, dense regime found fraction",
        fraction >= 0.9,
        f"part size 300, 8555 edges: found {hits}/50 = {fraction:.2f}, "
        f"need >= 0.9, {elapsed:.0f}s",
    )


def test_a05b_matching_probe_sparse_regime_and_runtime(verdict):
    part = 300
    hits = 0
    t0 = time.perf_counter()
    for trial in range(50):
        rng = random.Random(515_000 + trial)
        h = sample_hypergraph(part, part // 2, rng)
        res = find_perfect_matching(h, mode="heuristic", seed=trial)
        hits += res.status == "found"
    sparse_elapsed = time.perf_counter() - t0
    total = sparse_elapsed + _PROBE_TIMING.get("dense_seconds", 0.0)
    ok = hits == 0 and total < 300.0
    verdict(
        "matching probe, sparse regime and runtime",
        ok,
        f"part size 300, 150 edges: found {hits}/50 (need 0); both probe "
        f"regimes took {total:.0f}s < 300s",
    )


def test_a06_configuration_graph_gap(verdict):
    lams, reduced_lams = [], []
    t0 = time.perf_counter()
    for trial in range(50):
        rng = random.Random(606_000 + trial)
        g = sample_graph("configuration", rng, n=400, v=50)
        lams.append(lambda1(g)[0])
    for trial in range(50):
        rng = random.Random(616_000 + trial)
        g = sample_graph("configuration_reduced", rng, n=400, v=50)
        reduced_lams.append(lambda1(g)[0])
    elapsed = time.perf_counter() - t0
    fraction = sum(l > 0.5 for l in lams) / 50
    med, med_r = statistics.median(lams), statistics.median(reduced_lams)
    ok = fraction >= 0.95 and abs(med - med_r) <= 0.05
    verdict(
        "configuration graph spectral gap",
        ok,
        f"n=400, v=50: lambda1 > 0.5 in {fraction:.0%} of 50 trials "
        f"(need >= 95%); medians {med:.3f} vs reduced {med_r:.3f}, "
        f"|diff| <= 0.05, {elapsed:.0f}s",
    )


def test_a07a_uniform_graph_gap(verdict):
    trials = _gnm_trials()
    fraction = sum(l > 0.7 for l in trials["lams"]) / 20
    ok = fraction >= 0.95 and trials["seconds"] < 600.0
    verdict(
        "uniform graph spectral gap",
        ok,
        f"n=1000, M=60000: lambda1 > 0.7 in {fraction:.0%} of 20 trials "
        f"(need >= 95%), {trials['seconds']:.0f}s < 600s",
    )


def test_a07b_uniform_graph_degree_ratio(verdict):
    trials = _gnm_trials()
    fraction = sum(r <= 1.5 for r in trials["ratios"]) / 20
    lo, hi = min(trials["ratios"]), max(trials["ratios"])
    verdict(
        "uniform graph degree ratio",
        fraction >= 0.95,
        f"n=1000, M=60000: max/min degree <= 1.5 in {fraction:.0%} of 20 "
        f"trials (need >= 95%); observed ratios {lo:.2f}-{hi:.2f}",
    )


def test_a08_triangular_density_threshold(verdict):
    fractions = {}
    t0 = time.perf_counter()
    for d in (0.45, 0.48, 0.10):
        hits = 0
        for trial in range(40):
            rng = random.Random(808_000 + round(d * 100) * 1000 + trial)
            hits += spectral_criterion(sample_triangular(150, d, rng))[0]
        fractions[d] = hits / 40
    bipartite_hits = 0
    for d in (0.45, 0.48, 0.10):
        for trial in range(40):
            rng = random.Random(818_000 + round(d * 100) * 1000 + trial)
            p = sample_triangular(150, d, rng, positive=True)
            bipartite_hits += is_bipartite(build_link_graph(p))
    elapsed = time.perf_counter() - t0
    ok = (
        fractions[0.45] >= 0.95
        and fractions[0.48] >= 0.95
        and fractions[0.10] <= 0.05
        and bipartite_hits == 120
    )
    verdict(
        "triangular density threshold",
        ok,
        f"m=150, 40 trials per cell: criterion fraction d=0.45: "
        f"{fractions[0.45]:.2f}, d=0.48: {fractions[0.48]:.2f} (need >= "
        f"0.95), d=0.10: {fractions[0.10]:.2f} (need <= 0.05); positive "
        f"links bipartite {bipartite_hits}/120, {elapsed:.0f}s",
    )


def test_a09_derangement_counts(verdict):
    exact_4 = derangement_fraction(4, mode="exact")
    err_9 = abs(derangement_fraction(9, mode="exact") - math.exp(-1))
    recurrence_ok = True
    for n in range(9):
        brute = sum(
            all(p[i] != i for i in range(n))
            for p in itertools.permutations(range(n))
        )
        recurrence_ok &= derangement_count(n) == brute
    ok = exact_4 == 0.375 and err_9 < 1e-3 and recurrence_ok
    verdict(
        "derangement counts",
        ok,
        f"D(4)/4! = {exact_4} (exactly 0.375), |D(9)/9! - 1/e| = "
        f"{err_9:.1e} < 1e-3, recurrence matches enumeration for n <= 8: "
        f"{recurrence_ok}",
    )


def test_a10_embedding_tables_and_normal_forms(verdict):
    t0 = time.perf_counter()
    sizes_ok = True
    for k in (2, 3, 4):
        table = build_word_table(2, 3 * k)
        brute = [
            w
            for w in enumerate_words(2, k, "reduced")
            if w[0] > 0 and w[-1] > 0
        ]
        sizes_ok &= list(table.words) == brute

    image_hits = 0
    for l in (9, 12):
        table = build_word_table(2, l)
        rng = random.Random(1010 + l)
        rels = [
            sample_positive_triple(len(table.words), rng) for _ in range(500)
        ]
        image = phi_map(Presentation(len(table.words), rels), table)
        image_hits += sum(
            len(w) == l and is_cyclically_reduced(w) for w in image.relators
        )

    form_hits = 0
    for l in (9, 12):
        table = build_word_table(2, l)
        rng = random.Random(1020 + l)
        for _ in range(500):
            w = sample_reduced(2, rng.randrange(0, 40), rng)
            prefix, factors = coset_normal_form(w, table)
            rebuilt = free_reduce(concat(prefix, expand_factors(factors, table)))
            form_hits += len(prefix) <= 2 and rebuilt == w
    elapsed = time.perf_counter() - t0
    ok = sizes_ok and image_hits == 1000 and form_hits == 1000 and elapsed < 60
    verdict(
        "embedding tables and coset normal forms",
        ok,
        f"table contents match enumeration (n=2, k in {{2, 3, 4}}): "
        f"{sizes_ok}; substitution images cyclically reduced at full "
        f"length {image_hits}/1000; normal forms rebuild the word with "
        f"prefix <= 2 letters {form_hits}/1000; {elapsed:.0f}s < 60s",
    )


def test_a11_relator_sampler_uniformity(verdict):
    support = enumerate_words(2, 3, "cyclically-reduced")
    assert len(support) == 28
    rng = random.Random(1111)
    counts = Counter(sample_cyclically_reduced(2, 3, rng) for _ in range(28_000))
    assert set(counts) <= set(support)
    pvalue = uniformity_pvalue(counts, 28, 28_000)
    verdict(
        "relator sampler uniformity",
        pvalue >= 0.001,
        f"28000 draws over the 28-word support (m=2, l=3), chi-square "
        f"p-value {pvalue:.3f} >= 0.001",
    )


def test_a12_sweep_rerun_is_byte_identical(verdict):
    cells = (
        {"model": "triangular", "m": 8, "d": 0.45},
        {"model": "triangular", "m": 12, "d": 0.40},
    )
    outputs = []
    for jobs in (1, 5):
        cfg = SweepConfig(
            experiment="criterion",
            cells=cells,
            trials=6,
            master_seed=7,
            jobs=jobs,
        )
        outputs.append(write_csv(run_sweep(cfg), cfg))
    ok = outputs[0] == outputs[1] and outputs[0].count("\n") > 12
    verdict(
        "sweep rerun determinism",
        ok,
        f"criterion sweep (2 cells x 6 trials, master seed 7) with 1 and 5 "
        f"workers: CSV byte-identical, {len(outputs[0].encode())} bytes",
    )
