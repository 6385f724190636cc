"""Pure Python/numpy fallback kernels.

Same algorithms as the compiled extension `_ckern`: an eigenvalues-only
dense symmetric solver (Householder tridiagonalization followed by
implicit QL with Wilkinson-style shifts, the classic tred/tql pair) and
the two hypergraph matching searches.  The compiled module is preferred
at import time; this one keeps every feature available without a C
toolchain.
"""

from __future__ import annotations

import math
import random

import numpy as np

NAME = "py"

_EPS = float(np.finfo(np.float64).eps)


def sym_tridiag(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a symmetric matrix to tridiagonal form.

    Returns (d, e): the diagonal and the subdiagonal (e[0] is 0, e[i] sits
    between d[i-1] and d[i]).  Eigenvalues only, so the orthogonal factor
    is never accumulated.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    e = np.zeros(n)
    for i in range(n - 1, 0, -1):
        l = i
        if l > 1:
            row = a[i, :l]
            scale = float(np.abs(row).sum())
            if scale == 0.0:
                e[i] = a[i, l - 1]
                continue
            row /= scale
            h = float(row @ row)
            f = row[l - 1]
            g = -math.sqrt(h) if f >= 0.0 else math.sqrt(h)
            e[i] = scale * g
            h -= f * g
            row[l - 1] = f - g
            p = a[:l, :l] @ row / h
            k = float(row @ p) / (2.0 * h)
            q = p - k * row
            a[:l, :l] -= np.outer(q, row) + np.outer(row, q)
        else:
            e[i] = a[i, l - 1]
    return np.diag(a).copy(), e


def tql_eigvals(d: np.ndarray, e: np.ndarray, max_sweeps: int = 50) -> np.ndarray:
    """Implicit QL with shifts on a tridiagonal matrix; ascending eigenvalues."""
    d = np.array(d, dtype=np.float64, copy=True)
    n = d.shape[0]
    if n == 0:
        return d
    e = np.append(np.array(e[1:], dtype=np.float64, copy=True), 0.0)
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise RuntimeError("tridiagonal QL failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    d.sort()
    return d


def sym_eigvals(a: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([float(a[0, 0])])
    d, e = sym_tridiag(a)
    return tql_eigvals(d, e)


# ------------------------------------------------------- matching kernels


def _incidence(xs, P):
    inc = [[] for _ in range(P)]
    for e, x in enumerate(xs):
        inc[x].append(e)
    return inc


def _search_core(xs, ys, zs, inc1, P: int, budget: int, nodes: list[int]):
    """Fail-first DFS for a perfect 3-partite matching over given edge lists.

    Expands the most constrained uncovered first-part vertex (lowest index
    on ties, edges in inc1 order), pruning whenever any uncovered vertex
    in any part has no available edge left.  Returns (status, edges) with
    status "found", "proved_none" or "timeout"; nodes[0] accumulates
    search-tree nodes against the budget.
    """
    E = len(xs)
    cov1 = [False] * P
    cov2 = [False] * P
    cov3 = [False] * P
    chosen: list[int] = []

    def search() -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        if len(chosen) == P:
            return True
        cnt1 = [0] * P
        cnt2 = [0] * P
        cnt3 = [0] * P
        for e in range(E):
            if cov1[xs[e]] or cov2[ys[e]] or cov3[zs[e]]:
                continue
            cnt1[xs[e]] += 1
            cnt2[ys[e]] += 1
            cnt3[zs[e]] += 1
        best = -1
        bestc = E + 1
        for v in range(P):
            if not cov1[v]:
                if cnt1[v] == 0:
                    return False
                if cnt1[v] < bestc:
                    bestc = cnt1[v]
                    best = v
            if not cov2[v] and cnt2[v] == 0:
                return False
            if not cov3[v] and cnt3[v] == 0:
                return False
        for e in inc1[best]:
            if cov1[xs[e]] or cov2[ys[e]] or cov3[zs[e]]:
                continue
            cov1[xs[e]] = cov2[ys[e]] = cov3[zs[e]] = True
            chosen.append(e)
            if search():
                return True
            chosen.pop()
            cov1[xs[e]] = cov2[ys[e]] = cov3[zs[e]] = False
        return False

    try:
        ok = search()
    except _Budget:
        return "timeout", None
    return ("found", list(chosen)) if ok else ("proved_none", None)


class _Budget(Exception):
    pass


def exact_match(xs, ys, zs, P: int, budget: int):
    """Exhaustive backtracking search for a perfect 3-partite matching.

    Edges are tried in input order; see _search_core for the strategy.
    Returns (status, edges) with status "found", "proved_none" or
    "timeout"; budget counts search-tree nodes.
    """
    if P == 0:
        return "found", []
    return _search_core(xs, ys, zs, _incidence(xs, P), P, budget, [0])


def heuristic_match(xs, ys, zs, P: int, restarts: int, seed: int, budget: int = 2_000_000):
    """Randomized greedy plus eviction walk (incomplete).

    Each restart shuffles the edge order, greedily takes disjoint edges,
    then repeatedly lets an uncovered first-part vertex adopt an incident
    edge after evicting the at most two matched edges clashing with it.
    Zero-clash adoptions are taken whenever one exists, then single-clash
    swaps; a run of stuck draws triggers a random two-clash eviction to
    shake the state.  Walk steps count against one shared node budget, so
    a hard instance cannot grind forever.  Returns (status, edges) with
    status "found" or "not_found" - a miss is not a nonexistence proof.
    Deterministic for a fixed seed.
    """
    E = len(xs)
    if P == 0:
        return "found", []
    if any(not inc for inc in _incidence(xs, P)) or len(set(ys)) < P or len(set(zs)) < P:
        return "not_found", None
    rng = random.Random(seed)
    order = list(range(E))
    match1 = [-1] * P
    own2 = [-1] * P
    own3 = [-1] * P
    nodes = 0
    limit = 200 * P

    def adopt(e: int, unc: list[int]) -> None:
        e2 = own2[ys[e]]
        e3 = own3[zs[e]]
        if e3 == e2:
            e3 = -1
        for f in (e2, e3):
            if f != -1:
                match1[xs[f]] = -1
                own2[ys[f]] = -1
                own3[zs[f]] = -1
                unc.append(xs[f])
        match1[xs[e]] = e
        own2[ys[e]] = e
        own3[zs[e]] = e

    for _ in range(restarts):
        if nodes >= budget:
            break
        rng.shuffle(order)
        # per-vertex candidate lists in shuffled order, fresh each restart
        inc1 = [[] for _ in range(P)]
        for e in order:
            inc1[xs[e]].append(e)
        for v in range(P):
            match1[v] = own2[v] = own3[v] = -1
        for e in order:
            if match1[xs[e]] == -1 and own2[ys[e]] == -1 and own3[zs[e]] == -1:
                match1[xs[e]] = own2[ys[e]] = own3[zs[e]] = e
        unc = [v for v in range(P) if match1[v] == -1]
        stuck = 0
        steps = 0
        while unc and steps < limit and nodes < budget:
            steps += 1
            nodes += 1
            hit = -1
            for v in unc:
                for e in inc1[v]:
                    if own2[ys[e]] == -1 and own3[zs[e]] == -1:
                        hit = e
                        break
                if hit >= 0:
                    break
            if hit >= 0:
                unc.remove(xs[hit])
                adopt(hit, unc)
                stuck = 0
                continue
            v = unc[rng.randrange(len(unc))]
            ones = []
            for e in inc1[v]:
                e2 = own2[ys[e]]
                e3 = own3[zs[e]]
                if (e2 != -1) + (e3 != -1 and e3 != e2) == 1:
                    ones.append(e)
            if ones:
                e = ones[rng.randrange(len(ones))]
                unc.remove(v)
                adopt(e, unc)
                stuck = 0
            else:
                stuck += 1
                if stuck >= 4:
                    e = inc1[v][rng.randrange(len(inc1[v]))]
                    unc.remove(v)
                    adopt(e, unc)
                    stuck = 0
        if not unc:
            return "found", list(match1)
    return "not_found", None
