# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: symmetric eigensolver and hypergraph matching.

Mirrors randomgroups._pykernels: the same tred/tql eigensolver pair and
the same matching searches, with identical traversal order and an
identical RNG call sequence, so the two backends return the same
results (eigenvalues up to rounding, matchings exactly).
"""

import random

import numpy as np

from libc.math cimport copysign, fabs, hypot, sqrt

NAME = "c"

cdef double _EPS = float(np.finfo(np.float64).eps)


# ------------------------------------------------------------ eigensolver


cdef void _tridiag(double[:, ::1] a, double[::1] d, double[::1] e):
    # Householder reduction working on the lower triangle; e[1:] gets the
    # subdiagonal, e[:i] is scratch inside step i
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double scale, h, f, g, hh
    for i in range(n - 1, 0, -1):
        l = i
        if l > 1:
            scale = 0.0
            for k in range(l):
                scale += fabs(a[i, k])
            if scale == 0.0:
                e[i] = a[i, l - 1]
                continue
            h = 0.0
            for k in range(l):
                a[i, k] /= scale
                h += a[i, k] * a[i, k]
            f = a[i, l - 1]
            g = -sqrt(h) if f >= 0.0 else sqrt(h)
            e[i] = scale * g
            h -= f * g
            a[i, l - 1] = f - g
            f = 0.0
            for j in range(l):
                g = 0.0
                for k in range(j + 1):
                    g += a[j, k] * a[i, k]
                for k in range(j + 1, l):
                    g += a[k, j] * a[i, k]
                e[j] = g / h
                f += e[j] * a[i, j]
            hh = f / (h + h)
            for j in range(l):
                f = a[i, j]
                g = e[j] - hh * f
                e[j] = g
                for k in range(j + 1):
                    a[j, k] -= f * e[k] + g * a[i, k]
        else:
            e[i] = a[i, l - 1]
    for i in range(n):
        d[i] = a[i, i]


cdef int _tql(double[::1] d, double[::1] e, int max_sweeps) except -1:
    # implicit QL with shifts; e is already shifted down one (e[n-1] == 0)
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i
    cdef int sweeps, underflow
    cdef double dd, g, r, s, c, p, f, b
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise RuntimeError("tridiagonal QL failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = 0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = 1
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
    return 0


def sym_eigvals(a):
    """All eigenvalues of a symmetric matrix, ascending."""
    arr = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t n = arr.shape[0]
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([float(arr[0, 0])])
    d_arr = np.zeros(n, dtype=np.float64)
    e_arr = np.zeros(n, dtype=np.float64)
    cdef double[:, ::1] av = arr
    cdef double[::1] dv = d_arr
    cdef double[::1] ev = e_arr
    _tridiag(av, dv, ev)
    e_shift = np.empty(n, dtype=np.float64)
    e_shift[: n - 1] = e_arr[1:]
    e_shift[n - 1] = 0.0
    cdef double[::1] e2v = e_shift
    _tql(dv, e2v, 50)
    d_arr.sort()
    return d_arr


# ------------------------------------------------------- matching kernels


cdef int _exact_search(
    int[::1] xs,
    int[::1] ys,
    int[::1] zs,
    int[::1] inc_start,
    int[::1] inc_edges,
    unsigned char[::1] cov1,
    unsigned char[::1] cov2,
    unsigned char[::1] cov3,
    int[::1] chosen,
    Py_ssize_t depth,
    Py_ssize_t P,
    Py_ssize_t E,
    long long budget,
    long long* nodes,
    int[::1] cnt1,
    int[::1] cnt2,
    int[::1] cnt3,
) noexcept:
    # 1 found, 0 exhausted, 2 budget hit; cnt arrays are shared scratch,
    # only read before the recursive calls
    cdef Py_ssize_t v, e, idx
    cdef Py_ssize_t best
    cdef int bestc, rc
    nodes[0] += 1
    if nodes[0] > budget:
        return 2
    if depth == P:
        return 1
    for v in range(P):
        cnt1[v] = 0
        cnt2[v] = 0
        cnt3[v] = 0
    for e in range(E):
        if cov1[xs[e]] or cov2[ys[e]] or cov3[zs[e]]:
            continue
        cnt1[xs[e]] += 1
        cnt2[ys[e]] += 1
        cnt3[zs[e]] += 1
    best = -1
    bestc = <int> E + 1
    for v in range(P):
        if not cov1[v]:
            if cnt1[v] == 0:
                return 0
            if cnt1[v] < bestc:
                bestc = cnt1[v]
                best = v
        if not cov2[v] and cnt2[v] == 0:
            return 0
        if not cov3[v] and cnt3[v] == 0:
            return 0
    for idx in range(inc_start[best], inc_start[best + 1]):
        e = inc_edges[idx]
        if cov1[xs[e]] or cov2[ys[e]] or cov3[zs[e]]:
            continue
        cov1[xs[e]] = 1
        cov2[ys[e]] = 1
        cov3[zs[e]] = 1
        chosen[depth] = <int> e
        rc = _exact_search(
            xs, ys, zs, inc_start, inc_edges, cov1, cov2, cov3,
            chosen, depth + 1, P, E, budget, nodes, cnt1, cnt2, cnt3,
        )
        if rc != 0:
            return rc
        cov1[xs[e]] = 0
        cov2[ys[e]] = 0
        cov3[zs[e]] = 0
    return 0


def _csr_incidence(xs_a, Py_ssize_t P, Py_ssize_t E):
    counts = np.zeros(P + 1, dtype=np.int32)
    for e in range(E):
        counts[xs_a[e] + 1] += 1
    start = np.cumsum(counts, dtype=np.int32)
    fill = start[:P].copy()
    edges = np.zeros(E, dtype=np.int32)
    for e in range(E):
        edges[fill[xs_a[e]]] = e
        fill[xs_a[e]] += 1
    return start, edges


def exact_match(xs, ys, zs, Py_ssize_t P, long long budget):
    """Exhaustive backtracking search; see the fallback kernel docstring."""
    cdef Py_ssize_t E = len(xs)
    if P == 0:
        return "found", []
    xs_a = np.asarray(xs, dtype=np.int32)
    ys_a = np.asarray(ys, dtype=np.int32)
    zs_a = np.asarray(zs, dtype=np.int32)
    inc_start, inc_edges = _csr_incidence(xs_a, P, E)
    cov1 = np.zeros(P, dtype=np.uint8)
    cov2 = np.zeros(P, dtype=np.uint8)
    cov3 = np.zeros(P, dtype=np.uint8)
    chosen = np.zeros(P, dtype=np.int32)
    cnt1 = np.zeros(P, dtype=np.int32)
    cnt2 = np.zeros(P, dtype=np.int32)
    cnt3 = np.zeros(P, dtype=np.int32)
    cdef long long nodes = 0
    cdef int rc = _exact_search(
        xs_a, ys_a, zs_a, inc_start, inc_edges,
        cov1, cov2, cov3, chosen, 0, P, E, budget, &nodes,
        cnt1, cnt2, cnt3,
    )
    if rc == 2:
        return "timeout", None
    if rc == 0:
        return "proved_none", None
    return "found", [int(chosen[v]) for v in range(P)]


def heuristic_match(xs, ys, zs, Py_ssize_t P, int restarts, seed, long long budget=2_000_000):
    """Greedy plus eviction walk; same RNG sequence as the fallback."""
    cdef Py_ssize_t E = len(xs)
    if P == 0:
        return "found", []
    xs_a = np.asarray(xs, dtype=np.int32)
    ys_a = np.asarray(ys, dtype=np.int32)
    zs_a = np.asarray(zs, dtype=np.int32)
    inc_start_a, _ = _csr_incidence(xs_a, P, E)
    if (np.diff(inc_start_a) == 0).any() or len(set(ys)) < P or len(set(zs)) < P:
        return "not_found", None
    fill_a = np.empty(P, dtype=np.int32)
    inc_edges_a = np.empty(E, dtype=np.int32)
    order_a = np.empty(E, dtype=np.int32)
    match1_a = np.empty(P, dtype=np.int32)
    own2_a = np.empty(P, dtype=np.int32)
    own3_a = np.empty(P, dtype=np.int32)
    unc_a = np.empty(P, dtype=np.int32)
    ones_a = np.empty(E, dtype=np.int32)
    cdef int[::1] xv = xs_a
    cdef int[::1] yv = ys_a
    cdef int[::1] zv = zs_a
    cdef int[::1] inc_start = inc_start_a
    cdef int[::1] inc_edges = inc_edges_a
    cdef int[::1] fill = fill_a
    cdef int[::1] order_v = order_a
    cdef int[::1] match1 = match1_a
    cdef int[::1] own2 = own2_a
    cdef int[::1] own3 = own3_a
    cdef int[::1] unc = unc_a
    cdef int[::1] ones = ones_a
    rng = random.Random(seed)
    rand_below = rng.randrange
    order = list(range(E))
    cdef long long nodes = 0, limit = 200 * P, steps
    cdef Py_ssize_t i, j, v, nunc, nones, stuck
    cdef int e, hit, e2, e3, f, clashes
    for _ in range(restarts):
        if nodes >= budget:
            break
        rng.shuffle(order)
        for i in range(E):
            order_v[i] = order[i]
        # rebuild the per-vertex candidate lists in shuffled order
        for v in range(P):
            fill[v] = inc_start[v]
            match1[v] = -1
            own2[v] = -1
            own3[v] = -1
        for i in range(E):
            e = order_v[i]
            inc_edges[fill[xv[e]]] = e
            fill[xv[e]] += 1
        for i in range(E):
            e = order_v[i]
            if match1[xv[e]] == -1 and own2[yv[e]] == -1 and own3[zv[e]] == -1:
                match1[xv[e]] = e
                own2[yv[e]] = e
                own3[zv[e]] = e
        nunc = 0
        for v in range(P):
            if match1[v] == -1:
                unc[nunc] = <int> v
                nunc += 1
        stuck = 0
        steps = 0
        while nunc > 0 and steps < limit and nodes < budget:
            steps += 1
            nodes += 1
            hit = -1
            for i in range(nunc):
                v = unc[i]
                for j in range(inc_start[v], inc_start[v + 1]):
                    e = inc_edges[j]
                    if own2[yv[e]] == -1 and own3[zv[e]] == -1:
                        hit = e
                        break
                if hit >= 0:
                    break
            if hit >= 0:
                _unc_remove(unc, &nunc, xv[hit])
                _adopt(hit, xv, yv, zv, match1, own2, own3, unc, &nunc)
                stuck = 0
                continue
            v = unc[<Py_ssize_t> rand_below(nunc)]
            nones = 0
            for j in range(inc_start[v], inc_start[v + 1]):
                e = inc_edges[j]
                e2 = own2[yv[e]]
                e3 = own3[zv[e]]
                clashes = 0
                if e2 != -1:
                    clashes += 1
                if e3 != -1 and e3 != e2:
                    clashes += 1
                if clashes == 1:
                    ones[nones] = e
                    nones += 1
            if nones > 0:
                e = ones[<Py_ssize_t> rand_below(nones)]
                _unc_remove(unc, &nunc, <int> v)
                _adopt(e, xv, yv, zv, match1, own2, own3, unc, &nunc)
                stuck = 0
            else:
                stuck += 1
                if stuck >= 4:
                    j = inc_start[v] + <Py_ssize_t> rand_below(inc_start[v + 1] - inc_start[v])
                    e = inc_edges[j]
                    _unc_remove(unc, &nunc, <int> v)
                    _adopt(e, xv, yv, zv, match1, own2, own3, unc, &nunc)
                    stuck = 0
        if nunc == 0:
            return "found", [int(match1[v]) for v in range(P)]
    return "not_found", None


cdef inline void _unc_remove(int[::1] unc, Py_ssize_t* nunc, int v) noexcept:
    # mirror list.remove: drop the first occurrence, shifting the tail left
    cdef Py_ssize_t i, j
    for i in range(nunc[0]):
        if unc[i] == v:
            for j in range(i, nunc[0] - 1):
                unc[j] = unc[j + 1]
            nunc[0] -= 1
            return


cdef inline void _adopt(
    int e,
    int[::1] xv, int[::1] yv, int[::1] zv,
    int[::1] match1, int[::1] own2, int[::1] own3,
    int[::1] unc, Py_ssize_t* nunc,
) noexcept:
    # evicted owners rejoin the uncovered pool in (y-owner, z-owner) order
    cdef int e2 = own2[yv[e]]
    cdef int e3 = own3[zv[e]]
    cdef int f
    cdef int k
    if e3 == e2:
        e3 = -1
    for k in range(2):
        f = e2 if k == 0 else e3
        if f != -1:
            match1[xv[f]] = -1
            own2[yv[f]] = -1
            own3[zv[f]] = -1
            unc[nunc[0]] = xv[f]
            nunc[0] += 1
    match1[xv[e]] = e
    own2[yv[e]] = e
    own3[zv[e]] = e
