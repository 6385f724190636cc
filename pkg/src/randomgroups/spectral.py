"""Laplacian spectra of multigraphs and the lambda_1 > 1/2 criterion.

Two Laplacians: the walk Laplacian I - D^-1 A and the symmetric
normalised form I - D^-1/2 A D^-1/2.  They are similar matrices, so they
share the spectrum, which lies in [0, 2]; eigenvalues are computed from
the symmetric form.  lambda_1 denotes the second smallest eigenvalue.

The criterion on a presentation holds when the link graph is connected
and lambda_1 of its Laplacian exceeds 1/2 (strictly, with a small
comparison margin).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .linkgraph import Multigraph, build_link_graph, is_connected, split_link_parts

CRITERION_MARGIN = 1e-8
ZERO_TOL_COEFF = 1e-8
SYMMETRY_TOL = 1e-12


class ZeroDegreeError(ValueError):
    """A vertex has degree zero, so no Laplacian normalisation exists."""


def adjacency_matrix(g: Multigraph) -> np.ndarray:
    """Dense adjacency with multiplicities; a loop adds 2 on the diagonal."""
    n = g.vertex_count
    a = np.zeros((n, n))
    for (u, v), k in g.edges.items():
        if u == v:
            a[u, u] += 2 * k
        else:
            a[u, v] += k
            a[v, u] += k
    return a


def _checked_degrees(g: Multigraph) -> np.ndarray:
    deg = np.array(g.degrees(), dtype=np.float64)
    bad = np.nonzero(deg == 0)[0]
    if bad.size:
        v = int(bad[0])
        name = g.labels[v] if g.labels else str(v)
        raise ZeroDegreeError(f"vertex {name} is isolated (degree 0)")
    return deg


def laplacian(g: Multigraph, kind: str = "normalized") -> np.ndarray:
    """Walk or normalised Laplacian of a multigraph with positive degrees."""
    a = adjacency_matrix(g)
    deg = _checked_degrees(g)
    n = g.vertex_count
    eye = np.eye(n)
    if kind == "walk":
        return eye - a / deg[:, None]
    if kind == "normalized":
        r = 1.0 / np.sqrt(deg)
        return eye - (r[:, None] * a) * r[None, :]
    raise ValueError(f"unknown laplacian kind {kind!r}")


def eig_symmetric(mat: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix via the active backend."""
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("need a square matrix")
    if mat.size and float(np.abs(mat - mat.T).max()) > tol:
        raise ValueError(f"matrix is not symmetric within {tol}")
    return np.asarray(_backend.sym_eigvals(mat))


def lambda1(g: Multigraph) -> tuple[float, bool]:
    """(second smallest Laplacian eigenvalue, connectivity flag).

    Connectivity comes from union-find, not from eigenvalue multiplicity.
    On a disconnected graph the returned value is the smallest eigenvalue
    above the zero tolerance (1e-8 times the dimension), as a diagnostic.
    """
    vals = eig_symmetric(laplacian(g))
    connected = is_connected(g)
    if connected:
        return float(vals[1]), True
    tol = ZERO_TOL_COEFF * g.vertex_count
    above = vals[vals > tol]
    return (float(above[0]) if above.size else 0.0), False


@dataclass
class SpectralReport:
    """Summary of one criterion evaluation on a presentation."""

    vertex_count: int
    edge_count: int
    lambda1: float
    connected: bool
    criterion: bool
    degree_min: int
    degree_max: int
    degree_mean: float
    eigenvalues: list[float] = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> str:
        return json.dumps(self.__dict__)


def spectral_criterion(p) -> tuple[bool, SpectralReport]:
    """Evaluate connected-and-lambda_1 > 1/2 on the link graph of p.

    An isolated vertex makes the criterion false with a reason rather
    than raising.  Construction errors (a relator that is not cyclically
    reduced) propagate.
    """
    g = build_link_graph(p)
    deg = g.degrees()
    if min(deg) == 0:
        v = deg.index(0)
        name = g.labels[v] if g.labels else str(v)
        report = SpectralReport(
            vertex_count=g.vertex_count,
            edge_count=g.edge_count(),
            lambda1=float("nan"),
            connected=False,
            criterion=False,
            degree_min=0,
            degree_max=max(deg),
            degree_mean=sum(deg) / len(deg),
            eigenvalues=[],
            reason=f"isolated vertex {name}",
        )
        return False, report
    vals = eig_symmetric(laplacian(g))
    connected = is_connected(g)
    if connected:
        lam = float(vals[1])
    else:
        tol = ZERO_TOL_COEFF * g.vertex_count
        above = vals[vals > tol]
        lam = float(above[0]) if above.size else 0.0
    holds = connected and lam > 0.5 + CRITERION_MARGIN
    report = SpectralReport(
        vertex_count=g.vertex_count,
        edge_count=g.edge_count(),
        lambda1=lam,
        connected=connected,
        criterion=holds,
        degree_min=min(deg),
        degree_max=max(deg),
        degree_mean=sum(deg) / len(deg),
        eigenvalues=[float(x) for x in vals],
        reason="" if connected else "link graph disconnected",
    )
    return holds, report


def decomposition_residual(p) -> float:
    """Max-norm residual of Delta = sum_i D_i D^-1 Delta_i on L(S).

    Delta is the walk Laplacian of the link graph, Delta_i those of the
    three one-edge-per-relator layers, with rows zeroed at vertices the
    layer leaves isolated.  Exact up to rounding, so the residual should
    sit at machine-precision scale.
    """
    g = build_link_graph(p)
    deg = _checked_degrees(g)
    delta = laplacian(g, "walk")
    n = g.vertex_count
    acc = np.zeros((n, n))
    for part in split_link_parts(p):
        ai = adjacency_matrix(part)
        di = np.array(part.degrees(), dtype=np.float64)
        pos = di > 0
        delta_i = np.zeros((n, n))
        delta_i[pos] = np.eye(n)[pos] - ai[pos] / di[pos, None]
        acc += (di / deg)[:, None] * delta_i
    return float(np.abs(delta - acc).max())


# ------------------------------------------------------- spectral bounds


def bound_friedman(v: int, c: float = 0.0) -> float:
    """Friedman-style gap lower bound for 2v-regular configuration graphs."""
    if v < 1:
        raise ValueError("need v >= 1")
    return 1.0 - (math.sqrt(2 * v - 1) / v + math.log(v) / v + c / v)


def bound_friedman_bipartite(v: int, eps: float = 0.0) -> float:
    """Bipartite v-regular variant of the Friedman bound."""
    if v < 2:
        raise ValueError("need v >= 2")
    return 1.0 - (math.sqrt(2 * v) * (v - 1) ** 0.25 / v + eps / v)


def bound_chung(n: int, p: float, g: float = 0.0) -> float:
    """Chung-style G(n, p) gap bound, natural logs, o(1) terms dropped."""
    if n < 2 or not 0 < p <= 1:
        raise ValueError("need n >= 2 and p in (0, 1]")
    np_ = n * p
    return 1.0 - 4.0 / math.sqrt(np_) - g * math.log(n) ** 2 / np_


def bound(kind: str, **params) -> float:
    """Dispatch to one of the closed-form bounds by name."""
    if kind == "friedman":
        return bound_friedman(params["v"], params.get("c", 0.0))
    if kind == "friedman_bipartite":
        return bound_friedman_bipartite(params["v"], params.get("eps", 0.0))
    if kind == "chung":
        return bound_chung(params["n"], params["p"], params.get("g", 0.0))
    raise ValueError(f"unknown bound kind {kind!r}")
