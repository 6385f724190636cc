"""Multigraphs and the link graph of a length-3 presentation.

The link graph of a presentation on m generators has 2m vertices: the
symbol s_i sits at index i-1 and its inverse at index m+i-1.  Every
cyclically reduced relator s_x s_y s_z contributes the three edges
(s_x, s_y^-1), (s_y, s_z^-1), (s_z, s_x^-1), with multiplicities
accumulating across relators.  A loop contributes 2 to its vertex degree
and 2 to the adjacency diagonal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .words import is_cyclically_reduced, letter_to_text, word_to_text

if TYPE_CHECKING:  # pragma: no cover
    from .models import Presentation


@dataclass
class Multigraph:
    """Undirected multigraph on vertices 0..vertex_count-1.

    edges maps a normalised pair (u, v) with u <= v to its multiplicity;
    (u, u) is a loop.  labels, when set, name the vertices (used for
    link graphs, where they are symbol names).
    """

    vertex_count: int
    edges: Counter = field(default_factory=Counter)
    labels: list[str] | None = None
    meta: dict = field(default_factory=dict)

    def add_edge(self, u: int, v: int, mult: int = 1) -> None:
        if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
            raise ValueError(f"edge ({u}, {v}) outside vertex range")
        if u > v:
            u, v = v, u
        self.edges[(u, v)] += mult

    def edge_count(self) -> int:
        """Total number of edges counted with multiplicity."""
        return sum(self.edges.values())

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for (u, v), k in self.edges.items():
            deg[u] += k
            deg[v] += k  # a loop has u == v and so adds 2k in total
        return deg

    def copy_empty(self) -> "Multigraph":
        return Multigraph(self.vertex_count, Counter(), self.labels, dict(self.meta))


def symbol_vertex(s: int, m: int) -> int:
    """Vertex index of the symbol s (letter encoding) among 2m vertices."""
    if s > 0:
        return s - 1
    return m + (-s) - 1


def vertex_symbol(v: int, m: int) -> int:
    return v + 1 if v < m else -(v - m + 1)


def symbol_labels(m: int) -> list[str]:
    return [letter_to_text(vertex_symbol(v, m)) for v in range(2 * m)]


def _relator_edges(w, m: int) -> list[tuple[int, int]]:
    x, y, z = w
    return [
        (symbol_vertex(x, m), symbol_vertex(-y, m)),
        (symbol_vertex(y, m), symbol_vertex(-z, m)),
        (symbol_vertex(z, m), symbol_vertex(-x, m)),
    ]


def build_link_graph(p: "Presentation") -> Multigraph:
    """Link graph L(S) of a presentation.

    Relators whose length is not 3 are ignored but counted in
    meta["ignored_relators"].  A length-3 relator that is not cyclically
    reduced would create a loop and is an error.
    """
    m = p.generator_count
    g = Multigraph(2 * m, labels=symbol_labels(m))
    ignored = 0
    for w in p.relators:
        if len(w) != 3:
            ignored += 1
            continue
        if not is_cyclically_reduced(w):
            raise ValueError(f"relator {word_to_text(w)!r} is not cyclically reduced")
        for u, v in _relator_edges(w, m):
            g.add_edge(u, v)
    g.meta["ignored_relators"] = ignored
    return g


def split_link_parts(p: "Presentation") -> tuple[Multigraph, Multigraph, Multigraph]:
    """The three one-edge-per-relator layers L_1, L_2, L_3 of L(S)."""
    m = p.generator_count
    parts = tuple(Multigraph(2 * m, labels=symbol_labels(m)) for _ in range(3))
    ignored = 0
    for w in p.relators:
        if len(w) != 3:
            ignored += 1
            continue
        if not is_cyclically_reduced(w):
            raise ValueError(f"relator {word_to_text(w)!r} is not cyclically reduced")
        for part, (u, v) in zip(parts, _relator_edges(w, m)):
            part.add_edge(u, v)
    for part in parts:
        part.meta["ignored_relators"] = ignored
    return parts


def is_connected(g: Multigraph) -> bool:
    """Union-find connectivity; vacuously true on 0 or 1 vertices."""
    n = g.vertex_count
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = n
    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps <= 1


def is_bipartite(g: Multigraph) -> bool:
    """2-colourability by BFS; loops make a graph non-bipartite."""
    colour = [-1] * g.vertex_count
    adj: dict[int, list[int]] = {v: [] for v in range(g.vertex_count)}
    for u, v in g.edges:
        if u == v:
            return False
        adj[u].append(v)
        adj[v].append(u)
    for start in range(g.vertex_count):
        if colour[start] != -1:
            continue
        colour[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if colour[v] == -1:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return False
    return True


def collapse_duplicates(g: Multigraph) -> tuple[Multigraph, Multigraph]:
    """Split g into (simple, removed).

    simple keeps one copy of every distinct edge, removed keeps the
    surplus multiplicity, so simple + removed = g edge by edge.
    """
    simple = g.copy_empty()
    removed = g.copy_empty()
    for (u, v), k in g.edges.items():
        simple.edges[(u, v)] = 1
        if k > 1:
            removed.edges[(u, v)] = k - 1
    return simple, removed


def write_graph_text(g: Multigraph) -> str:
    """Plain text form: 'vertices=<n>' then one 'u v' line per edge copy."""
    lines = [f"vertices={g.vertex_count}"]
    for (u, v) in sorted(g.edges):
        lines.extend([f"{u} {v}"] * g.edges[(u, v)])
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> Multigraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("vertices="):
        raise ValueError("graph text must start with 'vertices=<int>'")
    try:
        n = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise ValueError("bad vertex count in graph header") from None
    g = Multigraph(n)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        g.add_edge(int(parts[0]), int(parts[1]))
    return g
