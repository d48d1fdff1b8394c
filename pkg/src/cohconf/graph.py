"""Edge-coloured graphs and their adjacency operators.

Vertices are dense 0-based indices and colours run from 1 to ``n``.  A pair
of vertices carries at most one edge, hence at most one colour.
"""

from __future__ import annotations

from collections import deque
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .linalg import RationalMatrix


class GraphError(ValueError):
    pass


class EdgeColouredGraph:
    """Finite simple graph whose edges carry colours ``1..n``."""

    def __init__(self, vertex_count: int, colour_count: int, edges: Iterable[tuple[int, int, int]]):
        if vertex_count < 1:
            raise GraphError("a graph needs at least one vertex")
        self.vertex_count = vertex_count
        self.colour_count = colour_count
        colour_of: dict[tuple[int, int], int] = {}
        for u, v, c in edges:
            u, v, c = int(u), int(v), int(c)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge ({u}, {v}) has a vertex out of range")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not 1 <= c <= colour_count:
                raise GraphError(f"colour {c} out of range 1..{colour_count}")
            key = (min(u, v), max(u, v))
            if key in colour_of and colour_of[key] != c:
                raise GraphError(f"vertex pair {key} carries colours {colour_of[key]} and {c}")
            colour_of[key] = c
        used = set(colour_of.values())
        missing = [c for c in range(1, colour_count + 1) if c not in used]
        if missing:
            raise GraphError(f"colours {missing} appear on no edge")
        self._colour_of = colour_of
        self.edges = tuple(sorted((u, v, c) for (u, v), c in colour_of.items()))
        self._nbrs = [[[] for _ in range(vertex_count)] for _ in range(colour_count + 1)]
        for (u, v), c in sorted(colour_of.items()):
            self._nbrs[c][u].append(v)
            self._nbrs[c][v].append(u)
        self._ops: dict[int, RationalMatrix] = {}

    def __repr__(self) -> str:
        return f"EdgeColouredGraph(vertices={self.vertex_count}, colours={self.colour_count}, edges={len(self.edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeColouredGraph):
            return NotImplemented
        return (self.vertex_count, self.colour_count, self.edges) == (
            other.vertex_count, other.colour_count, other.edges)

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.colour_count, self.edges))

    @property
    def colours(self) -> range:
        return range(1, self.colour_count + 1)

    def colour(self, u: int, v: int) -> int:
        """Colour of the edge ``{u, v}``, 0 if there is none."""
        return self._colour_of.get((min(u, v), max(u, v)), 0)

    def neighbours(self, v: int, c: int | None = None) -> list[int]:
        if c is None:
            return sorted(w for cc in self.colours for w in self._nbrs[cc][v])
        self._check_colour(c)
        return list(self._nbrs[c][v])

    def _check_colour(self, c: int) -> None:
        if not 1 <= c <= self.colour_count:
            raise GraphError(f"colour {c} out of range 1..{self.colour_count}")

    def is_connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.vertex_count

    def monochrome(self) -> "EdgeColouredGraph":
        """The same graph with every edge recoloured 1."""
        return EdgeColouredGraph(self.vertex_count, 1, ((u, v, 1) for u, v, _ in self.edges))


def adjacency_operator(g: EdgeColouredGraph, c: int) -> RationalMatrix:
    g._check_colour(c)
    if c not in g._ops:
        a = np.zeros((g.vertex_count, g.vertex_count), dtype=np.int64)
        for u, v, cc in g.edges:
            if cc == c:
                a[u, v] = a[v, u] = 1
        g._ops[c] = RationalMatrix(a)
    return g._ops[c]


def adjacency_operators(g: EdgeColouredGraph) -> list[RationalMatrix]:
    return [adjacency_operator(g, c) for c in g.colours]


def is_chamber_system(g: EdgeColouredGraph) -> bool:
    """True iff every colour class is a disjoint union of complete graphs."""
    for c in g.colours:
        for v in range(g.vertex_count):
            clique = set(g._nbrs[c][v]) | {v}
            for w in g._nbrs[c][v]:
                if set(g._nbrs[c][w]) | {w} != clique:
                    return False
    return True


def regularity_orders(g: EdgeColouredGraph) -> tuple[int, ...] | None:
    orders = []
    for c in g.colours:
        degrees = {len(g._nbrs[c][v]) for v in range(g.vertex_count)}
        if len(degrees) != 1:
            return None
        orders.append(degrees.pop())
    return tuple(orders)


def bfs_distances(g: EdgeColouredGraph, source: int) -> list[int]:
    dist = [-1] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.neighbours(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def distance_matrices(g: EdgeColouredGraph) -> list[RationalMatrix]:
    """Distance-i relation matrices ``A_0 = I, ..., A_d`` of a monochrome graph."""
    if g.colour_count != 1:
        raise GraphError("distance matrices need a monochrome graph")
    n = g.vertex_count
    dist = np.array([bfs_distances(g, v) for v in range(n)], dtype=np.int64)
    if (dist < 0).any():
        raise GraphError("graph is disconnected")
    d = int(dist.max())
    return [RationalMatrix((dist == i).astype(np.int64)) for i in range(d + 1)]


def apply_word(g: EdgeColouredGraph, x: int, word: Sequence[int]) -> list[int]:
    """Count galleries of the given type from ``x`` to every vertex.

    Walks the graph directly, without forming any matrix.
    """
    if not 0 <= x < g.vertex_count:
        raise GraphError(f"vertex {x} out of range")
    counts = {x: 1}
    for c in word:
        g._check_colour(c)
        nxt: dict[int, int] = {}
        for v, k in counts.items():
            for w in g._nbrs[c][v]:
                nxt[w] = nxt.get(w, 0) + k
        counts = nxt
    out = [0] * g.vertex_count
    for v, k in counts.items():
        out[v] = k
    return out


def graph_product(g1: EdgeColouredGraph, g2: EdgeColouredGraph) -> EdgeColouredGraph:
    """Cartesian product; colours of ``g2`` are shifted past those of ``g1``.

    Vertex ``(a, b)`` gets index ``a * |g2| + b``.
    """
    n2 = g2.vertex_count
    edges = []
    for (a, b) in _cartesian(range(g1.vertex_count), range(n2)):
        for u, v, c in g1.edges:
            if u == a:
                edges.append((a * n2 + b, v * n2 + b, c))
        for u, v, c in g2.edges:
            if u == b:
                edges.append((a * n2 + b, a * n2 + v, g1.colour_count + c))
    return EdgeColouredGraph(g1.vertex_count * n2, g1.colour_count + g2.colour_count, edges)


def complete_graph(n: int) -> EdgeColouredGraph:
    return EdgeColouredGraph(n, 1, ((u, v, 1) for u in range(n) for v in range(u + 1, n)))


def single_vertex() -> EdgeColouredGraph:
    g = EdgeColouredGraph.__new__(EdgeColouredGraph)
    # K_1 has no edges and therefore no colours
    g.vertex_count, g.colour_count, g._colour_of, g.edges = 1, 0, {}, ()
    g._nbrs, g._ops = [[[]]], {}
    return g


def path_graph(n: int) -> EdgeColouredGraph:
    return EdgeColouredGraph(n, 1, ((i, i + 1, 1) for i in range(n - 1)))


def no_architecture_graph() -> EdgeColouredGraph:
    """Triangle with two colour-1 edges at vertex 0 and a colour-2 edge opposite."""
    return EdgeColouredGraph(3, 2, [(0, 1, 1), (0, 2, 1), (1, 2, 2)])


def petersen_graph() -> EdgeColouredGraph:
    """Kneser graph K(5, 2), monochrome."""
    from itertools import combinations

    pts = list(combinations(range(5), 2))
    edges = [(i, j, 1) for i, a in enumerate(pts) for j, b in enumerate(pts)
             if i < j and not set(a) & set(b)]
    return EdgeColouredGraph(len(pts), 1, edges)


# text format

def parse_graph(text: str) -> EdgeColouredGraph:
    """Parse ``graph / vertices m / colours n / edge u v c`` lines."""
    vertices = colours = None
    edges = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "graph" and len(parts) == 1:
                seen_header = True
            elif parts[0] == "vertices" and len(parts) == 2:
                vertices = int(parts[1])
            elif parts[0] == "colours" and len(parts) == 2:
                colours = int(parts[1])
            elif parts[0] == "edge" and len(parts) == 4:
                edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
            else:
                raise GraphError(f"unrecognised line {raw!r}")
        except ValueError as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
    if not seen_header:
        raise GraphError("missing 'graph' header")
    if vertices is None or colours is None:
        raise GraphError("missing 'vertices' or 'colours' line")
    return EdgeColouredGraph(vertices, colours, edges)


def format_graph(g: EdgeColouredGraph) -> str:
    lines = ["graph", f"vertices {g.vertex_count}", f"colours {g.colour_count}"]
    lines += [f"edge {u} {v} {c}" for u, v, c in g.edges]
    return "\n".join(lines) + "\n"
