"""
Directed adjacency-list graph used by the BFS kernels, plus the plain and
weighted edge-list text formats.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx

from kernelsrc.src.errors import TextFormatError, VertexOutOfRangeError


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(succ) for succ in self.adjacency)

    def successors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, succ in enumerate(self.adjacency) for v in succ]

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise VertexOutOfRangeError(v, self.vertex_count)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges())
        return g


def graph_from_edges(vertex_count: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Adjacency lists in input order; repeated arcs are kept once."""
    if vertex_count < 1:
        raise ValueError(f"vertex_count must be >= 1, got {vertex_count}")
    adjacency: list[list[int]] = [[] for _ in range(vertex_count)]
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        for x in (u, v):
            if not 0 <= x < vertex_count:
                raise VertexOutOfRangeError(x, vertex_count)
        if (u, v) in seen:
            continue
        seen.add((u, v))
        adjacency[u].append(v)
    return Graph(vertex_count, tuple(tuple(succ) for succ in adjacency))


def undirected(vertex_count: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Undirected graph encoded by inserting both arcs."""
    both = []
    for u, v in edges:
        both.append((u, v))
        both.append((v, u))
    return graph_from_edges(vertex_count, both)


# ------------------------------------------------------------
# Text formats: "n m" header, then m lines "u v" or "u v w"
# ------------------------------------------------------------
def _read_header(rows: list[list[str]]) -> tuple[int, int]:
    if not rows or len(rows[0]) != 2:
        raise TextFormatError("expected header line 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    if len(rows) - 1 != m:
        raise TextFormatError(f"header declares {m} edges, found {len(rows) - 1}")
    return n, m


def parse_graph(lines: Iterable[str]) -> Graph:
    rows = [ln.split() for ln in lines if ln.strip()]
    n, _ = _read_header(rows)
    edges = []
    for row in rows[1:]:
        if len(row) < 2:
            raise TextFormatError(f"bad edge line: {row!r}")
        edges.append((int(row[0]), int(row[1])))
    return graph_from_edges(n, edges)


def parse_weighted_edges(lines: Iterable[str]) -> tuple[int, list[tuple[int, int, float]]]:
    rows = [ln.split() for ln in lines if ln.strip()]
    n, _ = _read_header(rows)
    edges = []
    for row in rows[1:]:
        if len(row) != 3:
            raise TextFormatError(f"bad weighted edge line: {row!r}")
        u, v, w = int(row[0]), int(row[1]), float(row[2])
        for x in (u, v):
            if not 0 <= x < n:
                raise VertexOutOfRangeError(x, n)
        edges.append((u, v, w))
    return n, edges


def format_edges(vertex_count: int, edges: Sequence[tuple]) -> str:
    lines = [f"{vertex_count} {len(edges)}"]
    lines.extend(" ".join(str(x) for x in e) for e in edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph(f)


def read_weighted_edges(path: str | Path) -> tuple[int, list[tuple[int, int, float]]]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_weighted_edges(f)
