"""
Sequential queue BFS and level-synchronous parallel BFS.

The parallel variant snapshots the frontier before expanding it, expands
the snapshot on a fixed worker pool, and joins all workers (the barrier)
before the next level starts. A vertex is claimed with a single
`dict.setdefault` on the shared parent map; the first claimer wins.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from kernelsrc.src.graph import Graph

logger = logging.getLogger("bfs")

UNREACHED = -1

Target = Optional[Callable[[int], bool]]


@dataclass
class BfsResult:
    source: int
    level: list[int]
    found: Optional[int] = None
    parent: list[int] = field(default_factory=list)
    frontiers: list[list[int]] = field(default_factory=list)
    claims: Counter = field(default_factory=Counter)
    # vertices settled when each level's expansion began
    settled_at_barrier: list[int] = field(default_factory=list)

    @property
    def reached(self) -> set[int]:
        return {v for v, lv in enumerate(self.level) if lv != UNREACHED}


def bfs_seq(g: Graph, source: int, target: Target = None) -> BfsResult:
    """
    Queue BFS. With a target predicate, returns at the first matching vertex
    in dequeue order; otherwise labels every reachable vertex.
    """
    g.check_vertex(source)
    level = [UNREACHED] * g.vertex_count
    parent = [UNREACHED] * g.vertex_count
    level[source] = 0
    queue = deque([source])
    found = None

    while queue:
        u = queue.popleft()
        if target is not None and target(u):
            found = u
            break
        for v in g.successors(u):
            if level[v] == UNREACHED:
                level[v] = level[u] + 1
                parent[v] = u
                queue.append(v)

    frontiers: dict[int, list[int]] = {}
    for v, lv in enumerate(level):
        if lv != UNREACHED:
            frontiers.setdefault(lv, []).append(v)
    return BfsResult(
        source=source,
        level=level,
        found=found,
        parent=parent,
        frontiers=[frontiers[k] for k in sorted(frontiers)],
        claims=Counter({v: 1 for v, lv in enumerate(level) if lv != UNREACHED}),
    )


def _expand(g: Graph, chunk: list[int], claimed: dict[int, list[int]], level: list[int],
            depth: int, target: Target) -> tuple[list[int], list[int]]:
    """Expand one chunk of the frontier; returns (vertices this call won, target matches)."""
    out, matches = [], []
    for u in chunk:
        if target is not None and target(u):
            matches.append(u)
        for v in g.successors(u):
            # test-and-set: every attempt stores a fresh token, so only the
            # attempt whose token was kept sees itself as the winner
            token = [u]
            if claimed.setdefault(v, token) is token:
                level[v] = depth + 1
                out.append(v)
    return out, matches


def _chunks(items: list[int], parts: int) -> list[list[int]]:
    size = max(1, -(-len(items) // parts))
    return [items[i:i + size] for i in range(0, len(items), size)]


def bfs_parallel(g: Graph, source: int, threads: int, target: Target = None) -> BfsResult:
    """
    Level-synchronous parallel BFS. The level array equals bfs_seq's; only
    the order of vertices inside a frontier may differ. With a target
    predicate, the smallest matching vertex id of the first level holding a
    match is returned.
    """
    g.check_vertex(source)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")

    level = [UNREACHED] * g.vertex_count
    level[source] = 0
    claimed: dict[int, list[int]] = {source: [UNREACHED]}
    claims: Counter = Counter({source: 1})
    frontiers: list[list[int]] = []
    settled: list[int] = []
    frontier = [source]
    depth = 0
    found = None

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            frontiers.append(frontier)
            settled.append(len(claimed))
            parts = _chunks(frontier, threads)
            if pool is None:
                results = [_expand(g, part, claimed, level, depth, target) for part in parts]
            else:
                futures = [pool.submit(_expand, g, part, claimed, level, depth, target) for part in parts]
                # Synchronize: every worker of this level finishes before the next starts
                results = [f.result() for f in futures]

            matches = [m for _, found_here in results for m in found_here]
            if matches:
                found = min(matches)
                break
            frontier = []
            for out, _ in results:
                claims.update(out)
                frontier.extend(out)
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    parent = [UNREACHED] * g.vertex_count
    for v, (p,) in claimed.items():
        parent[v] = p
    logger.debug("parallel bfs from %d: %d levels, %d reached", source, len(frontiers), len(claimed))
    return BfsResult(
        source=source,
        level=level,
        found=found,
        parent=parent,
        frontiers=frontiers,
        claims=claims,
        settled_at_barrier=settled,
    )
