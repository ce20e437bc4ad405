"""
Seeded benchmark input generators.

All randomness comes from xorshift64* (shifts 12/25/27, multiplier
0x2545F4914F6CDD1D) so inputs are reproducible across implementations.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from kernelsrc.src.floyd_warshall import DistanceMatrix
from kernelsrc.src.graph import Graph, graph_from_edges
from kernelsrc.src.matrix import Matrix

MASK64 = (1 << 64) - 1
MULTIPLIER = 0x2545F4914F6CDD1D
INT_BITS = 20                       # integer mode draws from [0, 2**20)


class XorShift64Star:
    def __init__(self, seed: int):
        # the state must be non-zero; mix the seed through splitmix64 once
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        self.state = (z ^ (z >> 31)) or 1

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def uniform(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, bound: int) -> int:
        return (self.next_u64() >> 32) % bound


def gen_matrix(n: int, seed: int, value_mode: Literal["integer", "float"] = "integer") -> Matrix:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = XorShift64Star(seed)
    count = n * n
    if value_mode == "integer":
        values = [rng.next_u64() >> (64 - INT_BITS) for _ in range(count)]
    elif value_mode == "float":
        values = [rng.uniform() for _ in range(count)]
    else:
        raise ValueError(f"unknown value mode {value_mode!r}")
    return Matrix(np.array(values, dtype=np.float64).reshape(n, n))


def _sample_arcs(n: int, density: float, rng: XorShift64Star) -> list[tuple[int, int]]:
    """
    Each of the n(n-1) non-loop arcs is present with probability `density`.
    Gaps between chosen arcs are drawn geometrically, so the cost is
    proportional to the number of arcs rather than n squared.
    """
    total = n * (n - 1)
    if density <= 0.0 or total == 0:
        return []
    if density >= 1.0:
        return [(u, v) for u in range(n) for v in range(n) if u != v]
    log_q = math.log1p(-density)
    arcs = []
    idx = -1
    while True:
        r = rng.uniform()
        idx += 1 + int(math.log1p(-r) / log_q)
        if idx >= total:
            break
        u, rest = divmod(idx, n - 1)
        v = rest + (1 if rest >= u else 0)
        arcs.append((u, v))
    return arcs


def gen_graph(n: int, density: float, seed: int, weighted: bool = False) -> Graph | list[tuple[int, int, float]]:
    """
    Random digraph without self-loops. Returns a Graph, or with
    `weighted=True` the edge list [(u, v, w)] with integer weights in [1, 10].
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    rng = XorShift64Star(seed)
    arcs = _sample_arcs(n, density, rng)
    if not weighted:
        return graph_from_edges(n, arcs)
    return [(u, v, float(1 + rng.below(10))) for u, v in arcs]


def gen_distances(n: int, density: float, seed: int) -> DistanceMatrix:
    return DistanceMatrix.from_edges(n, gen_graph(n, density, seed, weighted=True))
