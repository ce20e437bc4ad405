"""
All-pairs shortest paths: iterative Floyd-Warshall, the recursive
divide-and-conquer variant with its fixed eight-call ordering, and a
block-touch counter used as a machine-independent cache-refill proxy.

+INF is IEEE inf, which absorbs addition of any finite weight.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from kernelsrc.defaults import FW_BASE_BLOCK
from kernelsrc.src.errors import NegativeCycleError, OrderMismatchError
from kernelsrc.src.matrix import next_pow2

logger = logging.getLogger("floyd-warshall")

INF = np.inf

Block = tuple[int, int]           # (row offset, column offset) inside the working matrix
Observer = Callable[[Block, Block, Block, int], None]


@dataclass(frozen=True)
class DistanceMatrix:
    dist: np.ndarray

    def __post_init__(self):
        arr = np.array(self.dist, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"distance matrix must be square and non-empty, got shape {arr.shape}")
        object.__setattr__(self, "dist", arr)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, float]]) -> "DistanceMatrix":
        """Zero diagonal, +INF for absent arcs, the lightest weight for repeated arcs."""
        d = np.full((n, n), INF)
        np.fill_diagonal(d, 0.0)
        for u, v, w in edges:
            if u != v:
                d[u, v] = min(d[u, v], w)
            else:
                d[u, u] = min(d[u, u], w)
        return cls(d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.dist, other.dist))

    __hash__ = None


@dataclass(frozen=True)
class FwConfig:
    base_block_order: int = FW_BASE_BLOCK

    def __post_init__(self):
        if self.base_block_order < 1:
            raise ValueError(f"base_block_order must be >= 1, got {self.base_block_order}")


def _check_no_negative_cycle(d: np.ndarray) -> None:
    diag = np.diagonal(d)
    bad = np.flatnonzero(diag < 0)
    if bad.size:
        raise NegativeCycleError(int(bad[0]))


def fwi_kernel(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> None:
    """
    In-place min-plus update a[i, j] <- min(a[i, j], b[i, k] + c[k, j]) for k
    ascending, each k step vectorised over (i, j). The views may alias the
    same block; with non-negative diagonals a k step never changes row k of
    c or column k of b, so this matches the scalar k, i, j loop.
    """
    if not (a.shape == b.shape == c.shape) or a.shape[0] != a.shape[1]:
        raise OrderMismatchError(a.shape[0], b.shape[0] if b.shape != a.shape else c.shape[0])
    for k in range(a.shape[0]):
        np.minimum(a, b[:, k, None] + c[k, None, :], out=a)


def fw_iterative(w: DistanceMatrix, cfg: FwConfig = FwConfig(),
                 observer: Optional[Observer] = None) -> DistanceMatrix:
    """
    Iterative Floyd-Warshall. With an observer the sweep walks, for each k,
    every tile of order cfg.base_block_order in row-major order and reports
    (tile, column-k tile, row-k tile, order) before updating it; the result
    is the same either way.
    """
    d = w.dist.copy()
    if observer is None:
        fwi_kernel(d, d, d)
    else:
        _tiled_sweep(d, cfg.base_block_order, observer)
    _check_no_negative_cycle(d)
    return DistanceMatrix(d)


def _tiled_sweep(d: np.ndarray, tile: int, observer: Observer) -> None:
    n = d.shape[0]
    tile = min(tile, n)
    starts = range(0, n, tile)
    for k in range(n):
        kt = k - k % tile
        for r0 in starts:
            for c0 in starts:
                observer((r0, c0), (r0, kt), (kt, c0), tile)
                blk = d[r0:r0 + tile, c0:c0 + tile]
                # row k and column k are fixed points of step k (non-negative diagonal)
                np.minimum(blk, d[r0:r0 + tile, k, None] + d[k, None, c0:c0 + tile], out=blk)


def pad_distances(w: DistanceMatrix) -> np.ndarray:
    """Pad to a power of two; padded vertices are isolated (0 diagonal, +INF elsewhere)."""
    size = next_pow2(w.n)
    d = np.full((size, size), INF)
    np.fill_diagonal(d, 0.0)
    d[: w.n, : w.n] = w.dist
    return d


def _fwr(d: np.ndarray, a: Block, b: Block, c: Block, size: int, base: int,
         observer: Optional[Observer]) -> None:
    if size <= base or size == 1:
        if observer is not None:
            observer(a, b, c, size)
        fwi_kernel(d[a[0]:a[0] + size, a[1]:a[1] + size],
                   d[b[0]:b[0] + size, b[1]:b[1] + size],
                   d[c[0]:c[0] + size, c[1]:c[1] + size])
        return

    h = size // 2

    def q(blk: Block, i: int, j: int) -> Block:
        return (blk[0] + i * h, blk[1] + j * h)

    # order matters: each call reads blocks written by the calls before it
    _fwr(d, q(a, 0, 0), q(b, 0, 0), q(c, 0, 0), h, base, observer)
    _fwr(d, q(a, 0, 1), q(b, 0, 0), q(c, 0, 1), h, base, observer)
    _fwr(d, q(a, 1, 0), q(b, 1, 0), q(c, 0, 0), h, base, observer)
    _fwr(d, q(a, 1, 1), q(b, 1, 0), q(c, 0, 1), h, base, observer)
    _fwr(d, q(a, 1, 1), q(b, 1, 1), q(c, 1, 1), h, base, observer)
    _fwr(d, q(a, 1, 0), q(b, 1, 1), q(c, 1, 0), h, base, observer)
    _fwr(d, q(a, 0, 1), q(b, 0, 1), q(c, 1, 1), h, base, observer)
    _fwr(d, q(a, 0, 0), q(b, 0, 1), q(c, 1, 0), h, base, observer)


def fw_recursive(w: DistanceMatrix, cfg: FwConfig = FwConfig(),
                 observer: Optional[Observer] = None) -> DistanceMatrix:
    """
    Recursive Floyd-Warshall on the padded matrix, starting from FWR(D, D, D)
    and falling back to fwi_kernel once a block's order is <= the base order.
    `observer` is called with (A, B, C, order) before every base-case kernel.
    """
    d = pad_distances(w)
    size = d.shape[0]
    _fwr(d, (0, 0), (0, 0), (0, 0), size, cfg.base_block_order, observer)
    _check_no_negative_cycle(d)
    return DistanceMatrix(d[: w.n, : w.n].copy())


# ------------------------------------------------------------
# Block-touch proxy
# ------------------------------------------------------------
class TouchCounter:
    """
    Observer that counts, over all kernel invocations, the blocks an
    invocation touches that the immediately preceding invocation did not.
    """

    def __init__(self):
        self.touches = 0
        self.previous: set[tuple[int, int, int]] = set()

    def __call__(self, a: Block, b: Block, c: Block, size: int) -> None:
        current = {(a[0], a[1], size), (b[0], b[1], size), (c[0], c[1], size)}
        self.touches += len(current - self.previous)
        self.previous = current


def count_block_touches(w: DistanceMatrix, cfg: FwConfig = FwConfig()) -> int:
    """Touch count of an instrumented recursive run."""
    counter = TouchCounter()
    try:
        fw_recursive(w, cfg, observer=counter)
    except NegativeCycleError:
        pass
    logger.info("block touches n=%d base=%d: %d", w.n, cfg.base_block_order, counter.touches)
    return counter.touches


def count_sweep_touches(w: DistanceMatrix, cfg: FwConfig = FwConfig()) -> int:
    """Touch count of an instrumented iterative run, tiled at cfg.base_block_order."""
    counter = TouchCounter()
    try:
        fw_iterative(w, cfg, observer=counter)
    except NegativeCycleError:
        pass
    logger.info("sweep touches n=%d tile=%d: %d", w.n, cfg.base_block_order, counter.touches)
    return counter.touches
