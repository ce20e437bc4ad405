"""
Dense matrix multiplication kernels: naive, row-parallel, 2x2 blocked and
Strassen.

All kernels accumulate each c_ij over k in ascending order at their leaves,
so integer-valued inputs of moderate magnitude give exactly the same result
across kernels.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from kernelsrc.defaults import BLOCKED_CUTOFF, STRASSEN_CUTOFF
from kernelsrc.src.matrix import Matrix, MulStats, check_same_order, pad_pow2

logger = logging.getLogger("matmul")


def _check_threads(threads: int) -> None:
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")


def _row_range_product(a: np.ndarray, b: np.ndarray, c: np.ndarray, lo: int, hi: int) -> None:
    """c[lo:hi] += a[lo:hi] @ b, summing over k in ascending order."""
    n = a.shape[1]
    for k in range(n):
        c[lo:hi] += a[lo:hi, k, None] * b[k]


def accumulate_product(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> None:
    """c += a @ b for rectangular operands, k ascending."""
    _row_range_product(a, b, c, 0, a.shape[0])


def _naive(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    c = np.zeros((a.shape[0], b.shape[1]))
    _row_range_product(a, b, c, 0, a.shape[0])
    return c


def _row_chunks(n: int, parts: int) -> list[tuple[int, int]]:
    parts = min(parts, n)
    base, extra = divmod(n, parts)
    chunks, lo = [], 0
    for p in range(parts):
        hi = lo + base + (1 if p < extra else 0)
        chunks.append((lo, hi))
        lo = hi
    return chunks


def matmul_naive(a: Matrix, b: Matrix) -> tuple[Matrix, MulStats]:
    n = check_same_order(a, b)
    c = _naive(a.data, b.data)
    return Matrix(c), MulStats(scalar_multiplications=n ** 3, scalar_additions=n ** 3)


def matmul_parallel(a: Matrix, b: Matrix, threads: int) -> Matrix:
    """
    Row-partitioned parallel product. Each worker owns a contiguous range of
    output rows, so no element has two writers and the result is bitwise
    identical to matmul_naive.
    """
    n = check_same_order(a, b)
    _check_threads(threads)
    c = np.zeros((n, n))
    if threads == 1:
        _row_range_product(a.data, b.data, c, 0, n)
        return Matrix(c)
    chunks = _row_chunks(n, threads)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(_row_range_product, a.data, b.data, c, lo, hi) for lo, hi in chunks]
        for f in futures:
            f.result()
    return Matrix(c)


# ------------------------------------------------------------
# 2x2 block recursion: C11 = A11 B11 + A12 B21, etc.
# ------------------------------------------------------------
def _quadrants(m: np.ndarray):
    h = m.shape[0] // 2
    return ((m[:h, :h], m[:h, h:]), (m[h:, :h], m[h:, h:]))


def _blocked_into(a: np.ndarray, b: np.ndarray, c: np.ndarray, cutoff: int) -> None:
    n = a.shape[0]
    if n <= cutoff or n == 1:
        _row_range_product(a, b, c, 0, n)
        return
    qa, qb, qc = _quadrants(a), _quadrants(b), _quadrants(c)
    for i in range(2):
        for j in range(2):
            _blocked_into(qa[i][0], qb[0][j], qc[i][j], cutoff)
            _blocked_into(qa[i][1], qb[1][j], qc[i][j], cutoff)


def _blocked_product(a: np.ndarray, b: np.ndarray, cutoff: int) -> np.ndarray:
    c = np.zeros_like(a)
    _blocked_into(a, b, c, cutoff)
    return c


def matmul_blocked(a: Matrix, b: Matrix, threads: int = 1, cutoff: int = BLOCKED_CUTOFF) -> Matrix:
    """
    Pad to a power of two and recurse on 2x2 blocks down to `cutoff`.
    The eight products of the top split are independent and run on
    `threads` workers; deeper levels run sequentially inside each worker.
    """
    n = check_same_order(a, b)
    _check_threads(threads)
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    pa, pb = pad_pow2(a).data, pad_pow2(b).data
    size = pa.shape[0]

    if size <= cutoff or size == 1:
        c = _blocked_product(pa, pb, cutoff)
        return Matrix(c[:n, :n].copy())

    qa, qb = _quadrants(pa), _quadrants(pb)
    jobs = [(i, j, k) for i in range(2) for j in range(2) for k in range(2)]
    if threads == 1:
        products = {job: _blocked_product(qa[job[0]][job[2]], qb[job[2]][job[1]], cutoff) for job in jobs}
    else:
        with ThreadPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
            futures = {job: pool.submit(_blocked_product, qa[job[0]][job[2]], qb[job[2]][job[1]], cutoff)
                       for job in jobs}
            products = {job: f.result() for job, f in futures.items()}

    c = np.zeros((size, size))
    qc = _quadrants(c)
    for i in range(2):
        for j in range(2):
            qc[i][j][...] = products[(i, j, 0)] + products[(i, j, 1)]
    return Matrix(c[:n, :n].copy())


# ------------------------------------------------------------
# Strassen
# ------------------------------------------------------------
def _strassen_products(a: np.ndarray, b: np.ndarray):
    """The seven operand pairs P1..P7."""
    (a11, a12), (a21, a22) = _quadrants(a)
    (b11, b12), (b21, b22) = _quadrants(b)
    return [
        (a11 + a22, b11 + b22),  # P1
        (a21 + a22, b11),        # P2
        (a11, b12 - b22),        # P3
        (a22, b21 - b11),        # P4
        (a11 + a12, b22),        # P5
        (a21 - a11, b11 + b12),  # P6
        (a12 - a22, b21 + b22),  # P7
    ]


def _combine(p: list[np.ndarray], size: int) -> np.ndarray:
    p1, p2, p3, p4, p5, p6, p7 = p
    c = np.empty((size, size))
    (c11, c12), (c21, c22) = _quadrants(c)
    c11[...] = p1 + p4 - p5 + p7
    c12[...] = p3 + p5
    c21[...] = p2 + p4
    c22[...] = p1 + p3 - p2 + p6
    return c


def _strassen(a: np.ndarray, b: np.ndarray, cutoff: int, stats: MulStats) -> np.ndarray:
    n = a.shape[0]
    if n <= cutoff or n == 1:
        stats.scalar_multiplications += n ** 3
        stats.scalar_additions += n ** 3
        return _naive(a, b)
    h = n // 2
    # 10 operand sums plus 8 combining sums, each over an h x h block
    stats.scalar_additions += 18 * h * h
    products = [_strassen(x, y, cutoff, stats) for x, y in _strassen_products(a, b)]
    return _combine(products, n)


def _strassen_worker(a: np.ndarray, b: np.ndarray, cutoff: int) -> tuple[np.ndarray, MulStats]:
    local = MulStats()
    return _strassen(a, b, cutoff, local), local


def matmul_strassen(a: Matrix, b: Matrix, cutoff: int = STRASSEN_CUTOFF, threads: int = 1) -> tuple[Matrix, MulStats]:
    """
    Strassen multiplication on the power-of-two padded operands.

    With threads > 1 the seven top-level products run concurrently; each
    worker keeps its own MulStats and the counters are summed at join.
    """
    n = check_same_order(a, b)
    _check_threads(threads)
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    pa, pb = pad_pow2(a).data, pad_pow2(b).data
    size = pa.shape[0]
    stats = MulStats()

    if threads == 1 or size <= cutoff or size == 1:
        c = _strassen(pa, pb, cutoff, stats)
    else:
        h = size // 2
        stats.scalar_additions += 18 * h * h
        with ThreadPoolExecutor(max_workers=min(threads, 7)) as pool:
            futures = [pool.submit(_strassen_worker, x, y, cutoff) for x, y in _strassen_products(pa, pb)]
            products = []
            for f in futures:
                prod, local = f.result()
                products.append(prod)
                stats += local
        c = _combine(products, size)

    logger.debug("strassen n=%d cutoff=%d multiplications=%d", n, cutoff, stats.scalar_multiplications)
    return Matrix(c[:n, :n].copy()), stats
