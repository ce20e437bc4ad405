"""
Matrix multiplication as a MapReduce job.

With R = 4**d reduce tasks the output is cut into a g x g block grid,
g = 2**d. Every input split is one block of A or B. A map task broadcasts
A(bi, bk) to all reduce tasks in output row band bi, and B(bk, bj) to all
reduce tasks in output column band bj. Reduce task bi * g + bj then sums
A(bi, bk) B(bk, bj) over bk ascending into its output block.
"""

from __future__ import annotations

import dataclasses
import struct
from typing import Optional

import numpy as np

from kernelsrc.src.matmul import accumulate_product
from kernelsrc.src.matrix import Matrix, check_same_order
from kernelsrc.src.mapreduce import JobConfig, JobReport, run_job

KEY = struct.Struct(">II")            # (block row, block column)
VALUE_HEADER = struct.Struct(">cIII")  # tag, bk, rows, cols
BLOCK_DTYPE = ">f8"


def grid_side(num_reduce_tasks: int) -> int:
    """g with g * g == num_reduce_tasks and g a power of two."""
    g = 1
    while g * g < num_reduce_tasks:
        g *= 2
    if g * g != num_reduce_tasks:
        raise ValueError(f"num_reduce_tasks must be a power of four, got {num_reduce_tasks}")
    return g


def band_bounds(n: int, g: int) -> list[tuple[int, int]]:
    """Split 0..n into g contiguous bands; leading bands take the remainder."""
    base, extra = divmod(n, g)
    out, lo = [], 0
    for i in range(g):
        hi = lo + base + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def encode_block(tag: bytes, bk: int, block: np.ndarray) -> bytes:
    rows, cols = block.shape
    return VALUE_HEADER.pack(tag, bk, rows, cols) + block.astype(BLOCK_DTYPE).tobytes()


def decode_block(value: bytes) -> tuple[bytes, int, np.ndarray]:
    tag, bk, rows, cols = VALUE_HEADER.unpack(value[:VALUE_HEADER.size])
    data = np.frombuffer(value[VALUE_HEADER.size:], dtype=BLOCK_DTYPE).astype(np.float64)
    return tag, bk, data.reshape(rows, cols)


def block_partitioner(g: int):
    def partition(key: bytes, num_reduce_tasks: int) -> int:
        bi, bj = KEY.unpack(key)
        return bi * g + bj
    return partition


def make_map_fn(g: int):
    def map_fn(split: tuple[bytes, int, int, bytes]) -> list[tuple[bytes, bytes]]:
        tag, row, col, value = split
        if tag == b"A":
            # A(bi, bk): (row band, {bk, block})
            return [(KEY.pack(row, bj), value) for bj in range(g)]
        # B(bk, bj): (column band, {bk, block})
        return [(KEY.pack(bi, col), value) for bi in range(g)]
    return map_fn


def reduce_fn(key: bytes, values: list[bytes]) -> list[tuple[bytes, bytes]]:
    a_blocks: dict[int, np.ndarray] = {}
    b_blocks: dict[int, np.ndarray] = {}
    for value in values:
        tag, bk, block = decode_block(value)
        (a_blocks if tag == b"A" else b_blocks)[bk] = block
    rows = next(iter(a_blocks.values())).shape[0]
    cols = next(iter(b_blocks.values())).shape[1]
    c = np.zeros((rows, cols))
    for bk in sorted(a_blocks):
        accumulate_product(a_blocks[bk], b_blocks[bk], c)
    return [(key, encode_block(b"C", 0, c))]


def matrix_splits(a: Matrix, b: Matrix, g: int) -> list[tuple[bytes, int, int, bytes]]:
    bands = band_bounds(a.n, g)
    splits = []
    for name, m in ((b"A", a), (b"B", b)):
        for i, (r0, r1) in enumerate(bands):
            for j, (c0, c1) in enumerate(bands):
                # A splits carry (bi, bk), B splits carry (bk, bj)
                bk = j if name == b"A" else i
                splits.append((name, i, j, encode_block(name, bk, m.data[r0:r1, c0:c1])))
    return splits


def mr_matmul_with_report(a: Matrix, b: Matrix, num_reduce_tasks: int,
                          cfg: Optional[JobConfig] = None) -> tuple[Matrix, JobReport]:
    n = check_same_order(a, b)
    cfg = cfg or JobConfig()
    g = grid_side(num_reduce_tasks)
    job_cfg = dataclasses.replace(cfg, num_reduce_tasks=num_reduce_tasks, partition_fn=block_partitioner(g))
    output, report = run_job(make_map_fn(g), reduce_fn, matrix_splits(a, b, g), job_cfg)

    bands = band_bounds(n, g)
    c = np.zeros((n, n))
    for kv in output:
        bi, bj = KEY.unpack(kv.key)
        _, _, block = decode_block(kv.value)
        (r0, r1), (c0, c1) = bands[bi], bands[bj]
        c[r0:r1, c0:c1] = block
    return Matrix(c), report


def mr_matmul(a: Matrix, b: Matrix, num_reduce_tasks: int, cfg: Optional[JobConfig] = None) -> Matrix:
    return mr_matmul_with_report(a, b, num_reduce_tasks, cfg)[0]
