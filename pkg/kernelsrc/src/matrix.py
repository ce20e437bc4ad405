"""
Dense square matrix type shared by every multiplication kernel.

Storage is a C-contiguous numpy float64 array of shape (n, n), i.e. row-major
64-bit floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from kernelsrc.src.errors import TextFormatError, OrderMismatchError


@dataclass(frozen=True)
class Matrix:
    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"matrix must be square, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("matrix order must be at least 1")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Matrix":
        return cls(np.array(rows, dtype=np.float64))

    @classmethod
    def zeros(cls, n: int) -> "Matrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(np.eye(n))

    def crop(self, n: int) -> "Matrix":
        """Top-left n x n block."""
        return Matrix(self.data[:n, :n].copy())

    def tolist(self) -> list[list[float]]:
        return self.data.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.data, other.data))

    __hash__ = None


@dataclass
class MulStats:
    """Exact scalar operation counts for one kernel run."""
    scalar_multiplications: int = 0
    scalar_additions: int = 0

    def __iadd__(self, other: "MulStats") -> "MulStats":
        self.scalar_multiplications += other.scalar_multiplications
        self.scalar_additions += other.scalar_additions
        return self


def check_same_order(a: Matrix, b: Matrix) -> int:
    if a.n != b.n:
        raise OrderMismatchError(a.n, b.n)
    return a.n


def next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p <<= 1
    return p


def pad_pow2(m: Matrix) -> Matrix:
    """Zero-pad to the smallest power-of-two order >= m.n."""
    size = next_pow2(m.n)
    if size == m.n:
        return Matrix(m.data.copy())
    out = np.zeros((size, size))
    out[: m.n, : m.n] = m.data
    return Matrix(out)


# ------------------------------------------------------------
# Text format: line 1 = n, then n rows of n decimal values
# ------------------------------------------------------------
def parse_matrix(lines: Iterable[str]) -> Matrix:
    rows = [ln.split() for ln in lines if ln.strip()]
    if not rows:
        raise TextFormatError("empty matrix text")
    try:
        n = int(rows[0][0])
    except ValueError as e:
        raise TextFormatError(f"bad order line: {rows[0]!r}") from e
    body = rows[1:]
    if len(body) != n:
        raise TextFormatError(f"expected {n} rows, found {len(body)}")
    for idx, row in enumerate(body):
        if len(row) != n:
            raise TextFormatError(f"ragged row {idx}: expected {n} values, found {len(row)}")
    try:
        return Matrix(np.array([[float(v) for v in row] for row in body]))
    except ValueError as e:
        raise TextFormatError(str(e)) from e


def read_matrix(path: str | Path) -> Matrix:
    with open(path, "r", encoding="utf-8") as f:
        return parse_matrix(f)


def format_matrix(m: Matrix) -> str:
    lines = [str(m.n)]
    for row in m.data:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix(m: Matrix, path: str | Path) -> None:
    Path(path).write_text(format_matrix(m), encoding="utf-8")
