import numpy as np
import pytest

from kernelsrc.src.errors import OrderMismatchError, TextFormatError
from kernelsrc.src.generators import gen_matrix
from kernelsrc.src.matmul import (
    _combine, _strassen_products, matmul_blocked, matmul_naive, matmul_parallel, matmul_strassen,
)
from kernelsrc.src.matrix import Matrix, format_matrix, pad_pow2, parse_matrix

A2 = Matrix.from_rows([[1, 2], [3, 4]])
B2 = Matrix.from_rows([[5, 6], [7, 8]])
AB2 = Matrix.from_rows([[19, 22], [43, 50]])


def triple_loop(a: Matrix, b: Matrix) -> Matrix:
    n = a.n
    c = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j] += a.data[i, k] * b.data[k, j]
    return Matrix.from_rows(c)


# ------------------------------------------------------------
# pad_pow2
# ------------------------------------------------------------
def test_pad_keeps_power_of_two_order():
    m = gen_matrix(4, 1)
    assert pad_pow2(m) == m


def test_pad_order_3_ones():
    p = pad_pow2(Matrix(np.ones((3, 3))))
    assert p.n == 4
    assert np.all(p.data[:3, :3] == 1)
    assert p.data[3].sum() == 0 and p.data[:, 3].sum() == 0


@pytest.mark.parametrize("n,expected", [(1, 1), (5, 8), (17, 32), (64, 64)])
def test_pad_order(n, expected):
    m = gen_matrix(n, 3)
    p = pad_pow2(m)
    assert p.n == expected
    assert p.crop(n) == m


# ------------------------------------------------------------
# naive / parallel
# ------------------------------------------------------------
def test_naive_hand_example():
    c, stats = matmul_naive(A2, B2)
    assert c == AB2
    assert stats.scalar_multiplications == 8


def test_naive_identity():
    c, _ = matmul_naive(Matrix.identity(2), A2)
    assert c == A2


def test_naive_matches_triple_loop():
    a, b = gen_matrix(4, 10), gen_matrix(4, 11)
    c, stats = matmul_naive(a, b)
    assert c == triple_loop(a, b)
    assert stats.scalar_multiplications == 64


def test_order_mismatch():
    with pytest.raises(OrderMismatchError, match="order mismatch"):
        matmul_naive(gen_matrix(2, 0), gen_matrix(3, 0))


@pytest.mark.parametrize("threads", [1, 2, 4, 8])
def test_parallel_bitwise_equal_to_naive(threads):
    a, b = gen_matrix(64, 5, "float"), gen_matrix(64, 6, "float")
    expected, _ = matmul_naive(a, b)
    got = matmul_parallel(a, b, threads)
    assert np.array_equal(got.data, expected.data)


def test_parallel_identity():
    b = gen_matrix(8, 2)
    assert matmul_parallel(Matrix.identity(8), b, threads=4) == b


def test_parallel_rejects_zero_threads():
    with pytest.raises(ValueError):
        matmul_parallel(A2, B2, 0)


# ------------------------------------------------------------
# blocked
# ------------------------------------------------------------
def test_blocked_scalar_level_equation():
    c = matmul_blocked(A2, B2, cutoff=1)
    a, b = A2.data, B2.data
    assert c.data[0, 0] == a[0, 0] * b[0, 0] + a[0, 1] * b[1, 0]
    assert c == AB2


@pytest.mark.parametrize("n,cutoff", [(n, c) for n in (1, 2, 3, 5, 8, 16) for c in (1, 2, 8)] + [(31, 8), (33, 8), (64, 16)])
@pytest.mark.parametrize("threads", [1, 4])
def test_blocked_matches_naive(n, cutoff, threads):
    a, b = gen_matrix(n, n), gen_matrix(n, n + 100)
    assert matmul_blocked(a, b, threads=threads, cutoff=cutoff) == matmul_naive(a, b)[0]


def test_blocked_zero_matrix():
    assert matmul_blocked(Matrix.zeros(6), gen_matrix(6, 1), cutoff=2) == Matrix.zeros(6)


# ------------------------------------------------------------
# Strassen
# ------------------------------------------------------------
def test_strassen_two_by_two():
    c, stats = matmul_strassen(A2, B2, cutoff=1)
    assert c == AB2
    assert stats.scalar_multiplications == 7


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_strassen_multiplication_count(k):
    n = 2 ** k
    _, stats = matmul_strassen(gen_matrix(n, 1), gen_matrix(n, 2), cutoff=1)
    assert stats.scalar_multiplications == 7 ** k


def test_strassen_343_vs_512():
    a, b = gen_matrix(8, 1), gen_matrix(8, 2)
    _, s = matmul_strassen(a, b, cutoff=1)
    _, naive = matmul_naive(a, b)
    assert (s.scalar_multiplications, naive.scalar_multiplications) == (343, 512)


@pytest.mark.parametrize("n,cutoff", [(n, c) for n in (1, 2, 3, 7, 16) for c in (1, 2, 8)] + [(33, 8), (64, 8)])
def test_strassen_matches_naive_exactly_on_integers(n, cutoff):
    a, b = gen_matrix(n, 7 * n), gen_matrix(n, 7 * n + 1)
    c, _ = matmul_strassen(a, b, cutoff=cutoff)
    assert c == matmul_naive(a, b)[0]


def test_strassen_float_tolerance():
    a, b = gen_matrix(32, 4, "float"), gen_matrix(32, 5, "float")
    c, _ = matmul_strassen(a, b, cutoff=2)
    np.testing.assert_allclose(c.data, matmul_naive(a, b)[0].data, rtol=1e-6)


def test_strassen_concurrent_products_same_result_and_counts():
    a, b = gen_matrix(32, 8), gen_matrix(32, 9)
    c1, s1 = matmul_strassen(a, b, cutoff=4, threads=1)
    c7, s7 = matmul_strassen(a, b, cutoff=4, threads=7)
    assert c1 == c7
    assert s1 == s7


def test_strassen_identity():
    b = gen_matrix(16, 3, "float")
    c, _ = matmul_strassen(Matrix.identity(16), b, cutoff=2)
    np.testing.assert_allclose(c.data, b.data, rtol=1e-6)


def test_strassen_combinations_reproduce_block_products():
    rng = np.random.default_rng(0)
    a = rng.integers(-9, 10, size=(4, 4)).astype(float)
    b = rng.integers(-9, 10, size=(4, 4)).astype(float)
    products = [x @ y for x, y in _strassen_products(a, b)]
    assert np.array_equal(_combine(products, 4), a @ b)


# ------------------------------------------------------------
# text format
# ------------------------------------------------------------
def test_matrix_text_round_trip():
    m = gen_matrix(3, 1)
    assert parse_matrix(format_matrix(m).splitlines()) == m


def test_matrix_text_rejects_ragged_rows():
    with pytest.raises(TextFormatError, match="ragged"):
        parse_matrix(["2", "1 2", "3"])
