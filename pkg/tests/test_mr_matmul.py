import numpy as np
import pytest

from kernelsrc.src.errors import OrderMismatchError
from kernelsrc.src.generators import gen_matrix
from kernelsrc.src.mapreduce import JobConfig, TaskKind
from kernelsrc.src.matmul import matmul_naive
from kernelsrc.src.matrix import Matrix
from kernelsrc.src.mr_matmul import band_bounds, grid_side, mr_matmul, mr_matmul_with_report


def naive(a, b):
    return matmul_naive(a, b)[0]


def test_single_reducer_is_bitwise_naive():
    a, b = gen_matrix(7, 1, "float"), gen_matrix(7, 2, "float")
    assert mr_matmul(a, b, 1) == naive(a, b)


def test_four_reducers_small_example():
    a = Matrix.from_rows([[1, 2, 0, 0], [3, 4, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    b = Matrix.from_rows([[5, 6, 0, 0], [7, 8, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])
    c, report = mr_matmul_with_report(a, b, 4, JobConfig(num_workers=2))
    assert c.tolist() == [[19, 22, 0, 0], [43, 50, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]
    assert len([t for t in report.tasks if t.kind is TaskKind.REDUCE]) == 4
    # 4 blocks of A and 4 blocks of B
    assert len([t for t in report.tasks if t.kind is TaskKind.MAP]) == 8


@pytest.mark.parametrize("n,reducers", [(8, 4), (9, 4), (10, 16), (16, 16), (5, 1)])
def test_matches_naive(n, reducers):
    a, b = gen_matrix(n, n, "float"), gen_matrix(n, n + 1, "float")
    c = mr_matmul(a, b, reducers, JobConfig(num_workers=3))
    np.testing.assert_allclose(c.data, naive(a, b).data, rtol=1e-9, atol=0)


@pytest.mark.parametrize("n", [4, 16, 33, 64])
def test_sixteen_reducers_exact_on_integer_inputs(n):
    a, b = gen_matrix(n, 2 * n), gen_matrix(n, 2 * n + 1)
    assert mr_matmul(a, b, 16, JobConfig(num_workers=4)) == naive(a, b)


def test_worker_failure_does_not_change_product():
    a, b = gen_matrix(8, 3), gen_matrix(8, 4)
    c, report = mr_matmul_with_report(a, b, 4, JobConfig(num_workers=4, fault_plan=[(1, 1)]))
    assert c == naive(a, b)
    assert len(report.failure_events) == 1
    assert report.total_reassignments >= 1


def test_more_reducers_than_rows():
    # 16 reducers on a 3 x 3 problem: some bands are empty
    a, b = gen_matrix(3, 5), gen_matrix(3, 6)
    assert mr_matmul(a, b, 16, JobConfig(num_workers=2)) == naive(a, b)


def test_same_product_for_any_worker_count():
    a, b = gen_matrix(12, 8, "float"), gen_matrix(12, 9, "float")
    products = [mr_matmul(a, b, 4, JobConfig(num_workers=w)) for w in (1, 2, 4)]
    assert all(p == products[0] for p in products)


def test_checkpoint_recovery_keeps_product():
    a, b = gen_matrix(8, 10), gen_matrix(8, 11)
    cfg = JobConfig(num_workers=3, checkpoint_interval=3, kill_master_at_checkpoint=1)
    c, report = mr_matmul_with_report(a, b, 4, cfg)
    assert c == naive(a, b)
    assert report.master_recoveries == 1


@pytest.mark.parametrize("reducers", [2, 3, 8, 0])
def test_reducers_must_be_power_of_four(reducers):
    a = gen_matrix(4, 0)
    with pytest.raises(ValueError):
        mr_matmul(a, a, reducers)


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        mr_matmul(gen_matrix(3, 0), gen_matrix(4, 0), 4)


def test_grid_helpers():
    assert [grid_side(r) for r in (1, 4, 16, 64)] == [1, 2, 4, 8]
    assert band_bounds(10, 4) == [(0, 3), (3, 6), (6, 8), (8, 10)]
    assert band_bounds(3, 4) == [(0, 1), (1, 2), (2, 3), (3, 3)]
