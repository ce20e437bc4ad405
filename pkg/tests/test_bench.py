import json

import numpy as np
import pandas as pd
import pytest

from kernelsrc.defaults import CSV_COLUMNS, SUITE_PROFILES
from kernelsrc.src import bench
from kernelsrc.src.bench import (
    BenchRecord, Kernel, LatencyModel, SuiteSpec, amdahl_bound, implied_parallel_fraction, latency_ns,
    integer_valued, latency_table, records_to_frame, run_suite, time_kernel, verify,
)
from kernelsrc.src.errors import VerificationError
from kernelsrc.src.matrix import Matrix


def quick(**kw) -> SuiteSpec:
    return SuiteSpec(**{"repeats": 1, "warmup": 0, **kw})


# ------------------------------------------------------------
# Amdahl and latency
# ------------------------------------------------------------
@pytest.mark.parametrize("alpha,expected", [(0.0, 1.0), (0.5, 2.0), (0.9, 10.0), (0.99, 100.0)])
def test_amdahl_bound(alpha, expected):
    assert amdahl_bound(alpha) == pytest.approx(expected)


def test_amdahl_rejects_fully_parallel():
    with pytest.raises(ValueError, match="unbounded"):
        amdahl_bound(1.0)
    with pytest.raises(ValueError):
        amdahl_bound(-0.1)


def test_implied_parallel_fraction_inverts_amdahl():
    # alpha = 0.9 on 4 processors: S = 1 / (0.1 + 0.225)
    speedup = 1.0 / (0.1 + 0.9 / 4)
    assert implied_parallel_fraction(speedup, 4) == pytest.approx(0.9)
    assert implied_parallel_fraction(1.0, 8) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        implied_parallel_fraction(2.0, 1)


def test_latency_reference_levels():
    model = LatencyModel()
    assert model.ns_per_cycle == pytest.approx(0.395, abs=1e-3)
    l2 = latency_ns(model, "L2")
    assert l2[0] == pytest.approx(1.976, abs=1e-3) and l2[0] == l2[1]
    lo, hi = latency_ns(model, "RAM")
    assert lo == pytest.approx(39.5, abs=0.1)
    assert hi == pytest.approx(395, abs=1)
    assert latency_ns(model, "L3") == pytest.approx((3.95, 7.9), abs=0.01)
    assert latency_ns(model, "disk")[0] == pytest.approx(0.395e6, rel=1e-3)


def test_latency_unknown_level():
    with pytest.raises(ValueError, match="unknown memory level"):
        latency_ns(LatencyModel(), "L4")


def test_latency_table_scales_with_clock():
    slow, fast = latency_table(LatencyModel(clock_ghz=1.0)), latency_table(LatencyModel(clock_ghz=2.0))
    assert list(slow["level"]) == ["registers", "L1", "L2", "L3", "RAM", "disk"]
    assert (slow["max_ns"] == 2 * fast["max_ns"]).all()
    with pytest.raises(ValueError):
        LatencyModel(clock_ghz=0)


# ------------------------------------------------------------
# Suites
# ------------------------------------------------------------
def test_matmul_suite_records(tmp_path):
    out = tmp_path / "smoke" / "results.csv"
    spec = quick(kernels=["matmul_naive", "matmul_parallel", "matmul_strassen"], sizes=[8, 12], threads=[1, 2],
                 param=4)
    records = run_suite(spec, out)
    # naive once per size, parallel and strassen per thread count
    assert len(records) == 2 * (1 + 2 + 2)
    assert all(r.median_seconds > 0 for r in records)
    base = [r for r in records if r.kernel == "matmul_naive"]
    assert all(r.speedup == 1.0 and r.param is None for r in base)
    assert {r.param for r in records if r.kernel == "matmul_strassen"} == {4}

    assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
    df = pd.read_csv(out)
    assert len(df) == len(records)
    assert df.loc[df["kernel"] == "matmul_naive", "param"].isna().all()


def test_graph_suite_records(tmp_path):
    spec = quick(kernels=["bfs_seq", "bfs_parallel", "fw_iterative", "fw_recursive"], sizes=[20],
                 threads=[1, 3], param=4, density=0.2)
    records = run_suite(spec, tmp_path / "results.csv")
    assert [(r.kernel, r.threads) for r in records] == [
        ("fw_iterative", 1), ("fw_recursive", 1),
        ("bfs_seq", 1), ("bfs_parallel", 1), ("bfs_parallel", 3),
    ]
    assert [r.param for r in records if r.kernel == "fw_recursive"] == [4]


def test_mr_matmul_suite(tmp_path):
    spec = quick(kernels=["matmul_naive", "mr_matmul"], sizes=[6], threads=[2], reducers=4)
    records = run_suite(spec)
    assert [r.kernel for r in records] == ["matmul_naive", "mr_matmul"]


def test_empty_suite_writes_header_only(tmp_path):
    out = tmp_path / "results.csv"
    assert run_suite(quick(), out) == []
    assert out.read_text().strip() == ",".join(CSV_COLUMNS)


def test_wrong_kernel_fails_verification(monkeypatch):
    broken = Kernel("matmul_parallel", "matmul", lambda inp, t, p, s: Matrix.zeros(inp[0].n), threaded=True)
    monkeypatch.setitem(bench.KERNELS, "matmul_parallel", broken)
    with pytest.raises(VerificationError) as info:
        run_suite(quick(kernels=["matmul_naive", "matmul_parallel"], sizes=[4], threads=[2]))
    assert info.value.kernel == "matmul_parallel"


def test_unknown_kernel_is_rejected():
    with pytest.raises(ValueError, match="unknown kernel"):
        SuiteSpec(kernels=["matmul_quantum"])


def test_time_kernel_median():
    calls = []
    result, median = time_kernel(lambda: calls.append(1) or len(calls), repeats=3, warmup=2)
    assert len(calls) == 5
    assert result == 5
    assert median > 0


@pytest.mark.parametrize("profile", list(SUITE_PROFILES))
def test_profiles_load(profile):
    spec = SuiteSpec.from_profile(profile)
    assert spec.name == profile
    assert spec.kernels and spec.sizes


def test_unknown_profile():
    with pytest.raises(ValueError, match="unknown suite profile"):
        SuiteSpec.from_profile("huge")


def test_suite_from_json(tmp_path):
    path = tmp_path / "mine.json"
    path.write_text(json.dumps({"kernels": ["fw_iterative"], "sizes": [4, 8], "repeats": 2}))
    spec = SuiteSpec.from_json(path)
    assert spec.name == "mine"
    assert spec.sizes == [4, 8] and spec.repeats == 2

    path.write_text(json.dumps({"kernels": ["fw_iterative"], "bogus": 1}))
    with pytest.raises(ValueError, match="unknown suite keys"):
        SuiteSpec.from_json(path)


def test_records_frame_keeps_integer_param():
    df = records_to_frame([
        BenchRecord("fw_recursive", 8, 1, 4, 3, 0.1, 1.2),
        BenchRecord("fw_iterative", 8, 1, None, 3, 0.12, 1.0),
    ])
    assert list(df.columns) == CSV_COLUMNS
    assert str(df["param"].dtype) == "Int64"
    assert df["param"].iloc[0] == 4 and pd.isna(df["param"].iloc[1])


def test_integer_valued():
    assert integer_valued(np.array([[0.0, 3.0], [float("inf"), -2.0]]))
    assert not integer_valued(np.array([[0.0, 0.5]]))
    assert integer_valued(np.array([[1.0]]), np.array([[2.0]]))
    assert not integer_valued(np.array([[1.0]]), np.array([[2.25]]))


def test_verify_tolerance_applies_only_to_inexact_inputs():
    kernel = Kernel("matmul_blocked", "matmul", lambda inp, t, p, s: None, rtol=1e-9)
    want = Matrix(np.array([[1.0, 2.0], [3.0, 4.0]]))
    close = Matrix(want.data * (1 + 1e-12))
    verify(kernel, close, want, exact=False)
    with pytest.raises(VerificationError):
        verify(kernel, close, want, exact=True)
    with pytest.raises(VerificationError):
        verify(kernel, Matrix(want.data * (1 + 1e-6)), want, exact=False)


def test_kernel_without_tolerance_is_always_exact():
    kernel = Kernel("matmul_naive", "matmul", lambda inp, t, p, s: None)
    want = Matrix(np.array([[1.0]]))
    with pytest.raises(VerificationError):
        verify(kernel, Matrix(np.array([[1.0 + 1e-15]])), want, exact=False)


def test_registry_tolerances():
    assert bench.KERNELS["matmul_blocked"].rtol == 1e-9
    assert bench.KERNELS["matmul_strassen"].rtol == 1e-6
    assert bench.KERNELS["matmul_naive"].rtol == 0
