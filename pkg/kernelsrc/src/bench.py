"""
Benchmark harness: suite descriptions, the kernel registry, median timing,
oracle verification, the Amdahl bound and the memory latency model.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
import pandas as pd

from kernelsrc.defaults import (
    BENCH_REPEATS, BENCH_WARMUP, BLOCKED_RTOL, CSV_COLUMNS, FW_RECURSIVE_RTOL, MR_MATMUL_RTOL, STRASSEN_RTOL,
    SUITE_PROFILES, XEON_CLOCK_GHZ, XEON_LEVEL_CYCLES,
)
from kernelsrc.src.bfs import bfs_parallel, bfs_seq
from kernelsrc.src.errors import VerificationError
from kernelsrc.src.floyd_warshall import FwConfig, fw_iterative, fw_recursive
from kernelsrc.src.generators import gen_distances, gen_graph, gen_matrix
from kernelsrc.src.mapreduce import JobConfig
from kernelsrc.src.matmul import matmul_blocked, matmul_naive, matmul_parallel, matmul_strassen
from kernelsrc.src.mr_matmul import mr_matmul

logger = logging.getLogger("bench")


# ------------------------------------------------------------
# Closed-form models
# ------------------------------------------------------------
def amdahl_bound(alpha: float) -> float:
    """Upper bound on speedup when a fraction alpha of the work is parallel: 1 / (1 - alpha)."""
    if alpha >= 1:
        raise ValueError("fully parallel fraction has unbounded ideal speedup")
    if alpha < 0:
        raise ValueError(f"parallel fraction must be in [0, 1), got {alpha}")
    return 1.0 / (1.0 - alpha)


def implied_parallel_fraction(speedup: float, threads: int) -> float:
    """
    Invert Amdahl's law for p = threads: the alpha that predicts `speedup`
    on p processors, S = 1 / ((1 - alpha) + alpha / p).
    """
    if threads < 2:
        raise ValueError(f"need at least 2 threads, got {threads}")
    if speedup <= 0:
        raise ValueError(f"speedup must be positive, got {speedup}")
    return (1.0 - 1.0 / speedup) / (1.0 - 1.0 / threads)


@dataclass(frozen=True)
class LatencyModel:
    clock_ghz: float = XEON_CLOCK_GHZ
    level_cycles: dict[str, tuple[float, float]] = field(default_factory=lambda: dict(XEON_LEVEL_CYCLES))

    def __post_init__(self):
        if self.clock_ghz <= 0:
            raise ValueError(f"clock_ghz must be positive, got {self.clock_ghz}")

    @property
    def ns_per_cycle(self) -> float:
        return 1.0 / self.clock_ghz


def latency_ns(model: LatencyModel, level: str) -> tuple[float, float]:
    if level not in model.level_cycles:
        raise ValueError(f"unknown memory level {level!r}, known: {', '.join(model.level_cycles)}")
    lo, hi = model.level_cycles[level]
    return lo * model.ns_per_cycle, hi * model.ns_per_cycle


def latency_table(model: LatencyModel) -> pd.DataFrame:
    rows = []
    for level, (lo, hi) in model.level_cycles.items():
        lo_ns, hi_ns = latency_ns(model, level)
        rows.append({"level": level, "min_cycles": lo, "max_cycles": hi, "min_ns": lo_ns, "max_ns": hi_ns})
    return pd.DataFrame(rows, columns=["level", "min_cycles", "max_cycles", "min_ns", "max_ns"])


# ------------------------------------------------------------
# Suites and records
# ------------------------------------------------------------
@dataclass
class SuiteSpec:
    kernels: list[str] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    threads: list[int] = field(default_factory=lambda: [1])
    param: Optional[int] = None          # block order / cutoff for kernels that take one
    repeats: int = BENCH_REPEATS
    warmup: int = BENCH_WARMUP
    seed: int = 0
    density: float = 0.05
    reducers: int = 4
    name: str = "custom"

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        unknown = [k for k in self.kernels if k not in KERNELS]
        if unknown:
            raise ValueError(f"unknown kernel(s) {unknown}, known: {', '.join(KERNELS)}")

    @classmethod
    def from_dict(cls, d: dict[str, Any], name: str = "custom") -> "SuiteSpec":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown suite keys {sorted(extra)}")
        return cls(**{"name": name, **d})

    @classmethod
    def from_profile(cls, profile: str) -> "SuiteSpec":
        if profile not in SUITE_PROFILES:
            raise ValueError(f"unknown suite profile {profile!r}, known: {', '.join(SUITE_PROFILES)}")
        return cls.from_dict(dict(SUITE_PROFILES[profile]), name=profile)

    @classmethod
    def from_json(cls, path: str | Path) -> "SuiteSpec":
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        name = data.pop("name", Path(path).stem)
        return cls.from_dict(data, name=name)


@dataclass
class BenchRecord:
    kernel: str
    n: int
    threads: int
    param: Optional[int]
    repeats: int
    median_seconds: float
    speedup: float

    def as_row(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------
# Kernel registry
# ------------------------------------------------------------
@dataclass(frozen=True)
class Kernel:
    name: str
    family: str                   # "matmul", "bfs" or "apsp"
    run: Callable[[Any, int, Optional[int], SuiteSpec], Any]
    threaded: bool = False
    uses_param: bool = False
    rtol: float = 0.0             # tolerance for non-integer inputs, 0 = always exact


def _matmul_inputs(n: int, spec: SuiteSpec):
    return gen_matrix(n, spec.seed), gen_matrix(n, spec.seed + 1)


def _bfs_inputs(n: int, spec: SuiteSpec):
    return gen_graph(n, spec.density, spec.seed)


def _apsp_inputs(n: int, spec: SuiteSpec):
    return gen_distances(n, spec.density, spec.seed)


FAMILY_INPUTS = {"matmul": _matmul_inputs, "bfs": _bfs_inputs, "apsp": _apsp_inputs}
FAMILY_BASELINE = {"matmul": "matmul_naive", "bfs": "bfs_seq", "apsp": "fw_iterative"}


def _result_array(result) -> np.ndarray:
    """Comparable payload of a kernel result."""
    if hasattr(result, "level"):
        return np.asarray(result.level)
    if hasattr(result, "dist"):
        return result.dist
    return result.data


KERNELS: dict[str, Kernel] = {k.name: k for k in [
    Kernel("matmul_naive", "matmul", lambda inp, t, p, s: matmul_naive(*inp)[0]),
    Kernel("matmul_parallel", "matmul", lambda inp, t, p, s: matmul_parallel(*inp, threads=t), threaded=True),
    Kernel("matmul_blocked", "matmul",
           lambda inp, t, p, s: matmul_blocked(*inp, threads=t, **({"cutoff": p} if p else {})),
           threaded=True, uses_param=True, rtol=BLOCKED_RTOL),
    Kernel("matmul_strassen", "matmul",
           lambda inp, t, p, s: matmul_strassen(*inp, threads=t, **({"cutoff": p} if p else {}))[0],
           threaded=True, uses_param=True, rtol=STRASSEN_RTOL),
    Kernel("mr_matmul", "matmul",
           lambda inp, t, p, s: mr_matmul(*inp, num_reduce_tasks=s.reducers, cfg=JobConfig(num_workers=t)),
           threaded=True, rtol=MR_MATMUL_RTOL),
    Kernel("bfs_seq", "bfs", lambda g, t, p, s: bfs_seq(g, 0)),
    Kernel("bfs_parallel", "bfs", lambda g, t, p, s: bfs_parallel(g, 0, threads=t), threaded=True),
    Kernel("fw_iterative", "apsp", lambda w, t, p, s: fw_iterative(w)),
    Kernel("fw_recursive", "apsp",
           lambda w, t, p, s: fw_recursive(w, FwConfig(p) if p else FwConfig()), uses_param=True,
           rtol=FW_RECURSIVE_RTOL),
]}


def integer_valued(*arrays: np.ndarray) -> bool:
    """True when every finite entry is a whole number (+INF and -INF allowed)."""
    for arr in arrays:
        finite = arr[np.isfinite(arr)]
        if not np.array_equal(finite, np.round(finite)):
            return False
    return True


def _family_exact(family: str, inputs) -> bool:
    if family == "matmul":
        return integer_valued(inputs[0].data, inputs[1].data)
    if family == "apsp":
        return integer_valued(inputs.dist)
    return True


def verify(kernel: Kernel, result, oracle, exact: bool = True) -> None:
    """
    Compare a kernel result with its oracle: exactly when `exact` (integer-valued
    inputs) or when the kernel has no tolerance, else within kernel.rtol.
    """
    got, want = _result_array(result), _result_array(oracle)
    if got.shape != want.shape:
        raise VerificationError(kernel.name, f"shape {got.shape} != {want.shape}")
    if kernel.rtol and not exact:
        ok = np.allclose(got, want, rtol=kernel.rtol, atol=0.0, equal_nan=True)
    else:
        ok = np.array_equal(got, want)
    if not ok:
        raise VerificationError(kernel.name, "(differs from the oracle)")


def time_kernel(fn: Callable[[], Any], repeats: int, warmup: int) -> tuple[Any, float]:
    """Median wall time over `repeats` runs after `warmup` discarded runs."""
    for _ in range(warmup):
        fn()
    times, result = [], None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, max(float(np.median(times)), np.finfo(float).tiny)


def run_suite(spec: SuiteSpec, out: Optional[str | Path] = None) -> list[BenchRecord]:
    """
    Time every (kernel, n, threads) configuration of the suite, one at a
    time. Each result is checked against the family's sequential kernel
    before it is recorded; a mismatch aborts with VerificationError.
    """
    records: list[BenchRecord] = []
    for n in spec.sizes:
        families = sorted({KERNELS[k].family for k in spec.kernels})
        for family in families:
            inputs = FAMILY_INPUTS[family](n, spec)
            exact = _family_exact(family, inputs)
            baseline = KERNELS[FAMILY_BASELINE[family]]
            oracle, base_median = time_kernel(lambda: baseline.run(inputs, 1, None, spec), spec.repeats, spec.warmup)
            logger.info("%s baseline %s n=%d: %.6f s", spec.name, baseline.name, n, base_median)

            for name in (k for k in spec.kernels if KERNELS[k].family == family):
                kernel = KERNELS[name]
                param = spec.param if kernel.uses_param else None
                for threads in (spec.threads if kernel.threaded else [1]):
                    if kernel is baseline:
                        median = base_median
                    else:
                        result, median = time_kernel(lambda: kernel.run(inputs, threads, param, spec),
                                                     spec.repeats, spec.warmup)
                        verify(kernel, result, oracle, exact)
                    records.append(BenchRecord(
                        kernel=name, n=n, threads=threads, param=param, repeats=spec.repeats,
                        median_seconds=median, speedup=base_median / median,
                    ))
                    logger.info("%s %s n=%d threads=%d param=%s: %.6f s (x%.2f)",
                                spec.name, name, n, threads, param, median, base_median / median)
    if out is not None:
        write_records(records, out)
    return records


def records_to_frame(records: list[BenchRecord]) -> pd.DataFrame:
    df = pd.DataFrame([r.as_row() for r in records], columns=CSV_COLUMNS)
    df["param"] = df["param"].astype("Int64")
    return df


def write_records(records: list[BenchRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records_to_frame(records).to_csv(path, index=False)
    logger.info("wrote %d records to %s", len(records), path)
