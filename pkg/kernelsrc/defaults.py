"""
Engine defaults and named benchmark suites.

Every value here can be overridden per call (function arguments, FwConfig,
JobConfig, SuiteSpec) or from the command line.
"""

# ----------- Kernel cutoffs -----------
STRASSEN_CUTOFF = 64          # below this order the naive kernel wins
BLOCKED_CUTOFF = 64
FW_BASE_BLOCK = 64            # 64 x 64 float64 = 32 KiB, a typical L1d
# ---------------------------------------

# ----------- MapReduce engine -----------
HEARTBEAT_INTERVAL = 0.01     # simulated seconds per tick
MAX_MISSED_PINGS = 3
CHECKPOINT_INTERVAL = 0       # task completions between checkpoints, 0 = off
# -----------------------------------------

# ----------- Benchmark harness -----------
BENCH_REPEATS = 5
BENCH_WARMUP = 1
CSV_COLUMNS = ["kernel", "n", "threads", "param", "repeats", "median_seconds", "speedup"]

# Relative tolerance against the oracle when inputs are not integer valued.
# Integer-valued inputs of moderate size are compared exactly.
BLOCKED_RTOL = 1e-9
STRASSEN_RTOL = 1e-6
MR_MATMUL_RTOL = 1e-9
FW_RECURSIVE_RTOL = 1e-12
# ------------------------------------------

# Memory hierarchy reference table (cycles), 2.53 GHz Xeon
XEON_CLOCK_GHZ = 2.53
XEON_LEVEL_CYCLES = {
    "registers": (0.0, 1.0),
    "L1": (1.0, 2.0),
    "L2": (5.0, 5.0),
    "L3": (10.0, 20.0),
    "RAM": (100.0, 1000.0),
    "disk": (1e6, 1e6),
}

# ---------------------- Suite profiles ----------------
# Each profile lists:
#  - "kernels": kernel ids from kernelsrc.src.bench.KERNELS
#  - "sizes":   problem sizes n
#  - "threads": thread counts tried for the parallel kernels
#  - "param":   block order / cutoff handed to kernels that take one (None = default)
#
SUITE_PROFILES = {
    "smoke": {
        "kernels": ["matmul_naive", "matmul_parallel", "fw_iterative", "fw_recursive"],
        "sizes": [32],
        "threads": [1, 2],
        "param": 8,
        "repeats": 3,
    },
    "matmul": {
        "kernels": ["matmul_naive", "matmul_parallel", "matmul_blocked", "matmul_strassen", "mr_matmul"],
        "sizes": [128, 256],
        "threads": [1, 2, 4],
        "param": 64,
    },
    "graphs": {
        "kernels": ["bfs_seq", "bfs_parallel", "fw_iterative", "fw_recursive"],
        "sizes": [256, 512],
        "threads": [1, 4],
        "param": 64,
        "density": 0.01,
    },
    "xeon": {
        "kernels": ["matmul_naive", "matmul_parallel", "fw_iterative", "fw_recursive"],
        "sizes": [1024],
        "threads": [4],
        "param": 64,
    },
}
# --------------------------------------------------------------------------- #
