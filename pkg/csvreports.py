import os

import pandas as pd

from kernelsrc.defaults import CSV_COLUMNS
from utilities import RESULTS_FILE, logger


def validate_csv(file_path, expected_columns, skip_non_null_check=False):
    try:
        df = pd.read_csv(file_path)

        # Check if all expected columns are present
        if not set(expected_columns).issubset(df.columns):
            logger.warning(f"{file_path} has missing required columns")
            return False

        if not skip_non_null_check:
            # param is legitimately empty for kernels without a block order
            required = df.drop(columns=[c for c in ("param",) if c in df.columns])
            if len(required.dropna()) == 0:
                logger.warning(f"{file_path}: no complete rows found")
                return False

        return True

    except Exception as e:
        logger.error(f"Error reading CSV {file_path}: {e}")
        return False


def load_results(folder) -> pd.DataFrame | None:
    """Benchmark records of one suite folder, or None when absent or malformed."""
    csv_path = os.path.join(folder, RESULTS_FILE)
    if not os.path.exists(csv_path):
        return None
    if not validate_csv(csv_path, CSV_COLUMNS, skip_non_null_check=True):
        return None
    df = pd.read_csv(csv_path)
    df["param"] = df["param"].astype("Int64")
    return df


def best_speedups(df: pd.DataFrame) -> pd.DataFrame:
    """Highest speedup per (kernel, n) with the thread count that achieved it."""
    if df.empty:
        return df.copy()
    idx = df.groupby(["kernel", "n"])["speedup"].idxmax()
    return df.loc[idx, ["kernel", "n", "threads", "param", "median_seconds", "speedup"]].reset_index(drop=True)
