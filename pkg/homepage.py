import pandas as pd
import streamlit as st

from csvreports import load_results
from utilities import JOB_REPORT_FILE, RESULTS_FILE

STANDARD_MSG = "{} is not available - run the suite with `python cli.py bench`"

# which file feeds which tab
DATA_TIES = {
    "Benchmarks": [RESULTS_FILE],
    "Memory Hierarchy": [],
    "Shortest Paths": [],
    "MapReduce": [JOB_REPORT_FILE],
    "Warnings/Issues": [RESULTS_FILE],
}


def render(project: dict) -> None:
    """
    Home Page view.
    • Suite summary metrics from results.csv
    • Table of which file feeds which tab
    """
    df = load_results(project["folder"])
    if df is None:
        st.info(STANDARD_MSG.format(RESULTS_FILE))
        return

    c1, c2, c3, c4 = st.columns(4)
    c1.metric("Records", len(df))
    c2.metric("Kernels", df["kernel"].nunique())
    c3.metric("Sizes", ", ".join(str(n) for n in sorted(df["n"].unique())))
    c4.metric("Best speedup", f"{df['speedup'].max():.2f}x" if len(df) else "-")

    st.markdown("#### Kernels in this suite")
    summary = (df.groupby("kernel")
                 .agg(sizes=("n", "nunique"), thread_counts=("threads", "nunique"),
                      fastest_seconds=("median_seconds", "min"))
                 .reset_index())
    st.dataframe(summary, hide_index=True, use_container_width=True)

    data = [{"Tab Name": tab, "Files Utilized": fname or "computed live"}
            for tab, files in DATA_TIES.items() for fname in (files or [None])]
    st.markdown("#### Files used in each tab")
    st.dataframe(pd.DataFrame(data), hide_index=True, width=550)
