import streamlit as st

from csvreports import best_speedups, load_results
from issueswarnings import issuesinfo
from kernelsrc.makeplots import plot_median_times, plot_speedups

STANDARD_MSG = "results.csv is not available - run the suite with `python cli.py bench`"


def render(project: dict) -> None:
    """
    Benchmarks tab: speedup curves, median times and the raw records.
    """
    df = load_results(project["folder"])
    if df is None or df.empty:
        st.info(STANDARD_MSG)
        return

    colA, colB = st.columns(2)
    with colA:
        kernels = st.multiselect("Kernels", sorted(df["kernel"].unique()), default=sorted(df["kernel"].unique()))
    with colB:
        sizes = st.multiselect("Sizes", sorted(df["n"].unique()), default=sorted(df["n"].unique()))

    sub = df[df["kernel"].isin(kernels) & df["n"].isin(sizes)]
    if sub.empty:
        st.info("Nothing selected")
        return

    st.plotly_chart(plot_speedups(sub), use_container_width=True)
    st.plotly_chart(plot_median_times(sub), use_container_width=True)

    st.markdown("#### Best speedup per kernel and size")
    st.dataframe(best_speedups(sub), hide_index=True, use_container_width=True)

    exp = st.expander("View all records", icon="📊")
    exp.dataframe(sub, hide_index=True, use_container_width=True)

    issuesinfo(project, "speedups")
