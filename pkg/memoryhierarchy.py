import streamlit as st

from csvreports import load_results
from kernelsrc.makeplots import plot_amdahl, plot_latency_ladder
from kernelsrc.src.bench import LatencyModel, amdahl_bound, implied_parallel_fraction, latency_table


def render(project: dict) -> None:
    """
    Memory Hierarchy tab. The latency numbers come from the cycle table and
    the clock rate, not from measurement.
    """
    st.markdown("#### Access time per memory level")
    clock = st.number_input("Clock (GHz)", min_value=0.1, max_value=10.0, value=LatencyModel().clock_ghz, step=0.01)
    model = LatencyModel(clock_ghz=clock)
    st.caption(f"1 cycle = {model.ns_per_cycle:.3f} ns")

    colA, colB = st.columns([0.45, 0.55])
    with colA:
        st.dataframe(latency_table(model), hide_index=True, use_container_width=True)
    with colB:
        st.plotly_chart(plot_latency_ladder(model), use_container_width=True)

    st.divider()
    st.markdown("#### Amdahl bound")
    alpha = st.slider("Parallel fraction", min_value=0.0, max_value=0.99, value=0.9, step=0.01)
    st.metric("Maximum speedup", f"{amdahl_bound(alpha):.2f}x")
    st.plotly_chart(plot_amdahl(), use_container_width=True)

    df = load_results(project["folder"])
    if df is None:
        return
    par = df[df["threads"] > 1].copy()
    if par.empty:
        return
    par["implied_parallel_fraction"] = [
        implied_parallel_fraction(s, t) for s, t in zip(par["speedup"], par["threads"])
    ]
    st.markdown("#### Parallel fraction implied by measured speedups")
    st.dataframe(par[["kernel", "n", "threads", "speedup", "implied_parallel_fraction"]],
                 hide_index=True, use_container_width=True)
