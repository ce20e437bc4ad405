import numpy as np
import pandas as pd
import plotly.express as px
import plotly.graph_objects as go

from kernelsrc.src.bench import LatencyModel, amdahl_bound, latency_table


def plot_speedups(df: pd.DataFrame, title="Speedup over the sequential kernel"):
    """Speedup vs thread count, one line per kernel, one column per problem size."""
    df = df.sort_values(["kernel", "n", "threads"])
    fig = px.line(
        df, x="threads", y="speedup", color="kernel", facet_col="n",
        markers=True, title=title,
        labels={"threads": "Threads", "speedup": "Speedup", "n": "n"},
    )
    fig.add_hline(y=1.0, line_dash="dot", line_color="grey")
    fig.update_xaxes(type="category")
    return fig


def plot_median_times(df: pd.DataFrame, title="Median wall time"):
    df = df.assign(config=df["kernel"] + " / t=" + df["threads"].astype(str))
    fig = px.bar(
        df, x="config", y="median_seconds", color="kernel", facet_col="n",
        title=title, labels={"config": "", "median_seconds": "Seconds"},
    )
    fig.update_layout(showlegend=False)
    fig.update_xaxes(tickangle=-45)
    return fig


def plot_amdahl(max_alpha=0.99, points=100, highlight=(0.5, 0.9)):
    alphas = np.linspace(0.0, max_alpha, points)
    bounds = [amdahl_bound(a) for a in alphas]
    fig = go.Figure(go.Scatter(x=alphas, y=bounds, mode="lines", name="1 / (1 - alpha)"))
    fig.add_trace(go.Scatter(
        x=list(highlight), y=[amdahl_bound(a) for a in highlight],
        mode="markers+text", text=[f"{amdahl_bound(a):.0f}x" for a in highlight],
        textposition="top left", name="",
    ))
    fig.update_layout(
        title="Amdahl bound on speedup",
        xaxis_title="Parallel fraction alpha", yaxis_title="Maximum speedup",
        yaxis_type="log", showlegend=False,
    )
    return fig


def plot_latency_ladder(model: LatencyModel = LatencyModel()):
    table = latency_table(model)
    # registers have a zero lower bound; keep them visible on a log axis
    lo = table["min_ns"].where(table["min_ns"] > 0, table["max_ns"] / 10)
    fig = go.Figure(go.Bar(
        x=table["level"], y=table["max_ns"] - lo, base=lo,
        hovertext=[f"{a:g} - {b:g} ns" for a, b in zip(table["min_ns"], table["max_ns"])],
        marker_color="steelblue",
    ))
    fig.update_layout(
        title=f"Access time per level at {model.clock_ghz} GHz",
        yaxis_type="log", yaxis_title="ns", xaxis_title="",
    )
    return fig


def plot_block_touches(df: pd.DataFrame):
    """df columns: n, variant, touches."""
    fig = px.line(df, x="n", y="touches", color="variant", markers=True,
                  title="Block touches (cache refill proxy)", log_y=True)
    return fig


def plot_task_timeline(attempts: pd.DataFrame):
    """Gantt-style chart of task attempts per worker in simulated ticks."""
    if attempts.empty:
        return go.Figure()
    df = attempts.assign(
        worker=attempts["worker"].map(lambda w: f"worker {w}"),
        outcome=np.where(attempts["contributing"], "kept", "discarded"),
        span=attempts["end_tick"] - attempts["start_tick"],
    )
    fig = px.bar(
        df, base="start_tick", x="span", y="worker", color="outcome", orientation="h",
        text="task", hover_data=["task", "attempt", "start_tick", "end_tick"],
        color_discrete_map={"kept": "steelblue", "discarded": "indianred"},
        title="Task attempts",
    )
    fig.update_layout(xaxis_title="Tick", yaxis_title="", barmode="overlay")
    fig.update_yaxes(categoryorder="category descending")
    return fig
