import os

import graphviz
import streamlit as st

from kernelsrc.makeplots import plot_task_timeline
from kernelsrc.src.errors import NoWorkersAvailableError
from kernelsrc.src.mapreduce import JobConfig, JobReport, parse_fault_plan
from kernelsrc.src.matmul import matmul_naive
from kernelsrc.src.generators import gen_matrix
from kernelsrc.src.mr_matmul import mr_matmul_with_report
from utilities import JOB_REPORT_FILE, logger


def render(project: dict) -> None:
    """
    MapReduce tab: runs a small matrix-multiplication job with an optional
    fault plan and shows how tasks moved between workers.
    """
    c1, c2, c3, c4 = st.columns(4)
    n = c1.number_input("n", min_value=1, max_value=128, value=16, step=1)
    reducers = c2.selectbox("Reduce tasks", [1, 4, 16], index=1)
    workers = c3.number_input("Workers", min_value=1, max_value=16, value=4, step=1)
    seed = c4.number_input("Seed", min_value=0, value=0, step=1)

    c5, c6, c7 = st.columns(3)
    fault_text = c5.text_input("Fault plan (worker:after_k_tasks,...)", value="1:2")
    interval = c6.number_input("Checkpoint every k completions", min_value=0, value=0, step=1)
    kill = c7.number_input("Kill master at checkpoint (0 = never)", min_value=0, value=0, step=1)

    try:
        cfg = JobConfig(
            num_workers=int(workers), fault_plan=parse_fault_plan(fault_text),
            checkpoint_interval=int(interval), kill_master_at_checkpoint=int(kill) or None, seed=int(seed),
        )
    except ValueError as e:
        st.error(str(e), icon="❗")
        return

    a, b = gen_matrix(int(n), int(seed)), gen_matrix(int(n), int(seed) + 1)
    try:
        c, report = mr_matmul_with_report(a, b, int(reducers), cfg)
    except NoWorkersAvailableError as e:
        st.error(f"Job aborted: {e}", icon="❗")
        return

    if c == matmul_naive(a, b)[0]:
        st.success("Product matches the naive kernel", icon="✅")
    else:
        st.error("Product differs from the naive kernel", icon="❗")

    m1, m2, m3, m4 = st.columns(4)
    m1.metric("Reassignments", report.total_reassignments)
    m2.metric("Worker failures", len(report.failure_events))
    m3.metric("Checkpoints", report.checkpoints_written)
    m4.metric("Master recoveries", report.master_recoveries)

    st.plotly_chart(plot_task_timeline(report.attempts_frame()), use_container_width=True)
    st.graphviz_chart(assignment_graph(report), use_container_width=True)

    exp = st.expander("View task report", icon="📋")
    exp.dataframe(report.to_frame(), hide_index=True, use_container_width=True)
    exp.code(report.to_text())

    out = os.path.join(project["folder"], JOB_REPORT_FILE)
    report.to_csv(out)
    logger.info(f"job report written to {out}")


def assignment_graph(report: JobReport) -> graphviz.Digraph:
    """Task -> worker edges, one per attempt; discarded attempts are dashed."""
    dot = graphviz.Digraph(comment="Assignments", strict=False)
    dot.attr(rankdir="LR")
    failed = {e.worker for e in report.failure_events}
    for w in sorted({w for t in report.tasks for w in t.history}):
        dot.node(f"w{w}", f"worker {w}", shape="box",
                 style="filled", fillcolor="indianred" if w in failed else "lightsteelblue")
    for t in report.tasks:
        dot.node(t.task_id, t.task_id, shape="ellipse")
        for attempt, w in enumerate(t.history, start=1):
            kept = t.contributing_attempt == attempt
            dot.edge(t.task_id, f"w{w}", label=str(attempt), style="solid" if kept else "dashed")
    return dot
