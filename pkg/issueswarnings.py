import pandas as pd
import streamlit as st

from csvreports import load_results
from kernelsrc.src.bench import FAMILY_BASELINE, KERNELS

STANDARD_MSG = "results.csv is not available - run the suite with `python cli.py bench`"

SECTIONS = ("results", "speedups")


# ────────────────────────────────────────────────────────────────
#  PUBLIC ENTRY POINT
# ────────────────────────────────────────────────────────────────
def render(project: dict) -> None:
    st.markdown("## Warnings / Issues")
    for section in SECTIONS:
        issuesinfo(project, section)
        st.divider()


# ────────────────────────────────────────────────────────────────
#  DISPLAY
# ────────────────────────────────────────────────────────────────
def issuesinfo(project: dict, section: str) -> None:
    cont = st.container(border=True)
    df = load_results(project["folder"])
    if df is None:
        cont.info(STANDARD_MSG)
        return
    issues = create_issues(df)[section]

    title = {
        "results":  "Result File Checks",
        "speedups": "Speedup Checks",
    }[section]
    cont.markdown(f"### {title}")

    if not issues:
        ok = {
            "results":  "All records are complete and well formed",
            "speedups": "No parallel slowdowns detected",
        }[section]
        cont.success(ok, icon="✅")
        return

    for iss in issues:
        if iss["type"] == "warning":
            cont.warning(iss["message"], icon="⚠️")
        else:
            cont.error(iss["message"], icon="❗")


# ────────────────────────────────────────────────────────────────
#  CORE LOGIC
# ────────────────────────────────────────────────────────────────
def create_issues(df: pd.DataFrame) -> dict:
    # ------------------------------------------------------------------ #
    # 1)  RESULT-FILE ISSUES
    # ------------------------------------------------------------------ #
    res_issues = []

    unknown = sorted(set(df["kernel"]) - set(KERNELS))
    for k in unknown:
        res_issues.append({"type": "error", "message": f"Unknown kernel id {k}"})

    bad_time = df[~(df["median_seconds"] > 0)]
    for _, row in bad_time.iterrows():
        res_issues.append(
            {"type": "error",
             "message": f"{row['kernel']} n={row['n']} threads={row['threads']} has non-positive median time"}
        )

    few = df[df["repeats"] < 3]
    if len(few):
        res_issues.append(
            {"type": "warning", "message": f"{len(few)} record(s) use fewer than 3 repeats; medians are noisy"}
        )

    # ------------------------------------------------------------------ #
    # 2)  SPEEDUP ISSUES
    # ------------------------------------------------------------------ #
    sp_issues = []
    known = df[df["kernel"].isin(KERNELS)]
    baselines = set(FAMILY_BASELINE.values())

    slow = known[(known["threads"] > 1) & (known["speedup"] < 1.0)]
    for _, row in slow.iterrows():
        sp_issues.append(
            {"type": "warning",
             "message": f"{row['kernel']} n={row['n']} with {row['threads']} threads is slower than the "
                        f"sequential kernel (speedup {row['speedup']:.2f})"}
        )

    for _, row in known[known["kernel"].isin(baselines)].iterrows():
        if abs(row["speedup"] - 1.0) > 1e-9:
            sp_issues.append(
                {"type": "error",
                 "message": f"Baseline {row['kernel']} n={row['n']} has speedup {row['speedup']:.3f}, expected 1"}
            )

    return {"results": res_issues, "speedups": sp_issues}
