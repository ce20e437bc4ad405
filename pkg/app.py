import streamlit as st

import homepage
import benchmarks
import memoryhierarchy
import shortestpaths
import mapreduceview
import issueswarnings

from kernelsrc.defaults import SUITE_PROFILES
from kernelsrc.src.bench import SuiteSpec, run_suite
from utilities import REPORTS_ROOT, discover_suites, logger, suite_results_path


st.set_page_config(page_title="Kernel Benchmarks", page_icon="🧮", layout="wide")

VIEW_HANDLERS = {
    "Home Page": homepage.render,
    "Benchmarks": benchmarks.render,
    "Memory Hierarchy": memoryhierarchy.render,
    "Shortest Paths": shortestpaths.render,
    "MapReduce": mapreduceview.render,
    "Warnings/Issues": issueswarnings.render,
}


def init_session():
    """Ensure all required session_state keys exist."""
    st.session_state['projectlist'] = discover_suites(REPORTS_ROOT)
    if 'currproject' not in st.session_state:
        st.session_state['currproject'] = None


def run_profile(profile: str):
    spec = SuiteSpec.from_profile(profile)
    out = suite_results_path(spec.name, REPORTS_ROOT)
    with st.spinner(f"Running suite '{profile}'..."):
        run_suite(spec, out)
    logger.info(f"suite {profile} written to {out}")
    st.rerun()


def panel():

    projectlist = st.session_state.get("projectlist", [])

    # --- No suites yet: welcome page with a single CTA ---
    if not projectlist:
        st.title("Welcome 👋")
        st.caption(f"No benchmark results found under `{REPORTS_ROOT}/`. "
                   "Run a suite here or with `python cli.py bench --suite <profile>`.")
        left, mid, right = st.columns([1, 2, 1])
        with mid:
            profile = st.selectbox("Suite profile", list(SUITE_PROFILES), index=0)
            if st.button("Run suite", icon="▶️", use_container_width=True):
                run_profile(profile)
        st.stop()

    # --- Suites exist: sidebar selector ---
    with st.sidebar:
        st.header("Benchmark Suites")
        projectnames = [p['name'] for p in projectlist]
        currproject = st.radio("Select Suite", options=projectnames)
        st.session_state['currproject'] = currproject

        st.divider()
        st.caption("Run another suite")
        profile = st.selectbox("Suite profile", list(SUITE_PROFILES), index=0)
        if st.button("Run suite", icon="▶️", use_container_width=True):
            run_profile(profile)


def show_tab(tab_name, project):
    handler = VIEW_HANDLERS.get(tab_name)
    if handler is None:
        st.info(f"No view registered for {tab_name}")
        return
    handler(project)


def main():
    projectlist = st.session_state['projectlist']
    currproject = st.session_state['currproject']
    project = [p for p in projectlist if p['name'] == currproject][0]

    st.header(project["name"], divider='violet')
    if project['views'] != []:
        VIEWTABS = st.tabs(project['views'])
        for i, tab in enumerate(VIEWTABS):
            with tab:
                show_tab(project["views"][i], project)


if __name__ == "__main__":
    init_session()
    panel()
    main()
