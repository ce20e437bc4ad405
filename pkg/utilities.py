from pathlib import Path

import logging
# Basic configuration for logging to the console
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

# Get a logger instance
logger = logging.getLogger()

REPORTS_ROOT = "reports"
RESULTS_FILE = "results.csv"
JOB_REPORT_FILE = "mapreduce_tasks.csv"

VIEW_OPTIONS = ["Home Page", "Benchmarks", "Memory Hierarchy", "Shortest Paths", "MapReduce", "Warnings/Issues"]


def suite_folder_name(name: str) -> str:
    """'Smoke Suite' -> 'smoke_suite'"""
    return name.strip().lower().replace(" ", "_")


def suite_results_path(name: str, root: str | Path = REPORTS_ROOT) -> Path:
    return Path(root) / suite_folder_name(name) / RESULTS_FILE


def discover_suites(root: str | Path = REPORTS_ROOT) -> list[dict]:
    """
    One project dict per suite folder under `root` that holds a results CSV:
      {'id', 'name', 'description', 'views', 'folder'}
    """
    root = Path(root)
    if not root.is_dir():
        return []
    projects = []
    for idx, csv_path in enumerate(sorted(root.glob(f"*/{RESULTS_FILE}")), start=1):
        folder = csv_path.parent
        name = folder.name.replace("_", " ").title()
        projects.append({
            "id": idx,
            "name": name,
            "description": f"Benchmark suite in {folder}",
            "views": list(VIEW_OPTIONS),
            "folder": str(folder),
        })
    logger.info(f"discovered {len(projects)} suite(s) under {root}")
    return projects

