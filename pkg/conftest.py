# Keeps the repository root importable for the root-level dashboard modules
# and the kernelsrc package when pytest runs from any directory.
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
