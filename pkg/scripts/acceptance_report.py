"""Run the acceptance gate and print one line per criterion.

    python3 scripts/acceptance_report.py
"""

import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parents[1]
sys.exit(subprocess.call([sys.executable, str(root / "tests" / "test_acceptance.py")], cwd=root))
