import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("argv", [["capacity_table.py"], ["single_run.py", "--n", "20000"]])
def test_demo_runs(argv):
    proc = subprocess.run([sys.executable, str(DEMOS / argv[0]), *argv[1:]],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout
