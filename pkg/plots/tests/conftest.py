import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

PLOTS_DIR = Path(__file__).resolve().parents[1]
REPO_ROOT = PLOTS_DIR.parent
if str(PLOTS_DIR) not in sys.path:
    sys.path.insert(0, str(PLOTS_DIR))


def run_cli(args, out_dir):
    """Invoke the simulation CLI as a subprocess: the only coupling allowed here."""
    env = {"PYTHONPATH": str(REPO_ROOT / "src")}
    cmd = [sys.executable, "-m", "gedanken.cli", *args, "--out", str(out_dir)]
    proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    return out_dir


@pytest.fixture(scope="session")
def recoiling_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("runs") / "recoiling"
    return run_cli(
        ["double-slit", "--set", 'mode="recoiling"', "--set", "kernel.s=1.17741"], out
    )


@pytest.fixture(scope="session")
def lp_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("runs") / "lp"
    return run_cli(["landau-peierls"], out)


@pytest.fixture(scope="session")
def sweep_runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("sweep")
    summaries = []
    for i, s in enumerate((0.4, 0.7, 1.0, 1.3, 1.6, 1.9)):
        out = base / f"s{i}"
        run_cli(
            ["double-slit", "--set", 'mode="recoiling"', "--set", f"kernel.s={s}"], out
        )
        summaries.append(out / "summary.json")
    return summaries


@pytest.fixture(scope="session")
def expected_overlap():
    def overlap(summary_path):
        config = json.loads(Path(summary_path).read_text())["config"]
        s = config["kernel"]["s"]
        a = config["aperture"]["separation"]
        return math.exp(-(s**2) * a**2 / 2.0)

    return overlap
