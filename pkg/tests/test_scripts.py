import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def _run(name, *args):
    res = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True,
                         text=True, timeout=300)
    assert res.returncode == 0, res.stderr
    return res.stdout


def test_convergence_script():
    out = _run("convergence.py", "--m-max", "3", "--s1", "2", "--s2", "2").splitlines()
    assert out[0] == "strategy,m,N,e2,upper,N_e2" and len(out) == 10


def test_tractability_script():
    out = _run("tractability.py")
    assert "power:1,2: strong" in out and "const:1: intractable (weak fails)" in out


def test_lower_bound_scan_script():
    rows = _run("lower_bound_scan.py").splitlines()[1:]
    small = [r for r in rows if r.startswith("0.25,")]
    assert small and all(r.endswith(",0") for r in small)
