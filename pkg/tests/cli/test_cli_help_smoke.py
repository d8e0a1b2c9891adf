import subprocess
import sys


def test_cli_help_runs():
    cmd = [sys.executable, "-m", "sinhgordon_tau", "--help"]
    p = subprocess.run(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, timeout=60)
    assert p.returncode == 0
    for sub in ("solve", "tau", "connect", "verify", "sweep", "f2"):
        assert sub in p.stdout


def test_subcommand_required():
    p = subprocess.run(
        [sys.executable, "-m", "sinhgordon_tau"], stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, timeout=60
    )
    assert p.returncode == 2
