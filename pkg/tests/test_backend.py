import importlib
import os
import subprocess
import sys

import slotmc


def _backend_with(env_value):
    env = dict(os.environ, SLOTMC_PURE_PYTHON=env_value)
    proc = subprocess.run([sys.executable, "-c", "import slotmc; print(slotmc.BACKEND)"],
                          capture_output=True, text=True, env=env, check=True)
    return proc.stdout.strip()


def test_env_forces_python_backend():
    assert _backend_with("1") == "python"


def test_default_backend_prefers_compiled():
    assert slotmc.BACKEND in ("compiled", "python")
    try:
        importlib.import_module("slotmc._kernels")
        expected = "compiled"
    except ImportError:
        expected = "python"
    assert _backend_with("0") == expected


def test_python_backend_cli_matches(tmp_path):
    args = [sys.executable, "-m", "slotmc", "simulate", "-B", "6", "-N", "4", "--runs", "300", "--seed", "3",
            "--format", "json"]
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, SLOTMC_PURE_PYTHON=flag)
        outs.append(subprocess.run(args, capture_output=True, text=True, env=env, check=True).stdout)
    assert outs[0] == outs[1]
