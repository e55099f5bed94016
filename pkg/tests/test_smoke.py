# tests/test_smoke.py
import os
import subprocess
import sys
from pathlib import Path

import pytest

import gplab
from gplab.harness import ExperimentConfig, run


def test_public_api_imports():
    assert isinstance(gplab.__version__, str)
    for name in gplab.__all__:
        assert hasattr(gplab, name), name


@pytest.mark.parametrize(
    "module",
    ["gplab", "gplab.randomization.experiments", "gplab.duhamel.experiments", "gplab.harness.cli"],
)
def test_fresh_interpreter_import(module):
    src = str(Path(gplab.__file__).resolve().parents[1])
    env = {**os.environ, "PYTHONPATH": os.pathsep.join([src, os.environ.get("PYTHONPATH", "")])}
    result = subprocess.run(
        [sys.executable, "-c", f"import {module}"], env=env, capture_output=True, text=True, check=False
    )
    assert result.returncode == 0, result.stderr


def test_tiny_experiment_smoke():
    report = run(ExperimentConfig(experiment="cor2-tail", cutoffs=[2], samples=4, nnz=6), write=False)
    assert report is not None
    assert len(report.rows) > 0
