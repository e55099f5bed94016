# src/gplab/harness/__init__.py
from .config import EXPERIMENTS, ExperimentConfig, build, load, parse, parse_text, serialize
from .runner import DISPATCH, acceptance, run

__all__ = [
    "DISPATCH",
    "EXPERIMENTS",
    "ExperimentConfig",
    "acceptance",
    "build",
    "load",
    "parse",
    "parse_text",
    "run",
    "serialize",
]
