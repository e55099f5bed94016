# src/gplab/config/defaults.py
from __future__ import annotations

from dataclasses import dataclass
from typing import TypeAlias

Freq: TypeAlias = tuple[int, ...]
Key: TypeAlias = tuple[tuple[Freq, ...], tuple[Freq, ...]]

MAX_DIMENSION = 3
GAUSS_ORDER = 6
MAX_GAUSS_DEPTH = 6          # nested Gauss beyond this depth falls back to Monte Carlo
ENUMERATION_CAP = 24          # distinct sign variables for 2^M enumeration
DENSE_ENSEMBLE_CAP = 4_000_000
OUTPUT_ENV_VAR = "GPLAB_OUTPUT_DIR"
OUTPUT_DIR = "results"
FORMAT_TAG = "gplab density-matrix v1"


@dataclass(frozen=True)
class Defaults:
    MAX_DIMENSION: int = MAX_DIMENSION
    GAUSS_ORDER: int = GAUSS_ORDER
    MAX_GAUSS_DEPTH: int = MAX_GAUSS_DEPTH
    ENUMERATION_CAP: int = ENUMERATION_CAP
    DENSE_ENSEMBLE_CAP: int = DENSE_ENSEMBLE_CAP
    OUTPUT_ENV_VAR: str = OUTPUT_ENV_VAR
    OUTPUT_DIR: str = OUTPUT_DIR
    FORMAT_TAG: str = FORMAT_TAG
    # slots at which the time integral is sampled for sup-norms
    TIME_POINTS: int = 5
    # chunk of quadrature nodes held in memory at once (columns)
    NODE_CHUNK: int = 128


DEFAULTS = Defaults()
