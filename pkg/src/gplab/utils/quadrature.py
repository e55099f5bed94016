# src/gplab/utils/quadrature.py
"""Gauss–Legendre rules on intervals, shared by the time-window and simplex integrators."""
from __future__ import annotations

import functools

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]


@functools.lru_cache
def gauss_unit(order: int) -> tuple[FloatArray, FloatArray]:
    """Gauss–Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = 0.5 * (x + 1.0), 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_interval(a: float, b: float, order: int) -> tuple[FloatArray, FloatArray]:
    x, w = gauss_unit(order)
    return a + (b - a) * x, (b - a) * w
