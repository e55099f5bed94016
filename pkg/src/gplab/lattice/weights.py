# src/gplab/lattice/weights.py
from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]


def japanese_bracket(coords: npt.ArrayLike) -> FloatArray:
    """⟨x⟩ = sqrt(1 + |x|^2) over the last axis."""
    arr = np.asarray(coords, dtype=np.float64)
    return np.sqrt(1.0 + np.sum(arr * arr, axis=-1))


def log_bracket_sq(keys: npt.ArrayLike) -> FloatArray:
    """Σ_slots log(1 + |ξ|^2) for keys of shape (n, slots, d)."""
    arr = np.asarray(keys, dtype=np.float64)
    return np.log1p(np.sum(arr * arr, axis=-1)).sum(axis=-1)


def sobolev_weights(keys: npt.ArrayLike, alpha: float, *, squared: bool = False) -> FloatArray:
    """Π_slots ⟨ξ⟩^α (or its square) per key."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    power = alpha if squared else 0.5 * alpha
    return np.exp(power * log_bracket_sq(keys))


def compensated_sum(values: npt.ArrayLike) -> float:
    """Sum with math.fsum; raises on overflow instead of returning inf."""
    arr = np.asarray(values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise FloatingPointError("non-finite term in weighted sum (overflow in the weights?)")
    return math.fsum(arr.tolist())


def weighted_sq_sum(keys: npt.ArrayLike, values: npt.ArrayLike, alpha: float) -> float:
    vals = np.asarray(values)
    if vals.size == 0:
        return 0.0
    w2 = sobolev_weights(keys, alpha, squared=True)
    return compensated_sum(w2 * np.abs(vals) ** 2)
