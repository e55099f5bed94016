# src/gplab/operators/evolution.py
from __future__ import annotations

import numpy as np
import numpy.typing as npt

from ..lattice.density import DensityMatrix
from ..lattice.modes import ModeFunction
from ..lattice.weights import sobolev_weights


def energies(keys: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Σ|ξ_j|² − Σ|ξ'_j|² per key of shape (n, 2k, d)."""
    arr = np.asarray(keys, dtype=np.int64)
    m = arr.shape[1] // 2
    sq = np.sum(arr * arr, axis=-1)
    return (sq[:, :m].sum(axis=1) - sq[:, m:].sum(axis=1)).astype(np.float64)


def free_evolve(gamma: DensityMatrix, t: float) -> DensityMatrix:
    """U^(k)(t): multiply by exp(−it(Σ|ξ|² − Σ|ξ'|²))."""
    if t == 0:
        return gamma
    phase = np.exp(-1j * float(t) * energies(gamma.keys))
    return gamma.with_values(gamma.values * phase)


def apply_fractional_derivative(gamma: DensityMatrix, alpha: float) -> DensityMatrix:
    """S^(k,α): multiply by Π⟨ξ_j⟩^α⟨ξ'_j⟩^α."""
    return gamma.with_values(gamma.values * sobolev_weights(gamma.keys, alpha))


def free_evolve_modes(phi: ModeFunction, t: float) -> ModeFunction:
    """e^{itΔ}φ on the Fourier side."""
    sq = np.sum(phi.keys * phi.keys, axis=-1).astype(np.float64)
    return phi.with_values(phi.values * np.exp(-1j * float(t) * sq))
