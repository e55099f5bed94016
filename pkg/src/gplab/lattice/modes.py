# src/gplab/lattice/modes.py
from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from typing import Any

import numpy as np
import numpy.typing as npt

from ..config.defaults import Freq
from .box import LatticeBox, as_freq
from .density import DensityMatrix, group_rows, sum_groups
from .weights import weighted_sq_sum


class ModeFunction:
    """Fourier coefficients φ̂(ξ) of a one-particle function, sparse and canonical."""

    __slots__ = ("box", "keys", "values")

    def __init__(self, box: LatticeBox, keys: npt.ArrayLike, values: npt.ArrayLike) -> None:
        karr = np.asarray(keys, dtype=np.int64).reshape(-1, 1, box.d)
        varr = np.asarray(values, dtype=np.complex128).reshape(-1)
        box.check(karr)
        first, inverse = group_rows(box, karr)
        summed = sum_groups(inverse, varr, first.shape[0])
        keep = summed != 0
        self.box = box
        self.keys = karr[first][keep].reshape(-1, box.d)
        self.values = summed[keep]
        self.keys.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_mapping(cls, box: LatticeBox, coeffs: Mapping[Any, complex]) -> ModeFunction:
        keys = [as_freq(f, box.d) for f in coeffs]
        return cls(box, np.array(keys, dtype=np.int64), list(coeffs.values()))

    @classmethod
    def from_dense(cls, box: LatticeBox, dense: npt.ArrayLike) -> ModeFunction:
        arr = np.asarray(dense, dtype=np.complex128).reshape(-1)
        if arr.shape[0] != box.size:
            raise ValueError(f"dense array has {arr.shape[0]} entries, box has {box.size}")
        nz = np.flatnonzero(arr)
        return cls(box, box.frequencies()[nz], arr[nz])

    def to_dense(self) -> npt.NDArray[np.complex128]:
        """Array of shape (2K+1,)*d indexed by coords + K."""
        out = np.zeros(self.box.size, dtype=np.complex128)
        out[self.box.index(self.keys)] = self.values
        return out.reshape((self.box.side,) * self.box.d)

    @property
    def nnz(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, freq: Any) -> complex:
        f = np.array(as_freq(freq, self.box.d), dtype=np.int64)
        hit = np.flatnonzero(np.all(self.keys == f[None], axis=1))
        return complex(self.values[hit[0]]) if hit.size else 0j

    def items(self) -> Iterator[tuple[Freq, complex]]:
        for f, v in zip(self.keys.tolist(), self.values.tolist(), strict=True):
            yield tuple(f), complex(v)

    def with_values(self, values: npt.ArrayLike) -> ModeFunction:
        return ModeFunction(self.box, self.keys, values)

    def weighted_norm(self, alpha: float) -> float:
        return math.sqrt(weighted_sq_sum(self.keys[:, None, :], self.values, alpha))

    def mass(self) -> float:
        return self.weighted_norm(0.0) ** 2

    def __repr__(self) -> str:
        return f"ModeFunction(d={self.box.d}, K={self.box.K}, nnz={self.nnz})"


def factorized(phi: ModeFunction, k: int) -> DensityMatrix:
    """|φ⟩⟨φ|^{⊗k}: γ̂(ξ⃗; ξ⃗') = Π φ̂(ξ_j) Π conj(φ̂(ξ'_j))."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = phi.nnz
    if n == 0:
        return DensityMatrix.empty(phi.box, k)
    grids = np.meshgrid(*([np.arange(n)] * (2 * k)), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=1)
    keys = phi.keys[idx]
    values = np.prod(phi.values[idx[:, :k]], axis=1) * np.prod(
        np.conj(phi.values[idx[:, k:]]), axis=1
    )
    return DensityMatrix(phi.box, k, keys, values)
