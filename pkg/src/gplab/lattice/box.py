# src/gplab/lattice/box.py
from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from ..config.defaults import MAX_DIMENSION, Freq
from ..errors import OutOfBoxError

IntArray = npt.NDArray[np.int64]


def as_freq(x: int | Sequence[int], d: int) -> Freq:
    """Normalize an int (d = 1 only) or an integer sequence to a Freq tuple."""
    if isinstance(x, (int, np.integer)):
        if d != 1:
            raise ValueError(f"bare integer frequency {x} needs d = 1, got d = {d}")
        return (int(x),)
    out = tuple(int(c) for c in x)
    if len(out) != d:
        raise ValueError(f"frequency {out} has length {len(out)}, expected d = {d}")
    return out


@dataclass(frozen=True)
class LatticeBox:
    """The truncated lattice {ξ ∈ Z^d : |ξ_i| <= K for every i}."""

    d: int
    K: int

    def __post_init__(self) -> None:
        if not 1 <= self.d <= MAX_DIMENSION:
            raise ValueError(f"d must be in 1..{MAX_DIMENSION}, got {self.d}")
        if self.K < 0:
            raise ValueError(f"cutoff K must be >= 0, got {self.K}")

    @property
    def side(self) -> int:
        return 2 * self.K + 1

    @property
    def size(self) -> int:
        return self.side**self.d

    @cached_property
    def _frequencies(self) -> IntArray:
        axis = range(-self.K, self.K + 1)
        pts = np.array(list(itertools.product(axis, repeat=self.d)), dtype=np.int64)
        pts.setflags(write=False)
        return pts

    def frequencies(self) -> IntArray:
        """All (2K+1)^d frequencies, shape (size, d), in flat-index order."""
        return self._frequencies

    def contains(self, coords: npt.ArrayLike) -> npt.NDArray[np.bool_]:
        arr = np.asarray(coords, dtype=np.int64)
        return np.all(np.abs(arr) <= self.K, axis=-1)

    def check(self, coords: npt.ArrayLike) -> None:
        """Raise OutOfBoxError naming the first offending frequency."""
        arr = np.asarray(coords, dtype=np.int64).reshape(-1, self.d)
        bad = ~self.contains(arr)
        if bad.any():
            raise OutOfBoxError(arr[np.argmax(bad)].tolist(), self.K)

    def index(self, coords: npt.ArrayLike) -> IntArray:
        """Flat index in [0, size) of each frequency along the last axis."""
        arr = np.asarray(coords, dtype=np.int64) + self.K
        out = np.zeros(arr.shape[:-1], dtype=np.int64)
        for axis in range(self.d):
            out = out * self.side + arr[..., axis]
        return out

    def enlarged(self, K: int) -> LatticeBox:
        if K < self.K:
            raise ValueError(f"cannot shrink box from K={self.K} to K={K}")
        return LatticeBox(self.d, K)
