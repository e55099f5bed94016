# src/gplab/duhamel/sequences.py
"""A priori data γ^(m)(t) fed to the Duhamel terms.

A sequence only has to answer two questions per order: on which keys can the
matrix be nonzero (``support``), and what are the coefficients there at a batch
of times (``values``). It does not have to solve the hierarchy.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import TYPE_CHECKING, Protocol

import numpy as np
import numpy.typing as npt

from ..config.defaults import DENSE_ENSEMBLE_CAP
from ..config.params import EnsembleProfile
from ..errors import CapacityError, MissingOrderError
from ..lattice.box import IntArray, LatticeBox
from ..lattice.density import DensityMatrix, weighted_norm
from ..lattice.ensemble import random_ensemble
from ..randomization.fields import SignField, split_seed

if TYPE_CHECKING:
    from ..nls.solver import NlsTrajectory

ComplexArray = npt.NDArray[np.complex128]


class GammaSequence(Protocol):
    box: LatticeBox

    def support(self, order: int) -> IntArray: ...

    def values(self, order: int, times: npt.NDArray[np.float64]) -> ComplexArray: ...

    def at(self, order: int, t: float) -> DensityMatrix: ...


class FrozenSequence:
    """Time-independent matrices, one per order."""

    def __init__(self, mats: Mapping[int, DensityMatrix]) -> None:
        if not mats:
            raise ValueError("a frozen sequence needs at least one order")
        boxes = {g.box for g in mats.values()}
        if len(boxes) != 1:
            raise ValueError(f"all orders must share one box, got {sorted(map(str, boxes))}")
        for m, g in mats.items():
            if g.order != m:
                raise ValueError(f"matrix stored under order {m} has order {g.order}")
        self.box: LatticeBox = boxes.pop()
        self._mats = dict(mats)

    @property
    def orders(self) -> list[int]:
        return sorted(self._mats)

    def at(self, order: int, t: float = 0.0) -> DensityMatrix:
        try:
            return self._mats[order]
        except KeyError:
            raise MissingOrderError(f"sequence has no order {order} (orders {self.orders})") from None

    def support(self, order: int) -> IntArray:
        return self.at(order).keys

    def values(self, order: int, times: npt.NDArray[np.float64]) -> ComplexArray:
        return self.at(order).values[:, None]

    def embedded(self, box: LatticeBox) -> FrozenSequence:
        return FrozenSequence({m: g.embed(box) for m, g in self._mats.items()})

    def a_priori_constant(self, alpha: float) -> float:
        """Smallest C₁ with ‖S^(m,α)γ^(m)‖ <= C₁^m for every stored order."""
        return max(weighted_norm(g, alpha) ** (1.0 / m) for m, g in self._mats.items())

    def calibrated(self, alpha: float, c1: float) -> FrozenSequence:
        """Each nonzero γ^(m) rescaled so that ‖S^(m,α)γ^(m)‖ = C₁^m."""
        out = {}
        for m, g in self._mats.items():
            norm = weighted_norm(g, alpha)
            out[m] = g * (c1**m / norm) if norm > 0 else g
        return FrozenSequence(out)

    @classmethod
    def from_ensemble(
        cls,
        orders: Iterable[int],
        box: LatticeBox,
        seed: int,
        profile: EnsembleProfile | None = None,
    ) -> FrozenSequence:
        orders = list(orders)
        seeds = split_seed(seed, len(orders))
        return cls({m: random_ensemble(m, box, s, profile) for m, s in zip(orders, seeds, strict=True)})


class FactorizedSequence:
    """γ^(m)(t) = |ψ(t)⟩⟨ψ(t)|^{⊗m} along an NLS trajectory, ψ = T^ω φ when a field is given."""

    def __init__(self, trajectory: NlsTrajectory, field: SignField | None = None) -> None:
        self.trajectory = trajectory
        self.box: LatticeBox = trajectory.box
        freqs = self.box.frequencies()
        self._signs = (
            np.ones(self.box.size) if field is None else field.signs(freqs).astype(np.float64)
        )
        live = np.any(trajectory.states != 0, axis=0)
        self._support = np.flatnonzero(live)

    def _psi(self, times: npt.NDArray[np.float64]) -> ComplexArray:
        rows = [self.trajectory.flat_at(float(t)) for t in np.atleast_1d(times)]
        return np.asarray(rows) * self._signs[None, :]

    def support(self, order: int) -> IntArray:
        n = self._support.shape[0]
        if n == 0:
            return np.zeros((0, 2 * order, self.box.d), dtype=np.int64)
        count = n ** (2 * order)
        if count > DENSE_ENSEMBLE_CAP:
            raise CapacityError(f"{count} factorized keys at order {order}")
        grids = np.meshgrid(*([self._support] * (2 * order)), indexing="ij")
        flat = np.stack([g.ravel() for g in grids], axis=1)
        return self.box.frequencies()[flat]

    def values(self, order: int, times: npt.NDArray[np.float64]) -> ComplexArray:
        keys = self.support(order)
        flat = self.box.index(keys)
        psi = self._psi(times)
        vals = np.ones((psi.shape[0], flat.shape[0]), dtype=np.complex128)
        for s in range(order):
            vals *= psi[:, flat[:, s]]
        for s in range(order, 2 * order):
            vals *= np.conj(psi[:, flat[:, s]])
        return vals.T

    def at(self, order: int, t: float) -> DensityMatrix:
        return DensityMatrix(self.box, order, self.support(order), self.values(order, np.array([t]))[:, 0])

