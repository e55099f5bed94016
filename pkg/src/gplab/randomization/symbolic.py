# src/gplab/randomization/symbolic.py
"""Density matrices whose coefficients are polynomials in the signs h_ξ(ω).

Every stored row is (key, monomial, value). A monomial is a set of sign
variables packed as a XOR bitmask over uint64 words; since h² = 1 a product of
signs only depends on the parity of each variable. Variable ``v`` stands for
frequency ``box.frequencies()[v % box.size]`` in namespace ``v // box.size``.
Namespace 0 is the shared field; namespace m is ω_m for independent levels.
"""
from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..lattice.box import IntArray, LatticeBox
from ..lattice.density import DensityMatrix, group_rows, sum_groups
from ..lattice.weights import compensated_sum, sobolev_weights
from ..operators.collision import CollisionIndex, push_forward
from ..operators.evolution import energies
from .fields import SignField

MonoArray = npt.NDArray[np.uint64]

_WORD = 64


def words_for(box: LatticeBox, namespaces: int) -> int:
    return math.ceil(namespaces * box.size / _WORD)


def widen(monos: MonoArray, width: int) -> MonoArray:
    if monos.shape[1] >= width:
        return monos
    pad = np.zeros((monos.shape[0], width - monos.shape[1]), dtype=np.uint64)
    return np.concatenate([monos, pad], axis=1)


def toggle(monos: MonoArray, box: LatticeBox, freqs: IntArray, namespace: int) -> MonoArray:
    """Multiply row r by h_{freqs[r]} in `namespace` (flip one bit per row)."""
    width = max(monos.shape[1], words_for(box, namespace + 1))
    out = widen(monos, width).copy()
    var = namespace * box.size + box.index(freqs)
    word = var // _WORD
    bit = np.left_shift(np.uint64(1), (var % _WORD).astype(np.uint64))
    rows = np.arange(out.shape[0])
    out[rows, word] ^= bit
    return out


def popcount_parity(x: MonoArray) -> npt.NDArray[np.int64]:
    """Parity of the number of set bits, per row."""
    y = np.bitwise_xor.reduce(x, axis=1) if x.ndim == 2 else x.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        y = y ^ (y >> np.uint64(shift))
    return (y & np.uint64(1)).astype(np.int64)


class RandomDensityMatrix:
    """Σ_rows value · Π_{v ∈ mono} h_v · e_key, canonical in (key, mono)."""

    __slots__ = ("box", "keys", "monos", "order", "values")

    def __init__(
        self,
        box: LatticeBox,
        order: int,
        keys: npt.ArrayLike,
        monos: npt.ArrayLike,
        values: npt.ArrayLike,
        *,
        canonical: bool = False,
    ) -> None:
        karr = np.asarray(keys, dtype=np.int64).reshape(-1, 2 * order, box.d)
        varr = np.asarray(values, dtype=np.complex128).reshape(-1)
        marr = np.asarray(monos, dtype=np.uint64)
        if marr.ndim != 2 or marr.shape[0] != karr.shape[0]:
            raise ValueError(f"monomials of shape {marr.shape} do not match {karr.shape[0]} keys")
        if not canonical:
            first, inverse = group_rows(box, karr, marr)
            summed = sum_groups(inverse, varr, first.shape[0])
            keep = summed != 0
            karr, marr, varr = karr[first][keep], marr[first][keep], summed[keep]
        self.box = box
        self.order = order
        self.keys = karr
        self.monos = marr
        self.values = varr

    @classmethod
    def from_density(cls, gamma: DensityMatrix) -> RandomDensityMatrix:
        monos = np.zeros((gamma.nnz, 0), dtype=np.uint64)
        return cls(gamma.box, gamma.order, gamma.keys, monos, gamma.values, canonical=True)

    @classmethod
    def randomized_data(cls, gamma: DensityMatrix, namespace: int = 0) -> RandomDensityMatrix:
        """γ_ω: each coefficient times the signs of all 2k key frequencies."""
        monos = np.zeros((gamma.nnz, words_for(gamma.box, namespace + 1)), dtype=np.uint64)
        for slot in range(2 * gamma.order):
            monos = toggle(monos, gamma.box, gamma.keys[:, slot, :], namespace)
        return cls(gamma.box, gamma.order, gamma.keys, monos, gamma.values)

    @property
    def nnz(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.monos.shape[1])

    def variables(self) -> IntArray:
        """Indices of every sign variable that occurs in some row."""
        if self.nnz == 0 or self.width == 0:
            return np.zeros(0, dtype=np.int64)
        union = np.bitwise_or.reduce(self.monos, axis=0)
        bits = np.unpackbits(union.view(np.uint8), bitorder="little")
        return np.flatnonzero(bits).astype(np.int64)

    def with_values(self, values: npt.ArrayLike) -> RandomDensityMatrix:
        return RandomDensityMatrix(self.box, self.order, self.keys, self.monos, values)

    def evolved(self, t: float) -> RandomDensityMatrix:
        if t == 0:
            return self
        phase = np.exp(-1j * float(t) * energies(self.keys))
        return RandomDensityMatrix(
            self.box, self.order, self.keys, self.monos, self.values * phase, canonical=True
        )

    def expected_sq_norm(self, alpha: float) -> float:
        """E_ω ‖S^(k,α) X‖²: only rows with equal (key, monomial) correlate."""
        if self.nnz == 0:
            return 0.0
        w2 = sobolev_weights(self.keys, alpha, squared=True)
        return compensated_sum(w2 * np.abs(self.values) ** 2)

    def realize(self, field: SignField) -> DensityMatrix:
        """The concrete matrix for one ω; namespace m reads field.at_level(m)."""
        if self.width == 0:
            return DensityMatrix(self.box, self.order, self.keys, self.values)
        var = self.variables()
        ns = var // self.box.size
        freqs = self.box.frequencies()[var % self.box.size]
        neg = np.zeros(self.width * _WORD, dtype=bool)
        for space in np.unique(ns):
            sel = ns == space
            s = field.at_level(int(space)).signs(freqs[sel])
            neg[var[sel]] = s < 0
        mask = np.packbits(neg, bitorder="little").view(np.uint64)[None, :]
        parity = popcount_parity(self.monos & mask)
        return DensityMatrix(self.box, self.order, self.keys, self.values * (1 - 2 * parity))

    def __repr__(self) -> str:
        return f"RandomDensityMatrix(order={self.order}, rows={self.nnz}, vars={self.variables().size})"


def symbolic_collide(
    x: RandomDensityMatrix,
    terms: Sequence[tuple[CollisionIndex, complex]],
    namespace: int | None,
) -> RandomDensityMatrix:
    """Σ coef·[B_c]^ω X; `namespace` None means deterministic collisions."""
    m = x.order
    keys, monos, values = [], [], []
    for c, coef in terms:
        c.require(m)
        img = push_forward(x.keys, c, x.box)
        mono = x.monos[img.source]
        if namespace is not None:
            for col in range(4):
                mono = toggle(mono, x.box, img.sign_freqs[:, col, :], namespace)
        keys.append(img.keys)
        monos.append(mono)
        values.append(complex(coef) * x.values[img.source])
    if not keys:
        empty = np.zeros((0, 2 * m - 2, x.box.d))
        return RandomDensityMatrix(x.box, m - 1, empty, np.zeros((0, 0)), [], canonical=True)
    width = max(mo.shape[1] for mo in monos)
    return RandomDensityMatrix(
        x.box,
        m - 1,
        np.concatenate(keys),
        np.concatenate([widen(mo, width) for mo in monos]),
        np.concatenate(values),
    )
