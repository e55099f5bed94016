# src/gplab/operators/collision.py
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from ..errors import OrderMismatchError
from ..lattice.box import IntArray, LatticeBox
from ..lattice.density import DensityMatrix

if TYPE_CHECKING:
    from ..randomization.fields import SignField


class Sign(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class CollisionIndex:
    """B^±_{j,k}: contracts slot k (unprimed and primed) into slot j. Slots are 1-based."""

    j: int
    k: int
    sign: Sign = Sign.PLUS

    def __post_init__(self) -> None:
        if not 1 <= self.j < self.k:
            raise ValueError(f"collision index needs 1 <= j < k, got j={self.j}, k={self.k}")
        if not isinstance(self.sign, Sign):
            object.__setattr__(self, "sign", Sign(self.sign))

    @classmethod
    def plus(cls, j: int, k: int) -> CollisionIndex:
        return cls(j, k, Sign.PLUS)

    @classmethod
    def minus(cls, j: int, k: int) -> CollisionIndex:
        return cls(j, k, Sign.MINUS)

    def require(self, order: int, step: str | None = None) -> None:
        if self.k > order:
            where = f" at {step}" if step else ""
            raise OrderMismatchError(f"{self} needs order >= {self.k}, got order {order}{where}")

    def after(self, other: CollisionIndex) -> CollisionIndex:
        """This index as seen after `other` has removed its slot k."""
        if other.k in (self.j, self.k):
            raise ValueError(f"{self} uses slot {other.k}, which {other} removes")
        j = self.j - 1 if self.j > other.k else self.j
        k = self.k - 1 if self.k > other.k else self.k
        return CollisionIndex(j, k, self.sign)

    def __str__(self) -> str:
        return f"B{'+' if self.sign is Sign.PLUS else '-'}[{self.j},{self.k}]"


class CollisionImage(NamedTuple):
    """Where every input row of a collision lands.

    keys:       output keys, one per surviving input row
    source:     index of the input row
    sign_freqs: the four interacting frequencies (out_j, in_j, η, η'), shape (n, 4, d)
    """

    keys: IntArray
    source: IntArray
    sign_freqs: IntArray


def push_forward(keys: IntArray, c: CollisionIndex, box: LatticeBox) -> CollisionImage:
    """Image of each input key under a collision; rows whose new slot leaves the box drop."""
    n, slots, d = keys.shape
    m = slots // 2
    c.require(m)
    j0, k0 = c.j - 1, c.k - 1
    u = keys[:, :m, :]
    p = keys[:, m:, :]
    eta = u[:, k0, :]
    eta_p = p[:, k0, :]
    u_out = u.copy()
    p_out = p.copy()
    if c.sign is Sign.PLUS:
        before = u[:, j0, :]
        changed = before + eta - eta_p
        u_out[:, j0, :] = changed
    else:
        before = p[:, j0, :]
        changed = before + eta_p - eta
        p_out[:, j0, :] = changed
    u_out = np.delete(u_out, k0, axis=1)
    p_out = np.delete(p_out, k0, axis=1)
    out = np.concatenate([u_out, p_out], axis=1)
    sign_freqs = np.stack([changed, before, eta, eta_p], axis=1)
    inside = box.contains(changed)
    source = np.flatnonzero(inside)
    return CollisionImage(out[inside], source, sign_freqs[inside])


def full_collision_terms(order: int) -> list[tuple[CollisionIndex, float]]:
    """Terms of B^(order) = Σ_{j<order} (B⁺_{j,order} − B⁻_{j,order})."""
    if order < 2:
        raise OrderMismatchError(f"the full collision needs order >= 2, got {order}")
    terms: list[tuple[CollisionIndex, float]] = []
    for j in range(1, order):
        terms.append((CollisionIndex.plus(j, order), 1.0))
        terms.append((CollisionIndex.minus(j, order), -1.0))
    return terms


def collision_combination(
    gamma: DensityMatrix,
    terms: Sequence[tuple[CollisionIndex, complex]],
    field: SignField | None = None,
) -> DensityMatrix:
    """Σ coef · B_c γ, each summand carrying its four field signs when a field is given."""
    m = gamma.order
    keys, values = [], []
    for c, coef in terms:
        c.require(m)
        img = push_forward(gamma.keys, c, gamma.box)
        v = complex(coef) * gamma.values[img.source]
        if field is not None:
            v = v * np.prod(field.signs(img.sign_freqs), axis=1)
        keys.append(img.keys)
        values.append(v)
    if not keys:
        return DensityMatrix.empty(gamma.box, m - 1)
    return DensityMatrix(gamma.box, m - 1, np.concatenate(keys), np.concatenate(values))


def collide(gamma: DensityMatrix, c: CollisionIndex) -> DensityMatrix:
    c.require(gamma.order)
    return collision_combination(gamma, [(c, 1.0)])


def full_collision(gamma: DensityMatrix) -> DensityMatrix:
    return collision_combination(gamma, full_collision_terms(gamma.order))
