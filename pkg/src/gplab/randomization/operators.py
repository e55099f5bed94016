# src/gplab/randomization/operators.py
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..lattice.density import DensityMatrix
from ..lattice.modes import ModeFunction
from ..operators.collision import (
    CollisionIndex,
    collision_combination,
    full_collision_terms,
)
from .fields import SignField
from .symbolic import RandomDensityMatrix, symbolic_collide

Terms = Sequence[tuple[CollisionIndex, complex]]


def randomized_collide(gamma: DensityMatrix, c: CollisionIndex, field: SignField) -> DensityMatrix:
    """[B^±_{j,k}]^ω γ: every summand carries h(out_j) h(in_j) h(η) h(η')."""
    c.require(gamma.order)
    return collision_combination(gamma, [(c, 1.0)], field)


def full_randomized_collision(gamma: DensityMatrix, field: SignField) -> DensityMatrix:
    return collision_combination(gamma, full_collision_terms(gamma.order), field)


def randomize_function(f: ModeFunction, field: SignField) -> ModeFunction:
    """T^ω f: (T^ω f)^(ξ) = h_ξ f̂(ξ). An involution."""
    return f.with_values(f.values * field.signs(f.keys))


def randomize_density(gamma: DensityMatrix, field: SignField) -> DensityMatrix:
    """Coefficient times the product of h over all 2k key frequencies."""
    signs = np.prod(field.signs(gamma.keys).astype(np.int64), axis=1)
    return gamma.with_values(gamma.values * signs)


# ============================================================
#   Builders: pure maps ω ↦ matrix with a symbolic twin
# ============================================================

@dataclass(frozen=True)
class CollisionBuilder:
    """ω ↦ [L_r]^ω … [L_1]^ω γ for term lists L_1 (applied first) … L_r.

    With ``independent`` the collision leaving order m reads ω_m; otherwise every
    level shares one field.
    """

    gamma: DensityMatrix
    levels: tuple[tuple[tuple[CollisionIndex, complex], ...], ...]
    independent: bool = False

    def __call__(self, field: SignField) -> DensityMatrix:
        x = self.gamma
        for terms in self.levels:
            level_field = field.at_level(x.order) if self.independent else field
            x = collision_combination(x, terms, level_field)
        return x

    def symbolic(self) -> RandomDensityMatrix:
        x = RandomDensityMatrix.from_density(self.gamma)
        for terms in self.levels:
            x = symbolic_collide(x, terms, x.order if self.independent else 0)
        return x

    @classmethod
    def single(cls, gamma: DensityMatrix, terms: Terms, independent: bool = False) -> CollisionBuilder:
        return cls(gamma, (tuple(terms),), independent)


@dataclass(frozen=True)
class DataRandomizedBuilder:
    """ω ↦ Σ coef · B_c(γ_ω), the initial-data randomization followed by deterministic B."""

    gamma: DensityMatrix
    terms: tuple[tuple[CollisionIndex, complex], ...] = dc_field(default_factory=tuple)
    independent: bool = False

    def __call__(self, field: SignField) -> DensityMatrix:
        return collision_combination(randomize_density(self.gamma, field), self.terms)

    def symbolic(self) -> RandomDensityMatrix:
        x = RandomDensityMatrix.randomized_data(self.gamma)
        return symbolic_collide(x, self.terms, None)
