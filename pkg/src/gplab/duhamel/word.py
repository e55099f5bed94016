# src/gplab/duhamel/word.py
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field

import numpy as np
import numpy.typing as npt

from ..config.params import Randomization
from ..errors import OrderMismatchError
from ..lattice.density import DensityMatrix
from ..operators.collision import CollisionIndex, collision_combination
from ..operators.evolution import free_evolve
from ..randomization.fields import SignField, field_from
from ..randomization.symbolic import RandomDensityMatrix, symbolic_collide


@dataclass(frozen=True)
class DuhamelWord:
    """U^(n)(t_1−t_2) C_1 U^(n+1)(t_2−t_3) C_2 … C_ℓ γ^(n+ℓ)(t_{ℓ+1}).

    ``steps`` is stored outermost first: step p (0-based) is a single collision
    acting on order n + p + 1.
    """

    n: int
    steps: tuple[CollisionIndex, ...]
    randomization: Randomization = dc_field(
        default_factory=lambda: Randomization(kind="deterministic")
    )

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"base order must be >= 1, got {self.n}")
        object.__setattr__(self, "steps", tuple(self.steps))
        for p, c in enumerate(self.steps):
            c.require(self.order_at(p), step=f"step {p + 1}")

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def top_order(self) -> int:
        return self.n + self.length

    def order_at(self, p: int) -> int:
        """Input order of step p."""
        return self.n + p + 1

    @property
    def independent(self) -> bool:
        return self.randomization.kind == "independent"

    def field(self) -> SignField | None:
        return field_from(self.randomization)

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.steps) or "(empty)"


def _check_inputs(word: DuhamelWord, times: npt.ArrayLike, order: int) -> npt.NDArray[np.float64]:
    t = np.asarray(times, dtype=np.float64).reshape(-1)
    if t.shape[0] != word.length + 1:
        raise ValueError(f"word of length {word.length} needs {word.length + 1} times, got {t.shape[0]}")
    if order != word.top_order:
        raise OrderMismatchError(f"top matrix has order {order}, word needs {word.top_order}")
    return t


def duhamel_integrand(
    word: DuhamelWord,
    times: Sequence[float] | npt.ArrayLike,
    gamma_top: DensityMatrix,
    field: SignField | None = None,
) -> DensityMatrix:
    """Apply the word right to left; `field` defaults to the word's own randomization."""
    t = _check_inputs(word, times, gamma_top.order)
    if field is None:
        field = word.field()
    x = gamma_top
    for p in reversed(range(word.length)):
        c = word.steps[p]
        c.require(x.order, step=f"step {p + 1}")
        step_field = field
        if field is not None and word.independent:
            step_field = field.at_level(x.order)
        x = collision_combination(x, [(c, 1.0)], step_field)
        x = free_evolve(x, t[p] - t[p + 1])
    return x


def symbolic_integrand(
    word: DuhamelWord,
    times: Sequence[float] | npt.ArrayLike,
    gamma_top: DensityMatrix,
) -> RandomDensityMatrix:
    t = _check_inputs(word, times, gamma_top.order)
    randomized = word.randomization.kind != "deterministic"
    x = RandomDensityMatrix.from_density(gamma_top)
    for p in reversed(range(word.length)):
        ns = (x.order if word.independent else 0) if randomized else None
        x = symbolic_collide(x, [(word.steps[p], 1.0)], ns)
        x = x.evolved(t[p] - t[p + 1])
    return x


@dataclass(frozen=True)
class WordBuilder:
    """ω ↦ duhamel_integrand(word, times, γ, ω), for Ω-averages."""

    word: DuhamelWord
    times: tuple[float, ...]
    gamma: DensityMatrix

    @property
    def independent(self) -> bool:
        return self.word.independent

    def __call__(self, field: SignField) -> DensityMatrix:
        if self.word.randomization.kind == "deterministic":
            return duhamel_integrand(self.word, self.times, self.gamma)
        return duhamel_integrand(self.word, self.times, self.gamma, field)

    def symbolic(self) -> RandomDensityMatrix:
        return symbolic_integrand(self.word, self.times, self.gamma)

    @classmethod
    def at_equal_times(cls, word: DuhamelWord, gamma: DensityMatrix) -> WordBuilder:
        return cls(word, (0.0,) * (word.length + 1), gamma)
