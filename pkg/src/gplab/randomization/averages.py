# src/gplab/randomization/averages.py
from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any, Protocol, runtime_checkable

import numpy as np
import numpy.typing as npt

from ..config.defaults import Freq
from ..config.params import OmegaAverage
from ..errors import CapacityError
from ..lattice.density import DensityMatrix, weighted_norm
from ..utils.parallel import ordered_map
from .fields import HashSignField, LevelledSignField, SignField, SignArray, split_seed
from .symbolic import RandomDensityMatrix

log = logging.getLogger(__name__)

Builder = Callable[[SignField], DensityMatrix]


@runtime_checkable
class SymbolicBuilder(Protocol):
    def __call__(self, field: SignField) -> DensityMatrix: ...

    def symbolic(self) -> RandomDensityMatrix: ...


@dataclass(frozen=True)
class MatrixBuilder:
    """A fixed symbolic matrix viewed as the builder ω ↦ X(ω)."""

    x: RandomDensityMatrix
    independent: bool = False

    def __call__(self, field: SignField) -> DensityMatrix:
        return self.x.realize(field)

    def symbolic(self) -> RandomDensityMatrix:
        return self.x


def sign_product_expectation(freqs: Iterable[Any]) -> int:
    """E Π h_ξ for i.i.d. ±1 signs: 1 iff every distinct frequency occurs an even number of times."""
    counts = Counter(tuple(np.atleast_1d(f).tolist()) for f in freqs)
    return int(all(c % 2 == 0 for c in counts.values()))


# ============================================================
#   Sign-variable discovery and 2^M enumeration
# ============================================================

class _RecordingField(SignField):
    """Answers +1 everywhere and remembers every (level, frequency) it was asked."""

    def __init__(self, seen: dict[tuple[int | None, Freq], None], level: int | None = None) -> None:
        self._seen = seen
        self._level = level

    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        arr = np.asarray(freqs, dtype=np.int64)
        for row in arr.reshape(-1, arr.shape[-1]).tolist():
            self._seen[(self._level, tuple(row))] = None
        return np.ones(arr.shape[:-1], dtype=np.int8)

    def at_level(self, level: int) -> SignField:
        return _RecordingField(self._seen, level)


class _AssignmentField(SignField):
    def __init__(self, table: dict[tuple[int | None, Freq], int], level: int | None = None) -> None:
        self._table = table
        self._level = level

    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        arr = np.asarray(freqs, dtype=np.int64)
        rows = arr.reshape(-1, arr.shape[-1]).tolist()
        out = np.fromiter(
            (self._table.get((self._level, tuple(r)), 1) for r in rows), dtype=np.int8, count=len(rows)
        )
        return out.reshape(arr.shape[:-1])

    def at_level(self, level: int) -> SignField:
        return _AssignmentField(self._table, level)


def builder_variables(builder: Builder) -> list[tuple[int | None, Freq]]:
    """Every (level, frequency) whose sign the builder reads; level None is the shared field."""
    seen: dict[tuple[int | None, Freq], None] = {}
    builder(_RecordingField(seen))
    return list(seen)


def enumerate_sq_norm(builder: Builder, alpha: float, max_variables: int) -> float:
    """Average of ‖S X(ω)‖² over all 2^M sign assignments of the variables it touches."""
    variables = builder_variables(builder)
    m = len(variables)
    if m > max_variables:
        raise CapacityError(
            f"{m} sign variables exceed the enumeration cap {max_variables}; use method='montecarlo'"
        )
    log.debug("enumerating 2^%d sign assignments", m)
    terms = []
    for mask in range(1 << m):
        table = {v: (-1 if (mask >> i) & 1 else 1) for i, v in enumerate(variables)}
        terms.append(weighted_norm(builder(_AssignmentField(table)), alpha) ** 2)
    return math.fsum(terms) / (1 << m)


# ============================================================
#   Monte Carlo
# ============================================================

def sample_field(seed: int, independent: bool) -> SignField:
    return LevelledSignField.from_master(seed) if independent else HashSignField(seed)


def montecarlo_sq_norms(
    builder: Builder,
    alpha: float,
    samples: int,
    seed: int,
) -> npt.NDArray[np.float64]:
    """‖S X(ω_i)‖² for `samples` fields split off `seed`, in sample order."""
    independent = bool(getattr(builder, "independent", False))
    seeds = split_seed(seed, samples)
    realize: Builder = builder
    if isinstance(builder, SymbolicBuilder):
        realize = builder.symbolic().realize

    def one(s: int) -> float:
        return weighted_norm(realize(sample_field(s, independent)), alpha) ** 2

    return np.array(ordered_map(one, seeds), dtype=np.float64)


def omega_averaged_sq_norm(
    builder: Builder,
    alpha: float,
    method: OmegaAverage | None = None,
) -> float:
    """E_ω ‖S^(k,α) builder(ω)‖²."""
    method = method or OmegaAverage()
    if method.method == "exact":
        if isinstance(builder, SymbolicBuilder):
            return builder.symbolic().expected_sq_norm(alpha)
        return enumerate_sq_norm(builder, alpha, method.max_variables)
    if method.method == "enumerate":
        return enumerate_sq_norm(builder, alpha, method.max_variables)
    sq = montecarlo_sq_norms(builder, alpha, method.samples, method.seed)
    return math.fsum(sq.tolist()) / sq.shape[0]
