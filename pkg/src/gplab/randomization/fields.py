# src/gplab/randomization/fields.py
from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Mapping, Sequence
from functools import lru_cache
from typing import Any

import numpy as np
import numpy.typing as npt

from ..config.defaults import Freq
from ..config.params import Randomization
from ..lattice.box import as_freq

SignArray = npt.NDArray[np.int8]

# splitmix64 constants
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z: npt.NDArray[np.uint64]) -> npt.NDArray[np.uint64]:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _zigzag(c: npt.NDArray[np.int64]) -> npt.NDArray[np.uint64]:
    return ((c << 1) ^ (c >> 63)).view(np.uint64)


class SignField(ABC):
    """One realization ω: a map ξ ↦ h_ξ(ω) ∈ {−1, +1}."""

    @abstractmethod
    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        """Signs of an integer array of shape (..., d); result has shape (...)."""

    def __call__(self, freq: Any) -> int:
        f = np.atleast_1d(np.asarray(freq, dtype=np.int64))
        return int(self.signs(f[None, :])[0])

    def at_level(self, level: int) -> SignField:
        """Field driving the collision that leaves order `level`; shared fields return self."""
        return self


class HashSignField(SignField):
    """Counter-based signs: splitmix64 over (seed, d, zigzag coords), top bit."""

    def __init__(self, seed: int) -> None:
        self.seed = int(seed) & _MASK64

    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        arr = np.asarray(freqs, dtype=np.int64)
        lead, d = arr.shape[:-1], arr.shape[-1]
        flat = arr.reshape(-1, d)
        with np.errstate(over="ignore"):
            h = _mix(np.full(flat.shape[0], self.seed, dtype=np.uint64) + _GOLDEN)
            h = _mix(h ^ (np.uint64(d) + _GOLDEN))
            for axis in range(d):
                h = _mix((h + _GOLDEN) ^ _zigzag(np.ascontiguousarray(flat[:, axis])))
        bit = (h >> np.uint64(63)).astype(np.int8)
        return (1 - 2 * bit).reshape(lead)

    def __repr__(self) -> str:
        return f"HashSignField(seed={self.seed:#x})"


class ConstantSignField(SignField):
    def __init__(self, value: int = 1) -> None:
        if value not in (-1, 1):
            raise ValueError(f"constant sign must be +1 or -1, got {value}")
        self.value = value

    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        arr = np.asarray(freqs)
        return np.full(arr.shape[:-1], self.value, dtype=np.int8)

    def __repr__(self) -> str:
        return f"ConstantSignField({self.value:+d})"


class TableSignField(SignField):
    """Explicit signs for listed frequencies, `default` elsewhere."""

    def __init__(self, table: Mapping[Any, int], default: int = 1, d: int | None = None) -> None:
        self.default = default
        self.table: dict[Freq, int] = {}
        for f, s in table.items():
            if s not in (-1, 1):
                raise ValueError(f"sign for {f!r} must be +1 or -1, got {s}")
            key = tuple(int(c) for c in np.atleast_1d(f)) if d is None else as_freq(f, d)
            self.table[key] = s

    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        arr = np.asarray(freqs, dtype=np.int64)
        lead, d = arr.shape[:-1], arr.shape[-1]
        rows = arr.reshape(-1, d).tolist()
        out = np.fromiter(
            (self.table.get(tuple(r), self.default) for r in rows), dtype=np.int8, count=len(rows)
        )
        return out.reshape(lead)


class LevelledSignField(SignField):
    """Independent fields ω_m, one per hierarchy level, built lazily by `factory(m)`."""

    def __init__(self, factory: Callable[[int], SignField]) -> None:
        self._factory = lru_cache(maxsize=None)(factory)

    def at_level(self, level: int) -> SignField:
        return self._factory(int(level))

    def signs(self, freqs: npt.ArrayLike) -> SignArray:
        raise TypeError("a levelled field has no signs of its own; call at_level(m) first")

    @classmethod
    def from_seeds(cls, seeds: Sequence[int]) -> LevelledSignField:
        """seeds[i] drives the collision leaving order i + 2."""
        table = [int(s) for s in seeds]

        def factory(level: int) -> SignField:
            idx = level - 2
            if not 0 <= idx < len(table):
                raise ValueError(f"no seed for level {level}; {len(table)} seeds cover 2..{len(table) + 1}")
            return HashSignField(table[idx])

        return cls(factory)

    @classmethod
    def from_master(cls, seed: int) -> LevelledSignField:
        return cls(lambda level: HashSignField(level_seed(seed, level)))


def level_seed(master: int, level: int) -> int:
    """Seed of ω_level split off a master seed."""
    ss = np.random.SeedSequence([int(master) & _MASK64, int(level)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def split_seed(master: int, n: int) -> list[int]:
    """n independent child seeds of a master seed."""
    ss = np.random.SeedSequence(int(master) & _MASK64)
    return [int(s.generate_state(1, dtype=np.uint64)[0]) for s in ss.spawn(n)]


def field_from(randomization: Randomization) -> SignField | None:
    """None for deterministic collisions, otherwise the shared or levelled field."""
    if randomization.kind == "deterministic":
        return None
    if randomization.kind == "dependent":
        return HashSignField(randomization.seed)
    if randomization.seeds is not None:
        return LevelledSignField.from_seeds(randomization.seeds)
    return LevelledSignField.from_master(randomization.seed)
