# src/gplab/lattice/ensemble.py
from __future__ import annotations

import itertools
import logging
import math

import numpy as np
import numpy.typing as npt

from ..config.defaults import DENSE_ENSEMBLE_CAP
from ..config.params import EnsembleProfile
from ..errors import CapacityError
from .box import IntArray, LatticeBox
from .density import DensityMatrix
from .weights import sobolev_weights

log = logging.getLogger(__name__)


def generator(seed: int) -> np.random.Generator:
    """Counter-based generator: Philox keyed by the seed."""
    return np.random.Generator(np.random.Philox(int(seed)))


def profile_weights(keys: npt.ArrayLike, profile: EnsembleProfile) -> npt.NDArray[np.float64]:
    """Magnitude envelope: 1 (flat) or Π over all 2k slots of ⟨ξ⟩^{-β} (decaying)."""
    arr = np.asarray(keys)
    if profile.kind == "decaying":
        return 1.0 / sobolev_weights(arr, profile.beta)
    return np.ones(arr.shape[0], dtype=np.float64)


def complex_normal(rng: np.random.Generator, n: int) -> npt.NDArray[np.complex128]:
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)


def all_keys(box: LatticeBox, slots: int) -> IntArray:
    """Every slot tuple over the box, lexicographic, shape (size^slots, slots, d)."""
    count = box.size**slots
    if count > DENSE_ENSEMBLE_CAP:
        raise CapacityError(
            f"{count} keys for {slots} slots at K={box.K}, d={box.d}; pass a sparse nnz"
        )
    freqs = box.frequencies()
    if slots == 0:
        return np.zeros((1, 0, box.d), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(box.size)] * slots), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=1)
    return freqs[idx]


def _random_keys(rng: np.random.Generator, box: LatticeBox, n: int, slots: int) -> IntArray:
    return rng.integers(-box.K, box.K + 1, size=(n, slots, box.d), dtype=np.int64)


def _slot_position(name: str, order: int) -> int:
    idx = int(name[1:]) - 1
    if idx >= order:
        raise ValueError(f"slot {name!r} does not exist at order {order}")
    return idx if name[0] == "u" else order + idx


def _tie_classes(order: int, ties: list[tuple[str, str]]) -> list[int]:
    """Representative slot of every slot position after applying the ties."""
    parent = list(range(2 * order))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in ties:
        ra, rb = find(_slot_position(a, order)), find(_slot_position(b, order))
        parent[max(ra, rb)] = min(ra, rb)
    return [find(i) for i in range(2 * order)]


def random_ensemble(
    order: int,
    box: LatticeBox,
    seed: int,
    profile: EnsembleProfile | None = None,
) -> DensityMatrix:
    """Seeded random density matrix with complex Gaussian coefficients."""
    profile = profile or EnsembleProfile()
    rng = generator(seed)
    slots = 2 * order

    if profile.kind == "diagonal":
        return _diagonal_ensemble(order, box, rng, profile)

    if profile.kind == "tied":
        reps = _tie_classes(order, profile.ties)
        n = profile.nnz or 64
        free = _random_keys(rng, box, n, slots)
        keys = free[:, reps, :]
    elif profile.nnz is None:
        keys = all_keys(box, slots)
    else:
        keys = _random_keys(rng, box, profile.nnz, slots)

    values = complex_normal(rng, keys.shape[0]) * profile_weights(keys, profile)
    log.debug("ensemble order=%d K=%d kind=%s rows=%d", order, box.K, profile.kind, keys.shape[0])
    return DensityMatrix(box, order, keys, values)


def _diagonal_ensemble(
    order: int,
    box: LatticeBox,
    rng: np.random.Generator,
    profile: EnsembleProfile,
) -> DensityMatrix:
    # keys (base_u, η; base_p, η) with one coefficient per base, flat in η
    if order < 2:
        raise ValueError("the diagonal profile needs order >= 2")
    base_slots = 2 * (order - 1)
    if profile.nnz is None:
        bases = all_keys(box, base_slots)
    else:
        bases = _random_keys(rng, box, profile.nnz, base_slots)
    coeff = complex_normal(rng, bases.shape[0])
    etas = box.frequencies()
    nb, ne = bases.shape[0], etas.shape[0]
    b = np.repeat(bases, ne, axis=0)
    e = np.tile(etas, (nb, 1))[:, None, :]
    u, p = b[:, : order - 1], b[:, order - 1 :]
    keys = np.concatenate([u, e, p, e], axis=1)
    return DensityMatrix(box, order, keys, np.repeat(coeff, ne))


def symmetrized(gamma: DensityMatrix) -> DensityMatrix:
    """Average over simultaneous permutations of unprimed and primed slots."""
    k = gamma.order
    perms = list(itertools.permutations(range(k)))
    parts = []
    for perm in perms:
        cols = [*perm, *(k + p for p in perm)]
        parts.append(gamma.keys[:, cols, :])
    keys = np.concatenate(parts, axis=0)
    values = np.tile(gamma.values, len(perms)) / len(perms)
    return DensityMatrix(gamma.box, k, keys, values)
