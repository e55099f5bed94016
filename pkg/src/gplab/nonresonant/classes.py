# src/gplab/nonresonant/classes.py
"""The class 𝒩 of non-resonant density matrices.

A key is admissible when the moduli of its 2m frequencies strictly decrease
along a fixed chain of slots. Ties are never admissible.
"""
from __future__ import annotations

import itertools
import logging
from typing import Literal

import numpy as np
import numpy.typing as npt

from ..config.defaults import DENSE_ENSEMBLE_CAP
from ..errors import CapacityError, EmptyAdmissibleSetError
from ..lattice.box import IntArray, LatticeBox
from ..lattice.density import DensityMatrix, weighted_norm
from ..lattice.ensemble import complex_normal, generator

log = logging.getLogger(__name__)

Chain = Literal["standard", "primed-first", "interleaved"]

DEFAULT_SAMPLE_NNZ = 64


def chain_slots(order: int, chain: Chain = "standard") -> list[int]:
    """Slot positions (u_1..u_m at 0..m−1, p_j at m+j−1) from largest modulus to smallest."""
    u = list(range(order))
    p = [order + j for j in range(order)]
    if chain == "standard":
        return u + p
    if chain == "primed-first":
        return p + u
    if chain == "interleaved":
        return [s for pair in zip(u, p, strict=True) for s in pair]
    raise ValueError(f"unknown chain ordering {chain!r}")


def admissible_mask(keys: npt.ArrayLike, chain: Chain = "standard") -> npt.NDArray[np.bool_]:
    """True for every key (n, 2m, d) whose |ξ|² strictly decreases along the chain."""
    arr = np.asarray(keys, dtype=np.int64)
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    order = arr.shape[1] // 2
    mod = np.sum(arr * arr, axis=-1)[:, chain_slots(order, chain)]
    return np.all(np.diff(mod, axis=1) < 0, axis=1)


def project_N(gamma: DensityMatrix, chain: Chain = "standard") -> DensityMatrix:
    """Zero every coefficient off the admissible chains."""
    keep = admissible_mask(gamma.keys, chain)
    return DensityMatrix(gamma.box, gamma.order, gamma.keys[keep], gamma.values[keep], canonical=True)


def modulus_shells(box: LatticeBox) -> list[IntArray]:
    """Frequencies of the box grouped by |ξ|², largest modulus first."""
    freqs = box.frequencies()
    sq = np.sum(freqs * freqs, axis=1)
    return [freqs[sq == v] for v in np.unique(sq)[::-1]]


def min_admissible_cutoff(order: int, d: int = 1) -> int:
    """Smallest K whose box has 2·order distinct moduli."""
    K = 0
    while len(modulus_shells(LatticeBox(d, K))) < 2 * order:
        K += 1
    return K


def admissible_count(box: LatticeBox, order: int) -> int:
    """Number of admissible keys: the elementary symmetric sum e_{2m} of the shell sizes."""
    e = [1] + [0] * (2 * order)
    for shell in modulus_shells(box):
        n = shell.shape[0]
        for r in range(2 * order, 0, -1):
            e[r] += e[r - 1] * n
    return e[2 * order]


def admissible_keys(box: LatticeBox, order: int, chain: Chain = "standard") -> IntArray:
    """Every admissible key of the given order, shape (count, 2m, d)."""
    shells = modulus_shells(box)
    slots = 2 * order
    count = admissible_count(box, order)
    if count > DENSE_ENSEMBLE_CAP:
        raise CapacityError(f"{count} admissible keys at K={box.K}; pass a sparse nnz")
    positions = chain_slots(order, chain)
    blocks = []
    for levels in itertools.combinations(range(len(shells)), slots):
        members = [shells[lv] for lv in levels]
        grids = np.meshgrid(*[np.arange(m.shape[0]) for m in members], indexing="ij")
        block = np.empty((grids[0].size, slots, box.d), dtype=np.int64)
        for pos, m, g in zip(positions, members, grids, strict=True):
            block[:, pos, :] = m[g.ravel()]
        blocks.append(block)
    if not blocks:
        return np.zeros((0, slots, box.d), dtype=np.int64)
    return np.concatenate(blocks)


def _sampled_keys(
    rng: np.random.Generator,
    shells: list[IntArray],
    order: int,
    n: int,
    positions: list[int],
    d: int,
) -> IntArray:
    slots = 2 * order
    keys = np.empty((n, slots, d), dtype=np.int64)
    for r in range(n):
        levels = np.sort(rng.choice(len(shells), size=slots, replace=False))
        for pos, lv in zip(positions, levels, strict=True):
            shell = shells[lv]
            keys[r, pos] = shell[rng.integers(shell.shape[0])]
    return keys


def sample_N(
    order: int,
    box: LatticeBox,
    alpha: float,
    c1: float,
    seed: int,
    *,
    chain: Chain = "standard",
    nnz: int | None = None,
) -> DensityMatrix:
    """Random member of 𝒩 with ‖S^(m,α)γ‖ = C₁^m.

    With ``nnz`` None every admissible key gets a coefficient, unless there are
    more than the dense cap; then (or when ``nnz`` is given) ``nnz`` random
    admissible keys are drawn.
    """
    if c1 <= 0:
        raise ValueError(f"c1 must be > 0, got {c1}")
    shells = modulus_shells(box)
    if len(shells) < 2 * order:
        raise EmptyAdmissibleSetError(
            f"order {order} needs {2 * order} distinct moduli, box K={box.K} d={box.d} has {len(shells)}"
        )
    rng = generator(seed)
    if nnz is None and admissible_count(box, order) <= DENSE_ENSEMBLE_CAP:
        keys = admissible_keys(box, order, chain)
    else:
        keys = _sampled_keys(rng, shells, order, nnz or DEFAULT_SAMPLE_NNZ, chain_slots(order, chain), box.d)
    gamma = DensityMatrix(box, order, keys, complex_normal(rng, keys.shape[0]))
    norm = weighted_norm(gamma, alpha)
    log.debug("sample_N order=%d K=%d rows=%d", order, box.K, gamma.nnz)
    return gamma * (c1**order / norm)
