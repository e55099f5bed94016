# tests/test_nonresonant.py
from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from gplab.config.params import OmegaAverage
from gplab.duhamel import DuhamelWord
from gplab.errors import EmptyAdmissibleSetError
from gplab.lattice import DensityMatrix, LatticeBox, delta_matrix, weighted_norm
from gplab.nonresonant import (
    admissible_count,
    admissible_keys,
    admissible_mask,
    chain_slots,
    diagonal_pairing_sum,
    min_admissible_cutoff,
    modulus_shells,
    nonresonant_bound_check,
    nonresonant_sweep,
    pairing_oracle,
    project_N,
    sample_N,
)
from gplab.operators import CollisionIndex

from ._util import EXACT_TOL, ORACLE_TOL

BOX = LatticeBox(1, 2)


def test_project_N_examples() -> None:
    box = LatticeBox(1, 3)
    g = DensityMatrix.from_mapping(box, 1, {((2,), (1,)): 1.0, ((1,), (1,)): 2.0, ((1,), (2,)): 3.0})
    kept = project_N(g)
    assert kept.to_dict() == {(((2,),), ((1,),)): 1.0}
    assert project_N(kept) == kept


def test_chain_orderings() -> None:
    assert chain_slots(2) == [0, 1, 2, 3]
    assert chain_slots(2, "primed-first") == [2, 3, 0, 1]
    assert chain_slots(2, "interleaved") == [0, 2, 1, 3]
    with pytest.raises(ValueError):
        chain_slots(2, "sideways")  # type: ignore[arg-type]

    keys = np.array([[[3], [1], [2], [0]], [[1], [0], [3], [2]]])
    assert admissible_mask(keys).tolist() == [False, False]
    assert admissible_mask(keys, "interleaved").tolist() == [True, False]
    assert admissible_mask(keys, "primed-first").tolist() == [False, True]


def test_ties_are_never_admissible() -> None:
    keys = np.array([[[2], [-2]], [[2], [1]]])
    assert admissible_mask(keys).tolist() == [False, True]


def test_modulus_shells_and_cutoff() -> None:
    assert [s.shape[0] for s in modulus_shells(BOX)] == [2, 2, 1]
    assert min_admissible_cutoff(1) == 1
    assert min_admissible_cutoff(2) == 3
    assert min_admissible_cutoff(1, d=2) == 1


def test_admissible_count_matches_mask() -> None:
    axis = range(-BOX.K, BOX.K + 1)
    for order in (1, 2):
        every = np.array(list(itertools.product(axis, repeat=2 * order)))[:, :, None]
        brute = int(np.count_nonzero(admissible_mask(every)))
        assert admissible_count(BOX, order) == brute
        keys = admissible_keys(BOX, order)
        assert keys.shape[0] == brute
        assert admissible_mask(keys).all()
    assert admissible_count(BOX, 1) == 8


@pytest.mark.parametrize("chain", ["standard", "primed-first", "interleaved"])
def test_sample_N_is_admissible_and_normalised(chain: str) -> None:
    box = LatticeBox(1, 3)
    g = sample_N(2, box, 0.5, 1.5, 4, chain=chain)  # type: ignore[arg-type]
    assert g.nnz == admissible_count(box, 2)
    assert admissible_mask(g.keys, chain).all()  # type: ignore[arg-type]
    assert weighted_norm(g, 0.5) == pytest.approx(1.5**2, rel=EXACT_TOL)


def test_sample_N_sparse_and_errors() -> None:
    g = sample_N(2, LatticeBox(1, 4), 0.0, 2.0, 1, nnz=5)
    assert 0 < g.nnz <= 5
    assert admissible_mask(g.keys).all()
    assert weighted_norm(g, 0.0) == pytest.approx(4.0, rel=EXACT_TOL)
    with pytest.raises(EmptyAdmissibleSetError):
        sample_N(2, LatticeBox(1, 1), 0.0, 1.0, 0)
    with pytest.raises(ValueError):
        sample_N(1, BOX, 0.0, 0.0, 0)


def test_bound_check_skips_zero_data() -> None:
    word = DuhamelWord(1, (CollisionIndex.plus(1, 2),))
    report = nonresonant_bound_check(word, DensityMatrix.empty(LatticeBox(1, 5), 2), 0.5)
    assert report.column("status") == ["skipped"]
    assert report.column("ratio") == [None]


@pytest.mark.parametrize(("alpha", "expected"), [(0.0, 1.0), (1.0, math.sqrt(52.0) / 10.0)])
def test_bound_check_single_mode(alpha: float, expected: float) -> None:
    # B+[1,2] sends (3,2;1,0) to (5;1)
    g = delta_matrix(2, ((3, 2), (1, 0)), 1.0, box=LatticeBox(1, 5))
    word = DuhamelWord(1, (CollisionIndex.plus(1, 2),))
    (row,) = nonresonant_bound_check(word, g, alpha).where(status="ok")
    assert row["ratio"] == pytest.approx(expected, rel=EXACT_TOL)
    assert row["per_level"] == pytest.approx(expected**0.5, rel=EXACT_TOL)
    assert diagonal_pairing_sum(word, g, alpha) == pytest.approx(expected**2 * weighted_norm(g, alpha) ** 2)


def test_bound_check_accepts_times_and_methods() -> None:
    g = sample_N(2, LatticeBox(1, 3), 0.5, 1.0, 2).embed(LatticeBox(1, 9))
    word = DuhamelWord(1, (CollisionIndex.minus(1, 2),))
    exact = nonresonant_bound_check(word, g, 0.5)
    timed = nonresonant_bound_check(word, g, 0.5, times=[0.3, 0.0])
    # a single free flow after the collision is unitary
    assert timed.column("lhs")[0] == pytest.approx(exact.column("lhs")[0], rel=1e-10)
    mc = nonresonant_bound_check(word, g, 0.5, OmegaAverage(method="montecarlo", samples=64))
    assert mc.column("status") == ["ok"]


def test_pairing_oracle_agrees() -> None:
    report = pairing_oracle(6, 11)
    assert len(report.rows) == 6
    assert report.summary["max_rel_diag"] <= ORACLE_TOL
    assert report.summary["max_rel_enum"] <= ORACLE_TOL
    assert report.summary["enumerated"] >= 1


def test_small_sweep() -> None:
    report = nonresonant_sweep([1, 2], [0.0], 2, 5, nnz=4)
    assert len(report.rows) == 4
    assert set(report.column("status")) == {"ok"}
    summary = report.summary["alpha=0.0"]
    assert set(summary) == {"ell=1", "ell=2", "spread"}
    assert summary["spread"] >= 0.0
