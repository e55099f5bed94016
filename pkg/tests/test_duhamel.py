# tests/test_duhamel.py
from __future__ import annotations

import numpy as np
import pytest

from gplab.config.params import EnsembleProfile, Randomization, SimplexScheme
from gplab.duhamel import (
    ChainPlan,
    DuhamelWord,
    FrozenSequence,
    WordBuilder,
    constructed_residual,
    decay_experiment,
    duhamel_integrand,
    duhamel_term,
    simplex_integrate,
    symbolic_duhamel_terms,
)
from gplab.errors import MissingOrderError, OrderMismatchError
from gplab.lattice import DensityMatrix, LatticeBox, delta_matrix, weighted_norm
from gplab.operators import CollisionIndex, collide, free_evolve, full_collision
from gplab.randomization import (
    ConstantSignField,
    HashSignField,
    LevelledSignField,
    enumerate_sq_norm,
    omega_averaged_sq_norm,
)

from ._util import EXACT_TOL, QUAD_TOL, small_matrix

BOX1 = LatticeBox(1, 1)
DETERMINISTIC = Randomization(kind="deterministic")


def _frozen(orders: list[int], K: int = 1, seed: int = 3, nnz: int | None = 12) -> FrozenSequence:
    return FrozenSequence.from_ensemble(orders, LatticeBox(1, K), seed, EnsembleProfile(nnz=nnz))


# ---- words ----
def test_word_validation() -> None:
    with pytest.raises(ValueError):
        DuhamelWord(0, ())
    with pytest.raises(OrderMismatchError):
        DuhamelWord(1, (CollisionIndex.plus(1, 3),))
    word = DuhamelWord(1, (CollisionIndex.plus(1, 2), CollisionIndex.plus(2, 3)))
    assert word.top_order == 3
    assert str(word) == "B+[1,2] B+[2,3]"
    assert str(DuhamelWord(2, ())) == "(empty)"


def test_integrand_input_checks() -> None:
    word = DuhamelWord(1, (CollisionIndex.plus(1, 2),))
    with pytest.raises(ValueError):
        duhamel_integrand(word, [0.0], small_matrix(2))
    with pytest.raises(OrderMismatchError):
        duhamel_integrand(word, [0.0, 0.0], small_matrix(3, K=1))


def test_length_one_word_is_a_collision() -> None:
    g = small_matrix(2, seed=4, nnz=10)
    c = CollisionIndex.minus(1, 2)
    word = DuhamelWord(1, (c,))
    assert duhamel_integrand(word, [0.0, 0.0], g).allclose(collide(g, c), atol=EXACT_TOL)
    lagged = duhamel_integrand(word, [0.9, 0.2], g)
    assert lagged.allclose(free_evolve(collide(g, c), 0.7), atol=EXACT_TOL)


def test_constant_field_gives_deterministic_integrand() -> None:
    g = small_matrix(3, K=1, seed=5, nnz=30)
    word = DuhamelWord(1, (CollisionIndex.minus(1, 2), CollisionIndex.plus(1, 3)))
    times = [0.8, 0.5, 0.1]
    assert duhamel_integrand(word, times, g, ConstantSignField(1)).allclose(
        duhamel_integrand(word, times, g), atol=EXACT_TOL
    )


def test_two_step_chain_example() -> None:
    g = delta_matrix(3, ((1, 0, 1), (0, 1, 0)), 1.0, box=BOX1)
    word = DuhamelWord(1, (CollisionIndex.plus(1, 2), CollisionIndex.plus(2, 3)))
    at_zero = duhamel_integrand(word, [0.0, 0.0, 0.0], g)
    assert at_zero.to_dict() == {(((1,),), ((0,),)): 1.0}
    # both intermediate keys carry energy 1
    timed = duhamel_integrand(word, [0.7, 0.4, 0.1], g)
    assert timed[((1,), (0,))] == pytest.approx(np.exp(-0.6j), abs=EXACT_TOL)


def test_word_builder_average_matches_enumeration() -> None:
    g = small_matrix(3, K=1, seed=2, nnz=4)
    word = DuhamelWord(
        1,
        (CollisionIndex.plus(1, 2), CollisionIndex.minus(2, 3)),
        Randomization(kind="dependent", seed=1),
    )
    builder = WordBuilder(word, (0.5, 0.3, 0.0), g)
    exact = omega_averaged_sq_norm(builder, 0.5)
    assert enumerate_sq_norm(builder, 0.5, 20) == pytest.approx(exact, rel=1e-10, abs=1e-12)


# ---- terms ----
def test_term_at_time_zero_is_empty() -> None:
    seq = _frozen([1, 2])
    assert weighted_norm(duhamel_term(1, 1, DETERMINISTIC, seq, 0.0), 0.0) == 0.0
    assert duhamel_term(1, 0, DETERMINISTIC, seq, 0.3) == seq.at(1)


def test_diagonal_and_zero_data_give_zero() -> None:
    diag = FrozenSequence({2: delta_matrix(2, ((1, 1), (1, 1)), 1.0, box=BOX1)})
    assert weighted_norm(duhamel_term(1, 1, DETERMINISTIC, diag, 0.5), 0.0) == pytest.approx(0.0, abs=EXACT_TOL)

    zero = FrozenSequence({3: DensityMatrix.empty(BOX1, 3)})
    for kind in ("deterministic", "dependent", "independent"):
        term = duhamel_term(1, 2, Randomization(kind=kind), zero, 0.5)
        assert term.order == 1
        assert weighted_norm(term, 0.0) == 0.0


def test_missing_order_is_reported() -> None:
    with pytest.raises(MissingOrderError):
        duhamel_term(1, 2, DETERMINISTIC, _frozen([2]), 0.5)


def test_first_term_matches_direct_integral() -> None:
    seq = _frozen([2], K=2, seed=7, nnz=20)
    g2, t = seq.at(2), 0.6
    bg = full_collision(g2)
    direct = simplex_integrate(lambda s: free_evolve(bg, t - s[0]), t, 1) * (-1j)
    assert duhamel_term(1, 1, DETERMINISTIC, seq, t).allclose(direct, atol=QUAD_TOL)


def test_constant_field_plan_matches_deterministic() -> None:
    seq = _frozen([3])
    top = seq.support(3)
    plain = ChainPlan.hierarchy(seq.box, top, 1, 2)
    signed = ChainPlan.hierarchy(seq.box, top, 1, 2, field=ConstantSignField(1))

    def values(times: np.ndarray) -> np.ndarray:
        return seq.values(3, times)

    a = plain.integrate(values, [0.4])
    b = signed.integrate(values, [0.4])
    assert np.allclose(a, b, atol=EXACT_TOL)
    assert plain.depth == 2
    assert plain.out_order == 1


def test_independent_equal_seeds_match_dependent() -> None:
    seq = _frozen([3], seed=9)
    dep = duhamel_term(1, 2, Randomization(kind="dependent", seed=5), seq, 0.5)
    ind = duhamel_term(1, 2, Randomization(kind="independent", seeds=[5, 5]), seq, 0.5)
    assert dep.allclose(ind, atol=EXACT_TOL)


@pytest.mark.parametrize("kind", ["dependent", "independent"])
def test_symbolic_terms_realize_to_concrete_terms(kind: str) -> None:
    seq = _frozen([3], seed=4)
    (x,) = symbolic_duhamel_terms(1, 2, kind == "independent", seq, [0.5])
    field = HashSignField(6) if kind == "dependent" else LevelledSignField.from_master(6)
    concrete = duhamel_term(1, 2, Randomization(kind=kind, seed=6), seq, 0.5)
    assert x.realize(field).allclose(concrete, atol=1e-10)


def test_constructed_residual_shrinks_with_step() -> None:
    seq = _frozen([3], seed=2, nnz=None)
    scheme = SimplexScheme(order=10)
    rand = Randomization(kind="dependent", seed=3)
    coarse = constructed_residual(1, 3, rand, seq, np.linspace(0.2, 0.6, 5).tolist(), scheme)
    fine = constructed_residual(1, 3, rand, seq, np.linspace(0.2, 0.6, 9).tolist(), scheme)
    assert coarse > 0
    assert coarse / fine > 3.0


def test_constructed_residual_rejects_bad_grids() -> None:
    seq = _frozen([3])
    with pytest.raises(ValueError):
        constructed_residual(1, 3, DETERMINISTIC, seq, [0.1, 0.2])
    with pytest.raises(ValueError):
        constructed_residual(1, 3, DETERMINISTIC, seq, [0.1, 0.2, 0.4])
    with pytest.raises(ValueError):
        constructed_residual(3, 3, DETERMINISTIC, seq, [0.1, 0.2, 0.3])


# ---- decay experiment ----
def test_decay_rows_and_summary() -> None:
    seq = _frozen([1, 2, 3])
    report = decay_experiment(1, 2, "dependent", seq, 0.5, T=0.2, time_points=3)
    assert report.column("n") == [1, 2]
    assert report.column("ratio")[0] is None
    assert report.summary["n0_sup_norm"] > 0
    assert report.summary["T"] == 0.2
    assert all(v >= 0 for v in report.column("sup_norm"))


def test_decay_has_one_row_per_term() -> None:
    seq = _frozen([1, 2, 3, 4])
    report = decay_experiment(1, 3, "deterministic", seq, 0.0, T=0.1, time_points=2)
    assert len(report.rows) == 3
    assert report.column("n") == [1, 2, 3]
    assert len(report.summary["wall_time"]) == 4


def test_decay_at_zero_time() -> None:
    seq = _frozen([1, 2, 3])
    report = decay_experiment(1, 2, "deterministic", seq, 0.0, T=0.0)
    assert report.summary["n0_sup_norm"] == pytest.approx(weighted_norm(seq.at(1), 0.0))
    assert report.column("sup_norm") == [0.0, 0.0]


def test_decay_picks_time_from_growth() -> None:
    seq = _frozen([1, 2, 3])
    report = decay_experiment(1, 2, "independent", seq, 0.5, time_points=2)
    growth = report.summary["growth_estimate"]
    assert growth > 0
    assert report.summary["T"] == pytest.approx(1.0 / (4.0 * growth))
    assert report.summary["c1"] > 0


def test_decay_rejects_bad_arguments() -> None:
    seq = _frozen([1, 2])
    with pytest.raises(ValueError):
        decay_experiment(1, -1, "deterministic", seq, 0.0, T=1.0)
    with pytest.raises(ValueError):
        decay_experiment(1, 1, "deterministic", seq, 0.0, T=-1.0)
