# tests/test_operators.py
from __future__ import annotations

import math

import numpy as np
import pytest

from gplab.errors import OrderMismatchError
from gplab.lattice import DensityMatrix, LatticeBox, ModeFunction, delta_matrix, factorized, weighted_norm
from gplab.operators import (
    CollisionIndex,
    apply_fractional_derivative,
    collide,
    free_evolve,
    free_evolve_modes,
    full_collision,
    push_forward,
)

from ._util import EXACT_TOL, as_d1_dict, brute_collide, dict_close, small_matrix

BOX = LatticeBox(1, 4)


def test_fractional_derivative() -> None:
    zero = delta_matrix(2, ((0, 0), (0, 0)), 2.0, box=BOX)
    assert apply_fractional_derivative(zero, 1.3) == zero

    g = delta_matrix(1, ((2,), (1,)), 1.0, box=BOX)
    assert apply_fractional_derivative(g, 1.0)[((2,), (1,))] == pytest.approx(math.sqrt(5) * math.sqrt(2))

    h = small_matrix(2, seed=1)
    assert apply_fractional_derivative(h, 0.0).allclose(h, atol=EXACT_TOL)


def test_free_evolve_values() -> None:
    g = delta_matrix(1, ((1,), (0,)), 1.0, box=BOX)
    assert free_evolve(g, 0.0) is g
    assert free_evolve(g, math.pi)[((1,), (0,))] == pytest.approx(-1.0, abs=EXACT_TOL)

    diag = delta_matrix(2, ((3, 1), (3, 1)), 1.0, box=BOX)
    assert free_evolve(diag, 1.7).allclose(diag, atol=EXACT_TOL)


def test_free_evolve_unitary_group_law_and_commutation() -> None:
    g = small_matrix(3, K=3, seed=4, nnz=20)
    s, t, alpha = 0.3, -1.1, 0.75
    assert weighted_norm(free_evolve(g, t), alpha) == pytest.approx(weighted_norm(g, alpha), rel=EXACT_TOL)
    assert free_evolve(free_evolve(g, s), t).allclose(free_evolve(g, s + t), atol=EXACT_TOL)
    a = apply_fractional_derivative(free_evolve(g, t), alpha)
    b = free_evolve(apply_fractional_derivative(g, alpha), t)
    assert a.allclose(b, atol=EXACT_TOL)


def test_collide_single_mode_examples() -> None:
    plus = collide(delta_matrix(2, ((2, 1), (0, 3)), 1.0, box=BOX), CollisionIndex.plus(1, 2))
    assert plus.to_dict() == {(((0,),), ((0,),)): 1.0}

    minus = collide(delta_matrix(2, ((1, 5), (2, 3)), 1.0, box=LatticeBox(1, 5)), CollisionIndex.minus(1, 2))
    assert as_d1_dict(minus) == {((1,), (0,)): 1.0}


@pytest.mark.parametrize(
    ("order", "j", "k", "plus"),
    [(2, 1, 2, True), (2, 1, 2, False), (3, 1, 3, True), (3, 2, 3, False), (3, 1, 2, True)],
)
def test_collide_matches_definition(order: int, j: int, k: int, plus: bool) -> None:
    g = small_matrix(order, K=1 if order == 3 else 2, seed=10 + j + k, nnz=12)
    c = CollisionIndex(j, k, "plus" if plus else "minus")
    assert dict_close(as_d1_dict(collide(g, c)), brute_collide(g, j, k, plus))


def test_collide_order_mismatch() -> None:
    with pytest.raises(OrderMismatchError):
        collide(small_matrix(2), CollisionIndex.plus(1, 3))
    with pytest.raises(ValueError):
        CollisionIndex(2, 2)


def test_full_collision() -> None:
    g = small_matrix(2, seed=6)
    expected = collide(g, CollisionIndex.plus(1, 2)) - collide(g, CollisionIndex.minus(1, 2))
    assert full_collision(g).allclose(expected, atol=EXACT_TOL)

    diag = delta_matrix(2, ((2, 2), (2, 2)), 1.0, box=BOX)
    assert full_collision(diag).nnz == 0

    with pytest.raises(OrderMismatchError):
        full_collision(small_matrix(1))


def test_full_collision_is_linear() -> None:
    g1, g2 = small_matrix(3, K=1, seed=1), small_matrix(3, K=1, seed=2)
    a, b = 1.5 - 0.5j, -0.25 + 2j
    lhs = full_collision(DensityMatrix.linear_combination((a, b), (g1, g2)))
    rhs = DensityMatrix.linear_combination((a, b), (full_collision(g1), full_collision(g2)))
    assert lhs.allclose(rhs, atol=EXACT_TOL)


@pytest.mark.parametrize(
    ("c1", "c2"),
    [
        (CollisionIndex.plus(1, 2), CollisionIndex.minus(3, 4)),
        (CollisionIndex.minus(1, 5), CollisionIndex.plus(2, 3)),
        (CollisionIndex.plus(2, 4), CollisionIndex.plus(3, 5)),
    ],
)
def test_disjoint_collisions_commute(c1: CollisionIndex, c2: CollisionIndex) -> None:
    # two collisions move a K = 1 frequency by at most 4
    g = small_matrix(5, K=1, seed=21, nnz=40).embed(LatticeBox(1, 5))
    a = collide(collide(g, c1), c2.after(c1))
    b = collide(collide(g, c2), c1.after(c2))
    assert a.allclose(b, atol=EXACT_TOL)


def test_push_forward_drops_out_of_box_rows() -> None:
    keys = np.array([[[1], [1], [0], [0]], [[0], [1], [0], [0]]])
    img = push_forward(keys, CollisionIndex.plus(1, 2), LatticeBox(1, 1))
    assert img.source.tolist() == [1]
    assert img.sign_freqs[0, :, 0].tolist() == [1, 0, 1, 0]


def test_factorized_free_flow_consistency() -> None:
    rng = np.random.default_rng(3)
    box = LatticeBox(1, 2)
    phi0 = ModeFunction.from_dense(box, rng.normal(size=5) + 1j * rng.normal(size=5))
    t = 0.8
    for k in (1, 2):
        lhs = factorized(free_evolve_modes(phi0, t), k)
        rhs = free_evolve(factorized(phi0, k), t)
        assert lhs.allclose(rhs, atol=1e-10)
