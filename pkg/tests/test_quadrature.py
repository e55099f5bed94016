# tests/test_quadrature.py
from __future__ import annotations

import math

import numpy as np
import pytest

from gplab.config.params import SimplexScheme
from gplab.config.defaults import MAX_GAUSS_DEPTH
from gplab.duhamel.quadrature import gauss_interval, nested_gauss, simplex_integrate, simplex_rule

from ._util import QUAD_TOL, small_matrix

MC_REL = 0.05


@pytest.mark.parametrize("n", range(1, 7))
def test_simplex_volume(n: int) -> None:
    t = 1.3
    vol = simplex_integrate(lambda s: 1.0, t, n)
    assert vol == pytest.approx(t**n / math.factorial(n), rel=QUAD_TOL)


def test_nodes_are_ordered_inside_simplex() -> None:
    t = 2.0
    for scheme in (SimplexScheme(), SimplexScheme(kind="montecarlo", samples=64, seed=1)):
        nodes, weights = simplex_rule(t, 3, scheme)
        assert nodes.shape[1] == 3
        assert nodes.shape[0] == weights.shape[0]
        assert np.all(nodes <= t) and np.all(nodes >= 0)
        assert np.all(np.diff(nodes, axis=1) <= 0)


def test_linear_integrands() -> None:
    assert simplex_integrate(lambda s: s[0], 1.0, 1) == pytest.approx(0.5, rel=QUAD_TOL)
    # ∫_{1 ≥ s1 ≥ s2 ≥ 0} s1 = ∫ s1² ds1
    assert simplex_integrate(lambda s: s[0], 1.0, 2) == pytest.approx(1.0 / 3.0, rel=QUAD_TOL)
    assert simplex_integrate(lambda s: s[1], 1.0, 2) == pytest.approx(1.0 / 6.0, rel=QUAD_TOL)


def test_oscillatory_integrand() -> None:
    t = 1.5
    value = simplex_integrate(lambda s: np.exp(-1j * s[0]), t, 1)
    assert value == pytest.approx((1 - np.exp(-1j * t)) / 1j, abs=QUAD_TOL)


def test_montecarlo_scheme_is_roughly_right() -> None:
    scheme = SimplexScheme(kind="montecarlo", samples=20000, seed=4)
    assert simplex_integrate(lambda s: 1.0, 1.0, 3, scheme) == pytest.approx(1.0 / 6.0, rel=QUAD_TOL)
    assert simplex_integrate(lambda s: s[0], 1.0, 1, scheme) == pytest.approx(0.5, rel=MC_REL)


def test_density_matrix_integrand() -> None:
    g = small_matrix(2, seed=3)
    out = simplex_integrate(lambda s: g * s[0], 2.0, 1)
    assert out.allclose(g * 2.0, atol=QUAD_TOL)


def test_vectorized_path_matches_loop() -> None:
    def f(s: np.ndarray) -> np.ndarray:
        return np.cos(s[..., 0]) * s[..., -1]

    loop = simplex_integrate(f, 0.9, 3)
    vec = simplex_integrate(f, 0.9, 3, vectorized=True)
    assert vec == pytest.approx(loop, rel=1e-12)


def test_gauss_interval_is_exact_for_polynomials() -> None:
    x, w = gauss_interval(-1.0, 2.0, 4)
    assert float(np.sum(w * x**3)) == pytest.approx((2.0**4 - 1.0) / 4.0, rel=QUAD_TOL)


def test_bad_arguments() -> None:
    with pytest.raises(ValueError):
        simplex_rule(-1.0, 2)
    with pytest.raises(ValueError):
        simplex_rule(1.0, 0)


def test_zero_time_gives_zero() -> None:
    assert simplex_integrate(lambda s: 1.0, 0.0, 2) == 0.0


def test_deep_simplex_falls_back_to_montecarlo() -> None:
    scheme = SimplexScheme()
    n = MAX_GAUSS_DEPTH + 1
    assert nested_gauss(scheme, MAX_GAUSS_DEPTH)
    assert not nested_gauss(scheme, n)
    nodes, weights = simplex_rule(1.0, n, scheme)
    assert nodes.shape == (scheme.samples, n)
    assert np.all(np.diff(nodes, axis=1) <= 0)
    assert np.allclose(weights, 1.0 / math.factorial(n) / scheme.samples)
    assert simplex_integrate(lambda s: 1.0, 1.0, n) == pytest.approx(1.0 / math.factorial(n), rel=QUAD_TOL)
    # s_1 is the largest of n uniforms: mean n / (n + 1)
    expected = n / (n + 1) / math.factorial(n)
    assert simplex_integrate(lambda s: s[0], 1.0, n) == pytest.approx(expected, rel=MC_REL)
