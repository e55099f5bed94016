# src/gplab/duhamel/quadrature.py
from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Callable
from typing import Any

import numpy as np

from ..config.defaults import MAX_GAUSS_DEPTH
from ..config.params import SimplexScheme
from ..lattice.density import DensityMatrix
from ..lattice.ensemble import generator
from ..utils.quadrature import FloatArray, gauss_interval, gauss_unit

__all__ = ["gauss_interval", "gauss_unit", "nested_gauss", "simplex_integrate", "simplex_rule"]


def nested_gauss(scheme: SimplexScheme, n: int) -> bool:
    """True when the n-fold simplex integral uses the tensor Gauss rule; deeper ones use Monte Carlo."""
    return scheme.kind == "gauss" and n <= MAX_GAUSS_DEPTH


@functools.lru_cache
def _collapsed_unit(n: int, order: int) -> tuple[FloatArray, FloatArray]:
    # s_1 = u_1, s_i = s_{i-1} u_i ; Jacobian Π u_i^{n-i}
    x, w = gauss_unit(order)
    u = np.array(list(itertools.product(x, repeat=n)))
    wu = np.array(list(itertools.product(w, repeat=n)))
    s = np.cumprod(u, axis=1)
    jac = np.prod(u ** np.arange(n - 1, -1, -1)[None, :], axis=1)
    weights = np.prod(wu, axis=1) * jac
    s.setflags(write=False)
    weights.setflags(write=False)
    return s, weights


def simplex_rule(
    t: float,
    n: int,
    scheme: SimplexScheme | None = None,
) -> tuple[FloatArray, FloatArray]:
    """Nodes (rows t ≥ s_1 ≥ … ≥ s_n ≥ 0) and weights for the time simplex."""
    scheme = scheme or SimplexScheme()
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if nested_gauss(scheme, n):
        s, w = _collapsed_unit(n, scheme.order)
        return t * s, w * t**n
    rng = generator(scheme.seed)
    nodes = -np.sort(-rng.uniform(0.0, t, size=(scheme.samples, n)), axis=1)
    weights = np.full(scheme.samples, t**n / math.factorial(n) / scheme.samples)
    return nodes, weights


def simplex_integrate(
    f: Callable[[Any], Any],
    t: float,
    n: int,
    scheme: SimplexScheme | None = None,
    *,
    vectorized: bool = False,
) -> Any:
    """∫_{t ≥ s_1 ≥ … ≥ s_n ≥ 0} f(s) ds.

    `f` takes one node (length-n array) and returns a number, an array or a
    DensityMatrix; with ``vectorized`` it takes all nodes (m, n) at once and
    returns an array whose first axis runs over nodes.
    """
    nodes, weights = simplex_rule(t, n, scheme)
    if vectorized:
        return np.tensordot(weights, np.asarray(f(nodes)), axes=1)
    values = [f(node) for node in nodes]
    if values and isinstance(values[0], DensityMatrix):
        return DensityMatrix.linear_combination(weights.tolist(), values)
    return np.tensordot(weights, np.asarray(values), axes=1)
