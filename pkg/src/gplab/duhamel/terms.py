# src/gplab/duhamel/terms.py
from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..config.params import OmegaAverage, Randomization, SimplexScheme
from ..lattice.density import DensityMatrix, weighted_norm
from ..operators.collision import collision_combination, full_collision_terms
from ..operators.evolution import energies
from ..randomization.averages import MatrixBuilder, omega_averaged_sq_norm
from ..randomization.fields import field_from
from ..randomization.symbolic import RandomDensityMatrix
from .plan import ChainPlan, TopFn
from .sequences import GammaSequence

log = logging.getLogger(__name__)


def _top(seq: GammaSequence, order: int) -> TopFn:
    def top(times: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        return seq.values(order, times)

    return top


def duhamel_term(
    k: int,
    n: int,
    randomization: Randomization,
    seq: GammaSequence,
    t: float,
    scheme: SimplexScheme | None = None,
) -> DensityMatrix:
    """σ^(k)_n(t) = (−i)^n ∫ U^(k)(t−s_1) B^(k+1) … U^(n+k−1)(s_{n−1}−s_n) B^(n+k) γ^(n+k)(s_n) ds.

    Dependent randomization uses one field at every level, independent uses
    ω_m for the collision leaving order m; the full collisions are expanded as
    explicit sums over j.
    """
    if n == 0:
        return seq.at(k, t)
    field = field_from(randomization)
    plan = ChainPlan.hierarchy(seq.box, seq.support(n + k), k, n, field=field)
    column = plan.integrate(_top(seq, n + k), [t], scheme)[:, 0]
    return plan.to_density(column * (-1j) ** n)


def symbolic_duhamel_terms(
    k: int,
    n: int,
    independent: bool,
    seq: GammaSequence,
    t_points: Sequence[float],
    scheme: SimplexScheme | None = None,
) -> list[RandomDensityMatrix]:
    """σ^(k)_n at every t with the signs kept symbolic."""
    if n == 0:
        return [RandomDensityMatrix.from_density(seq.at(k, t)) for t in t_points]
    plan = ChainPlan.hierarchy(
        seq.box, seq.support(n + k), k, n, symbolic=True, independent=independent
    )
    cols = plan.integrate(_top(seq, n + k), t_points, scheme) * (-1j) ** n
    return [plan.to_random(cols[:, i]) for i in range(cols.shape[1])]


def averaged_term_norms(
    k: int,
    n: int,
    kind: str,
    seq: GammaSequence,
    t_points: Sequence[float],
    alpha: float,
    scheme: SimplexScheme | None = None,
    method: OmegaAverage | None = None,
) -> npt.NDArray[np.float64]:
    """‖S^(k,α) σ^(k)_n(t)‖_{L²(Ω)} at every t; `kind` is a Randomization kind."""
    if kind == "deterministic":
        terms = [
            duhamel_term(k, n, Randomization(kind="deterministic"), seq, t, scheme) for t in t_points
        ]
        return np.array([weighted_norm(g, alpha) for g in terms])
    xs = symbolic_duhamel_terms(k, n, kind == "independent", seq, t_points, scheme)
    out = [
        math.sqrt(omega_averaged_sq_norm(MatrixBuilder(x, kind == "independent"), alpha, method))
        for x in xs
    ]
    return np.array(out)


def constructed_residual(
    k: int,
    top_order: int,
    randomization: Randomization,
    seq: GammaSequence,
    t_grid: Sequence[float],
    scheme: SimplexScheme | None = None,
) -> float:
    """Largest ℓ² norm of i∂_tσ − (Σ|ξ|²−Σ|ξ'|²)σ − [B^(k+1)]^ω σ' on the interior of a uniform grid.

    σ = σ^(k)_{N−k}, σ' = σ^(k+1)_{N−k−1} for the top order N; the chained terms
    solve the hierarchy, so only the central difference and quadrature errors remain.
    """
    n = top_order - k
    if n < 1:
        raise ValueError(f"top order {top_order} must exceed k = {k}")
    ts = np.asarray(t_grid, dtype=np.float64)
    if ts.shape[0] < 3:
        raise ValueError("the residual needs at least three grid times")
    h = float(ts[1] - ts[0])
    if not np.allclose(np.diff(ts), h):
        raise ValueError("the residual needs a uniform time grid")
    field = field_from(randomization)
    top = _top(seq, top_order)
    outer = ChainPlan.hierarchy(seq.box, seq.support(top_order), k, n, field=field)
    inner = ChainPlan.hierarchy(seq.box, seq.support(top_order), k + 1, n - 1, field=field)
    sig = outer.integrate(top, ts, scheme) * (-1j) ** n
    sig_inner = inner.integrate(top, ts, scheme) * (-1j) ** (n - 1)
    e = energies(outer.out_keys)
    level_field = None if field is None else field.at_level(k + 1)
    worst = 0.0
    for i in range(1, ts.shape[0] - 1):
        lhs = 1j * (sig[:, i + 1] - sig[:, i - 1]) / (2 * h) - e * sig[:, i]
        rhs = collision_combination(inner.to_density(sig_inner[:, i]), full_collision_terms(k + 1), level_field)
        res = outer.to_density(lhs) - rhs
        worst = max(worst, weighted_norm(res, 0.0))
    log.debug("constructed residual k=%d N=%d h=%g: %.3e", k, top_order, h, worst)
    return worst
