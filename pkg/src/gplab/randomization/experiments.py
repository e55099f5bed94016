# src/gplab/randomization/experiments.py
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from typing import Literal

import numpy as np

from ..config.defaults import GAUSS_ORDER
from ..config.params import EnsembleProfile, OmegaAverage
from ..lattice.box import LatticeBox
from ..lattice.density import DensityMatrix, weighted_norm
from ..lattice.ensemble import random_ensemble
from ..operators.collision import CollisionIndex
from ..operators.evolution import free_evolve
from ..report import ExperimentReport
from ..utils.parallel import ordered_map
from ..utils.quadrature import gauss_interval
from .averages import Builder, montecarlo_sq_norms, omega_averaged_sq_norm
from .fields import split_seed
from .operators import CollisionBuilder, DataRandomizedBuilder

log = logging.getLogger(__name__)

CollisionPart = Literal["full", "plus", "minus"]
OperatorKind = Literal["single", "full"]

RATIO_COLUMNS = ("K", "sample", "ratio", "status")


def ratio_terms(
    k: int,
    j: int,
    collision: CollisionPart = "full",
    operator: OperatorKind = "single",
) -> list[tuple[CollisionIndex, complex]]:
    """Terms of B_{j,k+1} (or its plus/minus part), or of the full B^(k+1)."""
    if not 1 <= j <= k:
        raise ValueError(f"need 1 <= j <= k, got j={j}, k={k}")
    js = [j] if operator == "single" else list(range(1, k + 1))
    terms: list[tuple[CollisionIndex, complex]] = []
    for jj in js:
        if collision in ("full", "plus"):
            terms.append((CollisionIndex.plus(jj, k + 1), 1.0))
        if collision in ("full", "minus"):
            terms.append((CollisionIndex.minus(jj, k + 1), -1.0))
    return terms


def averaged_ratio(
    builder: Builder,
    gamma: DensityMatrix,
    alpha: float,
    method: OmegaAverage | None = None,
) -> float | None:
    """‖S builder‖_{L²(Ω)} / ‖S γ‖, or None when γ vanishes."""
    rhs = weighted_norm(gamma, alpha)
    if rhs == 0:
        return None
    return math.sqrt(omega_averaged_sq_norm(builder, alpha, method)) / rhs


def windowed_ratio(
    gamma: DensityMatrix,
    terms: Sequence[tuple[CollisionIndex, complex]],
    alpha: float,
    window: float,
    method: OmegaAverage | None = None,
    order: int = GAUSS_ORDER,
) -> float | None:
    """(E ∫_0^T ‖S[B]^ω U(t)γ‖² dt / T)^{1/2} / ‖Sγ‖, Gauss–Legendre in t."""
    rhs = weighted_norm(gamma, alpha)
    if rhs == 0 or window <= 0:
        return None
    nodes, weights = gauss_interval(0.0, window, order)
    acc = math.fsum(
        float(w) * omega_averaged_sq_norm(CollisionBuilder.single(free_evolve(gamma, t), terms), alpha, method)
        for t, w in zip(nodes, weights, strict=True)
    )
    return math.sqrt(acc / window) / rhs


def _ratio_sweep(
    name: str,
    order: int,
    ratio_of: Callable[[DensityMatrix], float | None],
    cutoffs: Sequence[int],
    samples: int,
    seed: int,
    d: int,
    profile: EnsembleProfile,
) -> ExperimentReport:
    report = ExperimentReport(name, RATIO_COLUMNS)
    seeds = split_seed(seed, samples)
    maxima: dict[int, float] = {}
    for K in cutoffs:
        box = LatticeBox(d, K)
        log.info("%s: K=%d order=%d samples=%d", name, K, order, samples)

        def one(s: int, box: LatticeBox = box) -> float | None:
            return ratio_of(random_ensemble(order, box, s, profile))

        ratios = ordered_map(one, seeds)
        ok = [r for r in ratios if r is not None]
        for i, r in enumerate(ratios):
            report.add_row(K, i, r, "ok" if r is not None else "skipped")
        if ok:
            maxima[K] = max(ok)
            report.summary[f"K={K}"] = {"max": max(ok), "mean": math.fsum(ok) / len(ok), "n": len(ok)}
        else:
            report.summary[f"K={K}"] = {"max": None, "mean": None, "n": 0}
    if len(maxima) >= 2:
        ks = sorted(maxima)
        report.summary["growth"] = maxima[ks[-1]] / maxima[ks[0]] - 1.0
    return report


def thm1_ratio_experiment(
    k: int,
    j: int,
    alpha: float,
    cutoffs: Sequence[int],
    samples: int,
    seed: int,
    *,
    d: int = 1,
    profile: EnsembleProfile | None = None,
    collision: CollisionPart = "full",
    operator: OperatorKind = "single",
    method: OmegaAverage | None = None,
    time_window: float | None = None,
) -> ExperimentReport:
    """Ratio ‖S^(k,α)[B_{j,k+1}]^ω γ‖_{L²(Ω)} / ‖S^(k+1,α)γ‖ over random γ, per cutoff."""
    profile = profile or EnsembleProfile(nnz=64)
    terms = ratio_terms(k, j, collision, operator)

    def ratio_of(gamma: DensityMatrix) -> float | None:
        if time_window:
            return windowed_ratio(gamma, terms, alpha, time_window, method)
        return averaged_ratio(CollisionBuilder.single(gamma, terms), gamma, alpha, method)

    report = _ratio_sweep("thm1-ratio", k + 1, ratio_of, cutoffs, samples, seed, d, profile)
    report.header.update(k=k, j=j, alpha=alpha, d=d, collision=collision, operator=operator)
    return report


def data_randomized_experiment(
    k: int,
    j: int,
    alpha: float,
    cutoffs: Sequence[int],
    samples: int,
    seed: int,
    *,
    d: int = 1,
    profile: EnsembleProfile | None = None,
    method: OmegaAverage | None = None,
) -> ExperimentReport:
    """Ratio ‖S B_{j,k+1}(γ_ω)‖_{L²(Ω)} / ‖Sγ‖ for the initial-data randomization."""
    profile = profile or EnsembleProfile(nnz=64)
    terms = tuple(ratio_terms(k, j))

    def ratio_of(gamma: DensityMatrix) -> float | None:
        return averaged_ratio(DataRandomizedBuilder(gamma, terms), gamma, alpha, method)

    report = _ratio_sweep("data-randomized", k + 1, ratio_of, cutoffs, samples, seed, d, profile)
    report.header.update(k=k, j=j, alpha=alpha, d=d)
    return report


SECOND_ITERATE_TIES = [("u1", "u2"), ("p2", "p3")]


def second_iterate_experiment(
    alpha: float,
    cutoffs: Sequence[int],
    samples: int,
    seed: int,
    *,
    d: int = 1,
    nnz: int = 64,
    method: OmegaAverage | None = None,
) -> ExperimentReport:
    """Ratio for [B⁺_{1,2}]^ω [B⁺_{2,3}]^ω on data tied to the resonant pairing."""
    profile = EnsembleProfile(kind="tied", nnz=nnz, ties=SECOND_ITERATE_TIES)
    levels = (
        ((CollisionIndex.plus(2, 3), 1.0),),
        ((CollisionIndex.plus(1, 2), 1.0),),
    )

    def ratio_of(gamma: DensityMatrix) -> float | None:
        return averaged_ratio(CollisionBuilder(gamma, levels), gamma, alpha, method)

    report = _ratio_sweep("second-iterate", 3, ratio_of, cutoffs, samples, seed, d, profile)
    report.header.update(alpha=alpha, d=d, ties=SECOND_ITERATE_TIES)
    return report


TAIL_COLUMNS = ("lambda", "tail", "bound", "ok")


def cor2_tail_experiment(
    k: int,
    j: int,
    alpha: float,
    cutoff: int,
    samples: int,
    seed: int,
    *,
    d: int = 1,
    profile: EnsembleProfile | None = None,
    lambdas: Sequence[float] = (),
    window: float | None = None,
    collision: CollisionPart = "full",
    order: int = GAUSS_ORDER,
) -> ExperimentReport:
    """Empirical P(X ≥ λ) against the Markov curve C₀²T‖S^(k+1,α)γ‖²/λ².

    X(ω) = ‖S[B_{j,k+1}]^ω γ‖, or its L²(0,T) version when a window is given;
    C₀ is measured as the root of E X² / (T‖Sγ‖²) over the same samples.
    """
    profile = profile or EnsembleProfile(nnz=64)
    gamma = random_ensemble(k + 1, LatticeBox(d, cutoff), seed, profile)
    terms = ratio_terms(k, j, collision)
    field_seed = split_seed(seed, 2)[1]
    T = window if window else 1.0
    if window:
        nodes, weights = gauss_interval(0.0, window, order)
        sq = sum(
            float(w)
            * montecarlo_sq_norms(
                CollisionBuilder.single(free_evolve(gamma, t), terms), alpha, samples, field_seed
            )
            for t, w in zip(nodes, weights, strict=True)
        )
    else:
        sq = montecarlo_sq_norms(CollisionBuilder.single(gamma, terms), alpha, samples, field_seed)
    x = np.sqrt(np.asarray(sq, dtype=np.float64))
    second = math.fsum((x * x).tolist()) / samples
    norm = weighted_norm(gamma, alpha)
    c0 = math.sqrt(second / (T * norm**2)) if norm > 0 else None
    quantiles = np.quantile(x, [0.0, 0.25, 0.5, 0.75, 0.9, 0.99])
    grid = list(lambdas) or [*(float(v) for v in quantiles), 2.0 * float(x.max())]

    report = ExperimentReport("cor2-tail", TAIL_COLUMNS)
    for lam in grid:
        tail = float(np.count_nonzero(x >= lam)) / samples
        bound = second / lam**2 if lam > 0 else math.inf
        report.add_row(lam, tail, bound, tail <= bound)
    report.summary.update(C0=c0, second_moment=second, gamma_norm=norm, window=T)
    report.header.update(k=k, j=j, alpha=alpha, d=d, K=cutoff, samples=samples, seed=seed)
    return report
