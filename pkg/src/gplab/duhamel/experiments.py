# src/gplab/duhamel/experiments.py
from __future__ import annotations

import logging
import math
import time
from typing import Literal

import numpy as np

from ..config.defaults import DEFAULTS
from ..config.params import OmegaAverage, SimplexScheme
from ..operators.collision import full_collision_terms
from ..randomization.experiments import averaged_ratio
from ..randomization.operators import CollisionBuilder
from ..report import ExperimentReport
from .sequences import FrozenSequence, GammaSequence
from .terms import averaged_term_norms

log = logging.getLogger(__name__)

DecayMode = Literal["deterministic", "dependent", "independent"]

# wall times go to the summary so that reruns reproduce the rows exactly
DECAY_COLUMNS = ("n", "sup_norm", "ratio")


def collision_growth(
    seq: FrozenSequence,
    orders: range,
    alpha: float,
    c1: float,
    method: OmegaAverage | None = None,
) -> float:
    """M̂ = C₁ · max_m ‖S[B^(m)]^ω γ^(m)‖_{L²(Ω)} / ‖S γ^(m)‖ over the given orders.

    One Duhamel step multiplies the norm by roughly M̂·t, so T = 1/(4M̂) keeps
    the per-step factor 2M̂T at 1/2.
    """
    worst = 0.0
    for m in orders:
        gamma = seq.at(m)
        r = averaged_ratio(CollisionBuilder.single(gamma, full_collision_terms(m)), gamma, alpha, method)
        if r is not None:
            worst = max(worst, r)
    return c1 * worst


def decay_experiment(
    k: int,
    n_max: int,
    mode: DecayMode,
    seq: GammaSequence,
    alpha: float,
    T: float | None = None,
    scheme: SimplexScheme | None = None,
    method: OmegaAverage | None = None,
    *,
    c1: float | None = None,
    time_points: int = DEFAULTS.TIME_POINTS,
) -> ExperimentReport:
    """n ↦ sup_{t ∈ (0, T]} ‖S^(k,α) σ^(k)_n(t)‖_{L²(Ω)}, one row per n = 1..n_max, with successive ratios.

    The n = 0 term (γ^(k) itself) goes to the summary as `n0_sup_norm`.

    When T is None it is chosen as 1/(4M̂) from the frozen data; that needs a
    FrozenSequence holding orders k+1..k+n_max.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if time_points < 2:
        raise ValueError(f"time_points must be >= 2, got {time_points}")
    growth = None
    if T is None:
        if not isinstance(seq, FrozenSequence):
            raise ValueError("T must be given for a time-dependent sequence")
        c1 = c1 if c1 is not None else seq.a_priori_constant(alpha)
        growth = collision_growth(seq, range(k + 1, k + n_max + 1), alpha, c1, method)
        T = 1.0 / (4.0 * growth) if growth > 0 else 1.0
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    t_points = np.linspace(0.0, T, time_points)[1:]

    report = ExperimentReport("duhamel-decay", DECAY_COLUMNS)
    previous: float | None = None
    n0_sup: float | None = None
    wall: list[float] = []
    for n in range(n_max + 1):
        start = time.perf_counter()
        pts = np.array([0.0]) if n == 0 and T == 0 else t_points
        norms = averaged_term_norms(k, n, mode, seq, pts.tolist(), alpha, scheme, method)
        sup = float(np.max(norms)) if norms.size else 0.0
        ratio = sup / previous if previous and n > 1 else None
        elapsed = time.perf_counter() - start
        log.info("decay %s k=%d n=%d: sup=%.6e ratio=%s (%.2fs)", mode, k, n, sup, ratio, elapsed)
        wall.append(elapsed)
        previous = sup
        if n == 0:
            n0_sup = sup
            continue
        report.add_row(n, sup, ratio)

    ratios = [r for r in report.column("ratio") if r is not None]
    norms = report.column("sup_norm")
    report.summary.update(
        T=T,
        n0_sup_norm=n0_sup,
        growth_estimate=growth,
        max_ratio=max(ratios, default=None),
        monotone=all(b < a for a, b in zip(norms, norms[1:], strict=False)),
        wall_time=wall,
    )
    if c1 is not None:
        report.summary["c1"] = c1
        report.summary["order_k_bound"] = c1**k
    report.header.update(k=k, n_max=n_max, mode=mode, alpha=alpha, box=str(seq.box))
    if not all(math.isfinite(v) for v in norms):
        log.warning("decay series has non-finite norms")
    return report
