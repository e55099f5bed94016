# src/gplab/nls/residuals.py
from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from ..duhamel.sequences import FactorizedSequence
from ..lattice.box import LatticeBox
from ..lattice.density import DensityMatrix, weighted_norm
from ..lattice.ensemble import complex_normal, generator
from ..lattice.modes import ModeFunction
from ..operators.collision import collision_combination, full_collision_terms
from ..operators.evolution import energies
from ..randomization.fields import HashSignField, SignField
from ..report import ExperimentReport
from ..utils.parallel import ordered_map
from .solver import NlsTrajectory, cubic_term, dispersion, nls_trajectory, phase_rate

log = logging.getLogger(__name__)


class RandomizedResidual(NamedTuple):
    nls: float
    hierarchy: float


def _interior(trajectory: NlsTrajectory, every: int) -> range:
    if every < 1:
        raise ValueError(f"every must be >= 1, got {every}")
    return range(1, trajectory.times.shape[0] - 1, every)


def hierarchy_residual(
    trajectory: NlsTrajectory,
    k: int,
    *,
    field: SignField | None = None,
    every: int = 1,
) -> float:
    """max_t ‖i∂_tγ^(k) − (Σ|ξ|² − Σ|ξ'|²)γ^(k) − [B^(k+1)]^ω γ^(k+1)‖ with γ^(m) = factorized(ψ(t), m).

    ψ = T^ω φ when a field is given (then the collision carries the same field),
    φ otherwise. ∂_t is the central difference over the trajectory step.
    """
    if trajectory.times.shape[0] < 3:
        raise ValueError("the residual needs at least three grid times")
    seq = FactorizedSequence(trajectory, field)
    keys = seq.support(k)
    if keys.shape[0] == 0:
        return 0.0
    keys_top = seq.support(k + 1)
    e = energies(keys)
    h = trajectory.dt
    terms = full_collision_terms(k + 1)
    worst = 0.0
    for i in _interior(trajectory, every):
        t = trajectory.times[[i - 1, i, i + 1]]
        v = seq.values(k, t)
        lhs = 1j * (v[:, 2] - v[:, 0]) / (2 * h) - e * v[:, 1]
        top = DensityMatrix(trajectory.box, k + 1, keys_top, seq.values(k + 1, t[1:2])[:, 0])
        rhs = collision_combination(top, terms, field)
        res = DensityMatrix(trajectory.box, k, keys, lhs) - rhs
        worst = max(worst, weighted_norm(res, 0.0))
    return worst


def nls_residual(trajectory: NlsTrajectory, field: SignField | None = None, *, every: int = 1) -> float:
    """max_t ‖i∂_tψ − |ξ|²ψ − T^ω(|T^ωψ|²T^ωψ)‖ for ψ = T^ω φ (ψ = φ without a field)."""
    if trajectory.times.shape[0] < 3:
        raise ValueError("the residual needs at least three grid times")
    box = trajectory.box
    signs = np.ones(box.size) if field is None else field.signs(box.frequencies()).astype(np.float64)
    lam = dispersion(box)
    h = trajectory.dt
    worst = 0.0
    for i in _interior(trajectory, every):
        psi_m, psi, psi_p = (signs * trajectory.states[j] for j in (i - 1, i, i + 1))
        lhs = 1j * (psi_p - psi_m) / (2 * h) - lam * psi
        rhs = signs * cubic_term(box, signs * psi)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def randomized_nls_residual(
    phi0: ModeFunction,
    field: SignField,
    t_end: float,
    dt: float,
    *,
    k: int = 1,
    every: int = 1,
) -> RandomizedResidual:
    """Evolve φ, set ψ = T^ω φ, and measure the randomized NLS and hierarchy residuals of ψ."""
    traj = nls_trajectory(phi0, t_end, dt)
    return RandomizedResidual(
        nls_residual(traj, field, every=every),
        hierarchy_residual(traj, k, field=field, every=every),
    )


def small_data(box: LatticeBox, seed: int, amplitude: float = 0.1) -> ModeFunction:
    """Complex Gaussian coefficients on every mode of the box, scaled by `amplitude`."""
    rng = generator(seed)
    return ModeFunction(box, box.frequencies(), amplitude * complex_normal(rng, box.size))


def convergence_slope(dts: Sequence[float], residuals: Sequence[float]) -> float | None:
    """Least-squares slope of log(residual) against log(dt); None if any residual vanishes."""
    r = np.asarray(residuals, dtype=np.float64)
    if r.shape[0] < 2 or np.any(r <= 0):
        return None
    return float(np.polyfit(np.log(np.asarray(dts, dtype=np.float64)), np.log(r), 1)[0])


class PhaseCheck(NamedTuple):
    rate: float
    expected: float
    rel_err: float


def single_mode_phase_check(
    d: int = 1,
    amplitude: float = 0.5,
    t_end: float = 1.0,
    dt: float = 1e-4,
) -> PhaseCheck:
    """Phase rate of φ = a e_ξ with ξ = (1, 0, …), against the exact |ξ|² + |a|²."""
    box = LatticeBox(d, 1)
    mode = (1,) + (0,) * (d - 1)
    traj = nls_trajectory(ModeFunction.from_mapping(box, {mode: amplitude}), t_end, dt)
    expected = 1.0 + abs(amplitude) ** 2
    rate = phase_rate(traj, mode)
    return PhaseCheck(rate, expected, abs(rate - expected) / expected)


RESIDUAL_COLUMNS = ("variant", "k", "dt", "residual")


def nls_residual_experiment(
    phi0: ModeFunction,
    dts: Sequence[float],
    t_end: float,
    *,
    ks: Sequence[int] = (1, 2),
    field_seed: int | None = None,
    every: int = 1,
    phase_dt: float = 1e-4,
) -> ExperimentReport:
    """Residual refinement study: (dt, residual) rows per variant and slope fits in the summary.

    The summary also carries the single-mode phase rate over unit time at `phase_dt`.

    Variants are the deterministic hierarchy for every k, the randomized NLS,
    and the randomized hierarchy at k = 1 when `field_seed` is given.
    """
    field = None if field_seed is None else HashSignField(field_seed)

    def run(dt: float) -> list[tuple[str, int, float, float]]:
        traj = nls_trajectory(phi0, t_end, dt)
        rows = [("hierarchy", k, dt, hierarchy_residual(traj, k, every=every)) for k in ks]
        if field is not None:
            rows.append(("randomized-nls", 0, dt, nls_residual(traj, field, every=every)))
            rows.append(("randomized-hierarchy", 1, dt, hierarchy_residual(traj, 1, field=field, every=every)))
        log.info("nls residuals dt=%g: %s", dt, ", ".join(f"{v}/{k}={r:.3e}" for v, k, _, r in rows))
        return rows

    report = ExperimentReport("nls-residual", RESIDUAL_COLUMNS)
    for rows in ordered_map(run, list(dts)):
        report.extend(rows)
    for variant, k in dict.fromkeys((r[0], r[1]) for r in report.rows):
        sel = report.where(variant=variant, k=k)
        slope = convergence_slope([r["dt"] for r in sel], [r["residual"] for r in sel])
        report.summary[f"slope[{variant},k={k}]"] = slope
    report.header.update(box=str(phi0.box), t_end=t_end, dts=list(dts), ks=list(ks), field_seed=field_seed)
    report.summary["mass0"] = phi0.mass()
    phase = single_mode_phase_check(phi0.box.d, dt=phase_dt)
    report.summary.update(
        phase_rate=phase.rate, phase_rate_expected=phase.expected, phase_rate_rel_err=phase.rel_err
    )
    return report
