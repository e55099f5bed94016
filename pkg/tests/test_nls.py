# tests/test_nls.py
from __future__ import annotations

import itertools

import numpy as np
import pytest

from gplab.lattice import LatticeBox, ModeFunction
from gplab.nls import (
    convergence_slope,
    cubic_term,
    hierarchy_residual,
    mass,
    nls_evolve,
    nls_residual,
    nls_residual_experiment,
    nls_trajectory,
    phase_rate,
    randomized_nls_residual,
    single_mode_phase_check,
    small_data,
)
from gplab.operators import free_evolve_modes
from gplab.randomization import ConstantSignField, HashSignField

from ._util import EXACT_TOL

BOX = LatticeBox(1, 3)
SLOPE_MIN = 1.9
PHASE_REL_MAX = 1e-6


def _brute_cubic(box: LatticeBox, flat: np.ndarray) -> np.ndarray:
    freqs = [tuple(f) for f in box.frequencies().tolist()]
    where = {f: i for i, f in enumerate(freqs)}
    out = np.zeros(box.size, dtype=np.complex128)
    for a, b, c in itertools.product(range(box.size), repeat=3):
        xi = tuple(x + y - z for x, y, z in zip(freqs[a], freqs[b], freqs[c], strict=True))
        if xi in where:
            out[where[xi]] += flat[a] * flat[b] * np.conj(flat[c])
    return out


@pytest.mark.parametrize("box", [LatticeBox(1, 2), LatticeBox(2, 1)])
def test_cubic_term_matches_triple_sum(box: LatticeBox) -> None:
    rng = np.random.default_rng(box.d)
    flat = rng.normal(size=box.size) + 1j * rng.normal(size=box.size)
    assert np.allclose(cubic_term(box, flat), _brute_cubic(box, flat), atol=1e-10)


def test_zero_data_stays_zero() -> None:
    phi0 = ModeFunction.from_dense(BOX, np.zeros(BOX.side))
    traj = nls_trajectory(phi0, 0.5, 0.1)
    assert not traj.states.any()
    assert mass(traj).tolist() == [0.0] * traj.times.shape[0]
    assert hierarchy_residual(traj, 1) == 0.0
    assert nls_residual(traj) == 0.0


def test_single_mode_solution() -> None:
    # φ = a e_n solves i∂φ = (n² + |a|²)φ exactly
    a, n = 0.5, 2
    traj = nls_trajectory(ModeFunction.from_mapping(BOX, {n: a}), 1.0, 0.01)
    rate = n * n + a * a
    assert phase_rate(traj, n) == pytest.approx(rate, rel=1e-8)
    assert traj.final().phi[(n,)] == pytest.approx(a * np.exp(-1j * rate), abs=1e-8)
    assert traj.final().t == 1.0


def test_mass_is_conserved() -> None:
    traj = nls_trajectory(small_data(BOX, 2, 0.3), 1.0, 0.01)
    m = mass(traj)
    assert np.allclose(m, m[0], rtol=1e-7)


def test_linear_flow_matches_free_evolution() -> None:
    phi0 = small_data(BOX, 4)
    traj = nls_trajectory(phi0, 1.0, 0.1, nonlinear=False)
    assert np.allclose(traj.at(1.0).to_dense(), free_evolve_modes(phi0, 1.0).to_dense(), atol=EXACT_TOL)
    # off-grid times take one partial step
    assert np.allclose(traj.at(0.55).to_dense(), free_evolve_modes(phi0, 0.55).to_dense(), atol=EXACT_TOL)


def test_trajectory_arguments() -> None:
    phi0 = small_data(BOX, 1)
    with pytest.raises(ValueError):
        nls_trajectory(phi0, 1.0, 0.0)
    with pytest.raises(ValueError):
        nls_trajectory(phi0, -1.0, 0.1)
    traj = nls_trajectory(phi0, 0.3, 0.1)
    with pytest.raises(ValueError):
        traj.flat_at(0.5)
    assert nls_evolve(phi0, 0.0, 0.1).phi.values.tolist() == phi0.values.tolist()
    bigger = nls_trajectory(phi0, 0.1, 0.1, box=LatticeBox(1, 5))
    assert bigger.box.K == 5


def test_phase_rate_needs_a_live_mode() -> None:
    traj = nls_trajectory(ModeFunction.from_dense(BOX, np.zeros(BOX.side)), 0.2, 0.05)
    with pytest.raises(ValueError):
        phase_rate(traj, 3)


def test_constant_field_residuals_are_deterministic() -> None:
    traj = nls_trajectory(small_data(LatticeBox(1, 2), 5), 0.2, 0.02)
    plus = ConstantSignField(1)
    assert nls_residual(traj, plus) == nls_residual(traj)
    assert hierarchy_residual(traj, 1, field=plus) == pytest.approx(hierarchy_residual(traj, 1), rel=1e-12)


def test_randomized_residuals_are_small() -> None:
    res = randomized_nls_residual(small_data(LatticeBox(1, 2), 6), HashSignField(9), 0.2, 0.01)
    assert 0 < res.nls < 1e-2
    assert 0 < res.hierarchy < 1e-2


def test_residual_experiment_converges_at_second_order() -> None:
    report = nls_residual_experiment(
        small_data(LatticeBox(1, 2), 1, 0.3), [0.02, 0.01, 0.005], 0.2, ks=(1,), field_seed=7, phase_dt=1e-3
    )
    assert set(report.column("variant")) == {"hierarchy", "randomized-nls", "randomized-hierarchy"}
    assert len(report.rows) == 9
    assert report.summary["slope[hierarchy,k=1]"] >= SLOPE_MIN
    assert report.summary["slope[randomized-nls,k=0]"] >= SLOPE_MIN
    assert report.summary["mass0"] > 0
    assert report.summary["phase_rate_rel_err"] <= PHASE_REL_MAX


def test_convergence_slope() -> None:
    assert convergence_slope([0.1, 0.05], [1e-2, 2.5e-3]) == pytest.approx(2.0)
    assert convergence_slope([0.1, 0.05], [1e-2, 0.0]) is None
    assert convergence_slope([0.1], [1e-2]) is None


@pytest.mark.parametrize("d", [1, 2])
def test_single_mode_phase_check(d: int) -> None:
    check = single_mode_phase_check(d, amplitude=0.5, dt=1e-3)
    assert check.expected == pytest.approx(1.25)
    assert check.rel_err <= PHASE_REL_MAX
    assert check.rate == pytest.approx(check.expected, rel=PHASE_REL_MAX)
