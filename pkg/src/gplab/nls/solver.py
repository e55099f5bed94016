# src/gplab/nls/solver.py
"""Truncated cubic NLS i∂_tφ + Δφ = |φ|²φ on the Fourier side of a lattice box.

The cubic term is the box-truncated convolution Σ_{a+b−c=ξ} φ̂(a)φ̂(b)conj(φ̂(c)),
all of a, b, c and ξ inside the box, which is what the collision operators
see. Time stepping is the integrating-factor (Lawson) RK4 scheme: the free
phase is exact and the cubic term is stepped explicitly.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.signal import fftconvolve

from ..config.defaults import Freq
from ..lattice.box import LatticeBox, as_freq
from ..lattice.modes import ModeFunction

log = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]


def dispersion(box: LatticeBox) -> npt.NDArray[np.float64]:
    """|ξ|² over the box in flat-index order."""
    f = box.frequencies()
    return np.sum(f * f, axis=1).astype(np.float64)


def cubic_term(box: LatticeBox, flat: ComplexArray) -> ComplexArray:
    """Truncated |φ|²φ on the Fourier side, flat in, flat out."""
    shape = (box.side,) * box.d
    phi = flat.reshape(shape)
    if not phi.any():
        return np.zeros(box.size, dtype=np.complex128)
    rev = np.conj(phi[(slice(None, None, -1),) * box.d])
    full = fftconvolve(fftconvolve(phi, phi), rev)
    # frequency s sits at index s + 3K of the triple convolution
    crop = tuple(slice(2 * box.K, 2 * box.K + box.side) for _ in range(box.d))
    return np.asarray(full[crop], dtype=np.complex128).reshape(-1)


@dataclass(frozen=True)
class NlsState:
    phi: ModeFunction
    t: float


class _Stepper:
    def __init__(self, box: LatticeBox, h: float, nonlinear: bool) -> None:
        self.box = box
        self.h = h
        self.nonlinear = nonlinear
        lam = dispersion(box)
        self.e_full = np.exp(-1j * lam * h)
        self.e_half = np.exp(-1j * lam * h / 2)

    def _n(self, u: ComplexArray) -> ComplexArray:
        return -1j * cubic_term(self.box, u)

    def step(self, u: ComplexArray) -> ComplexArray:
        if not self.nonlinear:
            return self.e_full * u
        h, e, e2 = self.h, self.e_full, self.e_half
        k1 = self._n(u)
        k2 = self._n(e2 * (u + 0.5 * h * k1))
        k3 = self._n(e2 * u + 0.5 * h * k2)
        k4 = self._n(e * u + h * e2 * k3)
        return e * u + (h / 6.0) * (e * k1 + 2.0 * e2 * (k2 + k3) + k4)


@dataclass(frozen=True, eq=False)
class NlsTrajectory:
    """Every step of one NLS run: ``states[i]`` is φ̂ at ``times[i]``, flat over the box."""

    box: LatticeBox
    dt: float
    times: npt.NDArray[np.float64]
    states: ComplexArray
    nonlinear: bool = True

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def flat_at(self, t: float) -> ComplexArray:
        """φ̂(t); off the grid one partial step is taken from the grid point below."""
        if t < 0 or t > self.t_end + 1e-12:
            raise ValueError(f"t={t} outside the trajectory [0, {self.t_end}]")
        if self.dt == 0:
            return self.states[0]
        i = min(int(round(t / self.dt)), self.times.shape[0] - 1)
        if abs(self.times[i] - t) <= 1e-12 * max(1.0, abs(t)):
            return self.states[i]
        i = min(int(math.floor(t / self.dt)), self.times.shape[0] - 1)
        return _Stepper(self.box, t - float(self.times[i]), self.nonlinear).step(self.states[i])

    def at(self, t: float) -> ModeFunction:
        return ModeFunction.from_dense(self.box, self.flat_at(t))

    def final(self) -> NlsState:
        return NlsState(self.at(self.t_end), self.t_end)

    def mass(self) -> npt.NDArray[np.float64]:
        """Σ|φ̂|² at every grid time."""
        return np.sum(np.abs(self.states) ** 2, axis=1)

    def mode_series(self, mode: int | tuple[int, ...]) -> ComplexArray:
        f = np.array(as_freq(mode, self.box.d), dtype=np.int64)
        self.box.check(f)
        return self.states[:, int(self.box.index(f))]


def _embedded(phi: ModeFunction, box: LatticeBox | None) -> ModeFunction:
    if box is None or box == phi.box:
        return phi
    if box.d != phi.box.d:
        raise ValueError(f"box dimension {box.d} differs from the data's {phi.box.d}")
    return ModeFunction(box, phi.keys, phi.values)


def nls_trajectory(
    phi0: ModeFunction,
    t_end: float,
    dt: float,
    *,
    box: LatticeBox | None = None,
    nonlinear: bool = True,
) -> NlsTrajectory:
    """Integrate to t_end with ceil(t_end/dt) equal steps, keeping every state."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    phi0 = _embedded(phi0, box)
    box = phi0.box
    steps = int(math.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    h = t_end / steps if steps else 0.0
    states = np.empty((steps + 1, box.size), dtype=np.complex128)
    states[0] = phi0.to_dense().reshape(-1)
    if steps:
        stepper = _Stepper(box, h, nonlinear)
        for i in range(steps):
            states[i + 1] = stepper.step(states[i])
    log.debug("nls trajectory K=%d d=%d steps=%d h=%g", box.K, box.d, steps, h)
    times = np.linspace(0.0, t_end, steps + 1)
    states.setflags(write=False)
    times.setflags(write=False)
    return NlsTrajectory(box, h, times, states, nonlinear)


def nls_evolve(
    phi0: ModeFunction,
    t_end: float,
    dt: float,
    box: LatticeBox | None = None,
    *,
    nonlinear: bool = True,
) -> NlsState:
    return nls_trajectory(phi0, t_end, dt, box=box, nonlinear=nonlinear).final()


def phase_rate(trajectory: NlsTrajectory, mode: int | Freq) -> float:
    """−d/dt arg φ̂(mode, t), least-squares slope of the unwrapped phase."""
    series = trajectory.mode_series(mode)
    if trajectory.times.shape[0] < 2:
        raise ValueError("phase rate needs at least two grid times")
    if np.any(series == 0):
        raise ValueError(f"mode {mode} vanishes along the trajectory")
    slope = np.polyfit(trajectory.times, np.unwrap(np.angle(series)), 1)[0]
    return float(-slope)


def mass(trajectory: NlsTrajectory) -> npt.NDArray[np.float64]:
    return trajectory.mass()
