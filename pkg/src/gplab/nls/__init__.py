# src/gplab/nls/__init__.py
from .solver import (
    NlsState,
    NlsTrajectory,
    cubic_term,
    dispersion,
    mass,
    nls_evolve,
    nls_trajectory,
    phase_rate,
)
from .residuals import (
    PhaseCheck,
    RandomizedResidual,
    convergence_slope,
    hierarchy_residual,
    nls_residual,
    nls_residual_experiment,
    randomized_nls_residual,
    single_mode_phase_check,
    small_data,
)

__all__ = [
    "NlsState",
    "NlsTrajectory",
    "PhaseCheck",
    "RandomizedResidual",
    "convergence_slope",
    "cubic_term",
    "dispersion",
    "hierarchy_residual",
    "mass",
    "nls_evolve",
    "nls_residual",
    "nls_residual_experiment",
    "nls_trajectory",
    "phase_rate",
    "randomized_nls_residual",
    "single_mode_phase_check",
    "small_data",
]
