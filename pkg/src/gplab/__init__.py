# src/gplab/__init__.py
"""
gplab: numerical laboratory for the randomized Gross-Pitaevskii hierarchy on a periodic lattice.

Public API:
- LatticeBox, DensityMatrix, ModeFunction: truncated frequency boxes and sparse kernels
- collide, full_collision, free_evolve: deterministic collision and free evolution
- HashSignField, randomized_collide, omega_averaged_sq_norm: sign randomization and L²(Ω) averages
- duhamel_term, decay_experiment, boardgame_demo: Duhamel expansion of the hierarchy
- sample_N, nonresonant_bound_check: non-resonant data class and its bounds
- nls_trajectory, hierarchy_residual: cubic NLS reference solutions
- read_density, write_density, write_report: text and report I/O
- ExperimentConfig, run: the experiment harness behind the ``gplab`` command
"""

from importlib import metadata as _metadata

try:  # populated if installed
    __version__ = _metadata.version("gplab")
except _metadata.PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

from .errors import (
    AcceptanceError,
    CapacityError,
    EmptyAdmissibleSetError,
    GplabError,
    MissingOrderError,
    OrderMismatchError,
    OutOfBoxError,
)
from .lattice import DensityMatrix, LatticeBox, ModeFunction, factorized, random_ensemble, weighted_norm
from .operators import collide, free_evolve, full_collision

# randomization first: duhamel and nonresonant build on it
from .randomization import HashSignField, omega_averaged_sq_norm, randomized_collide
from .duhamel import boardgame_demo, decay_experiment, duhamel_term
from .nonresonant import nonresonant_bound_check, sample_N
from .nls import hierarchy_residual, nls_trajectory
from .io import read_density, write_density, write_report
from .report import ExperimentReport
from .harness import ExperimentConfig, run

__all__ = [
    "AcceptanceError",
    "CapacityError",
    "DensityMatrix",
    "EmptyAdmissibleSetError",
    "ExperimentConfig",
    "ExperimentReport",
    "GplabError",
    "HashSignField",
    "LatticeBox",
    "MissingOrderError",
    "ModeFunction",
    "OrderMismatchError",
    "OutOfBoxError",
    "boardgame_demo",
    "collide",
    "decay_experiment",
    "duhamel_term",
    "factorized",
    "free_evolve",
    "full_collision",
    "hierarchy_residual",
    "nls_trajectory",
    "nonresonant_bound_check",
    "omega_averaged_sq_norm",
    "random_ensemble",
    "randomized_collide",
    "read_density",
    "run",
    "sample_N",
    "weighted_norm",
    "write_density",
    "write_report",
    "__version__",
]
