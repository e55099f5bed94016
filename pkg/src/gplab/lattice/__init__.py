# src/gplab/lattice/__init__.py
from .box import LatticeBox, as_freq
from .density import DensityMatrix, delta_matrix, weighted_norm
from .ensemble import generator, profile_weights, random_ensemble, symmetrized
from .modes import ModeFunction, factorized
from .weights import japanese_bracket, sobolev_weights

__all__ = [
    "DensityMatrix",
    "LatticeBox",
    "ModeFunction",
    "as_freq",
    "delta_matrix",
    "factorized",
    "generator",
    "japanese_bracket",
    "profile_weights",
    "random_ensemble",
    "sobolev_weights",
    "symmetrized",
    "weighted_norm",
]
