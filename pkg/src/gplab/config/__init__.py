# src/gplab/config/__init__.py
from .defaults import DEFAULTS, Defaults, Freq, Key
from .params import EnsembleProfile, NonResonantSpec, OmegaAverage, Randomization, SimplexScheme

__all__ = [
    "DEFAULTS",
    "Defaults",
    "EnsembleProfile",
    "Freq",
    "Key",
    "NonResonantSpec",
    "OmegaAverage",
    "Randomization",
    "SimplexScheme",
]
