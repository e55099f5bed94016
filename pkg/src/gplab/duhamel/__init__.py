# src/gplab/duhamel/__init__.py
from .quadrature import gauss_interval, gauss_unit, simplex_integrate, simplex_rule
from .word import DuhamelWord, WordBuilder, duhamel_integrand, symbolic_integrand
from .plan import ChainPlan, hierarchy_terms
from .sequences import FactorizedSequence, FrozenSequence, GammaSequence
from .terms import averaged_term_norms, constructed_residual, duhamel_term, symbolic_duhamel_terms
from .bookkeeping import ExpansionBookkeeping, expansion_bookkeeping
from .boardgame import boardgame_demo, boardgame_gamma, boardgame_integral
from .experiments import collision_growth, decay_experiment

__all__ = [
    "ChainPlan",
    "DuhamelWord",
    "ExpansionBookkeeping",
    "FactorizedSequence",
    "FrozenSequence",
    "GammaSequence",
    "WordBuilder",
    "averaged_term_norms",
    "boardgame_demo",
    "boardgame_gamma",
    "boardgame_integral",
    "collision_growth",
    "constructed_residual",
    "decay_experiment",
    "duhamel_integrand",
    "duhamel_term",
    "expansion_bookkeeping",
    "gauss_interval",
    "gauss_unit",
    "hierarchy_terms",
    "simplex_integrate",
    "simplex_rule",
    "symbolic_duhamel_terms",
    "symbolic_integrand",
]
