# src/gplab/randomization/__init__.py
from .fields import (
    ConstantSignField,
    HashSignField,
    LevelledSignField,
    SignField,
    TableSignField,
    field_from,
    level_seed,
    split_seed,
)
from .symbolic import RandomDensityMatrix, symbolic_collide
from .operators import (
    CollisionBuilder,
    DataRandomizedBuilder,
    full_randomized_collision,
    randomize_density,
    randomize_function,
    randomized_collide,
)
from .averages import (
    MatrixBuilder,
    builder_variables,
    enumerate_sq_norm,
    montecarlo_sq_norms,
    omega_averaged_sq_norm,
    sign_product_expectation,
)
from .experiments import (
    cor2_tail_experiment,
    data_randomized_experiment,
    ratio_terms,
    second_iterate_experiment,
    thm1_ratio_experiment,
)

__all__ = [
    "CollisionBuilder",
    "ConstantSignField",
    "DataRandomizedBuilder",
    "HashSignField",
    "LevelledSignField",
    "MatrixBuilder",
    "RandomDensityMatrix",
    "SignField",
    "TableSignField",
    "builder_variables",
    "cor2_tail_experiment",
    "data_randomized_experiment",
    "enumerate_sq_norm",
    "field_from",
    "full_randomized_collision",
    "level_seed",
    "montecarlo_sq_norms",
    "omega_averaged_sq_norm",
    "randomize_density",
    "randomize_function",
    "randomized_collide",
    "ratio_terms",
    "second_iterate_experiment",
    "sign_product_expectation",
    "split_seed",
    "symbolic_collide",
    "thm1_ratio_experiment",
]
