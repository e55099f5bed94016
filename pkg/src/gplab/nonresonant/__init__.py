# src/gplab/nonresonant/__init__.py
from .classes import (
    admissible_count,
    admissible_keys,
    admissible_mask,
    chain_slots,
    min_admissible_cutoff,
    modulus_shells,
    project_N,
    sample_N,
)
from .bounds import (
    diagonal_pairing_sum,
    nonresonant_bound_check,
    nonresonant_sweep,
    pairing_oracle,
    random_word,
)

__all__ = [
    "admissible_count",
    "admissible_keys",
    "admissible_mask",
    "chain_slots",
    "diagonal_pairing_sum",
    "min_admissible_cutoff",
    "modulus_shells",
    "nonresonant_bound_check",
    "nonresonant_sweep",
    "pairing_oracle",
    "project_N",
    "random_word",
    "sample_N",
]
