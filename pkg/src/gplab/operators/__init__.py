# src/gplab/operators/__init__.py
from .collision import (
    CollisionImage,
    CollisionIndex,
    Sign,
    collide,
    collision_combination,
    full_collision,
    full_collision_terms,
    push_forward,
)
from .evolution import apply_fractional_derivative, energies, free_evolve, free_evolve_modes

__all__ = [
    "CollisionImage",
    "CollisionIndex",
    "Sign",
    "apply_fractional_derivative",
    "collide",
    "collision_combination",
    "energies",
    "free_evolve",
    "free_evolve_modes",
    "full_collision",
    "full_collision_terms",
    "push_forward",
]
