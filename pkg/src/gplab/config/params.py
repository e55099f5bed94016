# src/gplab/config/params.py
from __future__ import annotations

import re
from typing import Literal

from pydantic import BaseModel, Field, field_validator

from .defaults import ENUMERATION_CAP, GAUSS_ORDER

_SLOT_NAME = re.compile(r"^[up][1-9][0-9]*$")

# ============================================================
#   Test-ensemble profiles
# ============================================================

class EnsembleProfile(BaseModel):
    """Coefficient magnitude and support pattern of a random density matrix."""
    kind: Literal["flat", "decaying", "diagonal", "tied"] = "flat"
    beta: float = Field(2.0, ge=0.0, description="Decay exponent for kind='decaying'")
    nnz: int | None = Field(
        None,
        ge=1,
        description="Sampled support size; None means the whole box (or every base key).",
    )
    # slot pairs forced equal for kind='tied', e.g. [("u1", "u2"), ("p2", "p3")]
    ties: list[tuple[str, str]] = Field(default_factory=list)

    @field_validator("ties")
    @classmethod
    def _check_slots(cls, v: list[tuple[str, str]]) -> list[tuple[str, str]]:
        for a, b in v:
            for name in (a, b):
                if not _SLOT_NAME.match(name):
                    raise ValueError(f"slot name {name!r} must look like 'u1' or 'p3'")
        return v


# ============================================================
#   Omega averages
# ============================================================

class OmegaAverage(BaseModel):
    """How E_ω is evaluated."""
    method: Literal["exact", "enumerate", "montecarlo"] = "exact"
    samples: int = Field(256, ge=1, description="Monte-Carlo field samples")
    seed: int = Field(0, ge=0)
    max_variables: int = Field(
        ENUMERATION_CAP,
        ge=1,
        description="Largest number of distinct sign variables for 2^M enumeration",
    )


# ============================================================
#   Time-simplex quadrature
# ============================================================

class SimplexScheme(BaseModel):
    kind: Literal["gauss", "montecarlo"] = "gauss"
    order: int = Field(GAUSS_ORDER, ge=1, description="Gauss-Legendre points per axis")
    samples: int = Field(4096, ge=1, description="Monte-Carlo nodes")
    seed: int = Field(0, ge=0)


# ============================================================
#   Randomization of the collision operators
# ============================================================

class Randomization(BaseModel):
    """deterministic: B; dependent: one field ω; independent: ω_m per level m."""
    kind: Literal["deterministic", "dependent", "independent"] = "dependent"
    seed: int = Field(0, ge=0)
    # seeds[i] drives the collision leaving order i + 2 (omega_2, omega_3, ...)
    seeds: list[int] | None = None


# ============================================================
#   Non-resonant class
# ============================================================

class NonResonantSpec(BaseModel):
    alpha: float = Field(0.0, ge=0.0)
    c1: float = Field(1.0, gt=0.0, description="A priori constant: ||S gamma^(m)|| <= C1^m")
    chain: Literal["standard", "primed-first", "interleaved"] = "standard"
