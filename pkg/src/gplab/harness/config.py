# src/gplab/harness/config.py
"""Experiment configuration: key=value files, flag overrides, echo into reports."""
from __future__ import annotations

import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal, get_args

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..config.defaults import DEFAULTS, GAUSS_ORDER, MAX_DIMENSION, OUTPUT_DIR, OUTPUT_ENV_VAR
from ..config.params import EnsembleProfile, OmegaAverage, SimplexScheme

ExperimentName = Literal[
    "thm1-ratio",
    "cor2-tail",
    "duhamel-decay",
    "nonresonant-bound",
    "nls-residual",
    "boardgame-demo",
    "pairing-oracle",
    "data-randomized",
    "second-iterate",
]

EXPERIMENTS: tuple[str, ...] = get_args(ExperimentName)

_LIST_FIELDS = {"cutoffs", "alphas", "lambdas", "dts", "lengths"}


def _default_output_dir() -> str:
    return os.environ.get(OUTPUT_ENV_VAR, OUTPUT_DIR)


class ExperimentConfig(BaseModel):
    """Every knob of every experiment; each has a default."""
    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    # ============================================================
    #   What to run
    # ============================================================
    experiment: ExperimentName = "thm1-ratio"
    seed: int = Field(0, ge=0, description="Master seed (decimal or 0x hex)")
    output_dir: str = Field(default_factory=_default_output_dir)
    threads: int | None = Field(None, ge=1, description="Worker pool cap")

    # ============================================================
    #   Lattice and data
    # ============================================================
    d: int = Field(1, ge=1, le=MAX_DIMENSION)
    cutoffs: list[int] = Field(default_factory=lambda: [4, 8, 16])
    alphas: list[float] = Field(default_factory=lambda: [0.5])
    k: int = Field(1, ge=1)
    j: int = Field(1, ge=1)
    samples: int = Field(200, ge=1, description="Ensemble draws (or ω samples for cor2-tail)")
    nnz: int | None = Field(64, ge=1, description="Sparse support size of random ensembles")
    profile: Literal["flat", "decaying", "diagonal", "tied"] = "flat"
    beta: float = Field(2.0, ge=0.0)
    c1: float = Field(1.0, gt=0.0, description="A priori constant C1")
    chain: Literal["standard", "primed-first", "interleaved"] = "standard"

    # ============================================================
    #   Operators and averages
    # ============================================================
    collision: Literal["full", "plus", "minus"] = "full"
    operator: Literal["single", "full"] = "single"
    mode: Literal["deterministic", "dependent", "independent"] = "independent"
    omega: Literal["exact", "enumerate", "montecarlo"] = "exact"
    omega_samples: int = Field(256, ge=1)
    field_seeds: int = Field(8, ge=1, description="Field seeds tried by boardgame-demo")

    # ============================================================
    #   Time integration
    # ============================================================
    n_max: int = Field(4, ge=0)
    T: float | None = Field(None, ge=0.0, description="Time horizon; None picks 1/(4 M) for decay")
    time_points: int = Field(DEFAULTS.TIME_POINTS, ge=2)
    scheme: Literal["gauss", "montecarlo"] = "gauss"
    quad_order: int = Field(GAUSS_ORDER, ge=1)
    quad_samples: int = Field(4096, ge=1)
    lengths: list[int] = Field(default_factory=lambda: [1, 2, 3])
    lambdas: list[float] = Field(default_factory=list)
    dts: list[float] = Field(default_factory=lambda: [1e-2, 5e-3, 2.5e-3])
    t_end: float = Field(0.1, gt=0.0)
    dump_term: str | None = Field(None, description="Write the top decay term to this path")

    @field_validator("seed", mode="before")
    @classmethod
    def _parse_seed(cls, v: Any) -> Any:
        if isinstance(v, str):
            return int(v.strip(), 0)
        return v

    @field_validator(*sorted(_LIST_FIELDS), mode="before")
    @classmethod
    def _split_list(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [s.strip() for s in v.split(",") if s.strip()]
        if isinstance(v, (int, float)):
            return [v]
        return v

    @field_validator("cutoffs", "lengths")
    @classmethod
    def _positive(cls, v: list[int]) -> list[int]:
        if any(x < 0 for x in v):
            raise ValueError(f"entries must be >= 0, got {v}")
        return v

    @field_validator("dts")
    @classmethod
    def _positive_steps(cls, v: list[float]) -> list[float]:
        if any(x <= 0 for x in v):
            raise ValueError(f"time steps must be > 0, got {v}")
        return v

    # ---- derived parameter groups ----
    @property
    def alpha(self) -> float:
        if len(self.alphas) != 1:
            raise ValueError(f"experiment {self.experiment} takes one alpha, got {self.alphas}")
        return self.alphas[0]

    def ensemble_profile(self) -> EnsembleProfile:
        return EnsembleProfile(kind=self.profile, beta=self.beta, nnz=self.nnz)

    def omega_average(self) -> OmegaAverage:
        return OmegaAverage(method=self.omega, samples=self.omega_samples, seed=self.seed)

    def simplex_scheme(self) -> SimplexScheme:
        return SimplexScheme(kind=self.scheme, order=self.quad_order, samples=self.quad_samples, seed=self.seed)


def _normalize(key: str) -> str:
    return key.strip().replace("-", "_")


def parse_text(text: str) -> dict[str, str]:
    """key=value lines; '#' starts a comment; later keys win."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[_normalize(key)] = value.strip()
    return out


def build(values: Mapping[str, Any], overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """File values first, then non-None overrides (command-line flags)."""
    merged = {_normalize(k): v for k, v in values.items()}
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[_normalize(k)] = v
    merged = {k: (None if v == "" and k not in _LIST_FIELDS else v) for k, v in merged.items()}
    return ExperimentConfig.model_validate(merged)


def parse(text: str, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    return build(parse_text(text), overrides)


def load(path: str | Path, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    return parse(Path(path).read_text(encoding="utf-8"), overrides)


def _format(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ",".join(_format(x) for x in v)
    return str(v)


def serialize(config: ExperimentConfig) -> str:
    """key=value lines in field order; parse(serialize(c)) == c."""
    lines = [f"{name}={_format(getattr(config, name))}" for name in ExperimentConfig.model_fields]
    return "\n".join(lines) + "\n"
