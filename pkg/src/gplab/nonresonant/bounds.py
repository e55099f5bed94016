# src/gplab/nonresonant/bounds.py
from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np

from ..config.params import OmegaAverage, Randomization
from ..duhamel.word import DuhamelWord, WordBuilder
from ..lattice.box import LatticeBox
from ..lattice.density import DensityMatrix, weighted_norm
from ..lattice.ensemble import generator
from ..lattice.weights import compensated_sum, sobolev_weights
from ..operators.collision import CollisionIndex, push_forward
from ..randomization.averages import builder_variables, enumerate_sq_norm, omega_averaged_sq_norm
from ..randomization.fields import split_seed
from ..report import ExperimentReport
from .classes import Chain, min_admissible_cutoff, sample_N

log = logging.getLogger(__name__)

BOUND_COLUMNS = ("word", "n", "ell", "alpha", "lhs", "rhs", "ratio", "per_level", "status")
ORACLE_COLUMNS = ("instance", "ell", "variables", "exact", "enumerated", "diagonal", "rel_enum", "rel_diag")


def nonresonant_bound_check(
    word: DuhamelWord,
    gamma: DensityMatrix,
    alpha: float,
    method: OmegaAverage | None = None,
    times: Sequence[float] | None = None,
) -> ExperimentReport:
    """LHS = ‖S^(n,α) U[B]^ω … γ^(n+ℓ)‖_{L²(Ω)} against RHS = ‖S^(n+ℓ,α)γ^(n+ℓ)‖.

    The word is evaluated with one shared field whatever its own tag says.
    """
    report = ExperimentReport("nonresonant-bound", BOUND_COLUMNS)
    _bound_row(report, word, gamma, alpha, method, times)
    report.header.update(word=str(word), alpha=alpha)
    return report


def _dependent(word: DuhamelWord) -> DuhamelWord:
    if word.randomization.kind == "dependent":
        return word
    return DuhamelWord(word.n, word.steps, Randomization(kind="dependent", seed=word.randomization.seed))


def _bound_row(
    report: ExperimentReport,
    word: DuhamelWord,
    gamma: DensityMatrix,
    alpha: float,
    method: OmegaAverage | None,
    times: Sequence[float] | None,
) -> float | None:
    word = _dependent(word)
    builder = (
        WordBuilder.at_equal_times(word, gamma)
        if times is None
        else WordBuilder(word, tuple(float(t) for t in times), gamma)
    )
    rhs = weighted_norm(gamma, alpha)
    if rhs == 0:
        report.add_row(str(word), word.n, word.length, alpha, 0.0, 0.0, None, None, "skipped")
        return None
    lhs = math.sqrt(omega_averaged_sq_norm(builder, alpha, method))
    ratio = lhs / rhs
    per_level = ratio ** (1.0 / word.top_order)
    report.add_row(str(word), word.n, word.length, alpha, lhs, rhs, ratio, per_level, "ok")
    return per_level


def diagonal_pairing_sum(word: DuhamelWord, gamma: DensityMatrix, alpha: float) -> float:
    """Σ_η w(out(η))² |γ̂(η)|²: the Ω-average with only the η = η̃ pairing kept."""
    keys = gamma.keys
    idx = np.arange(gamma.nnz)
    for c in reversed(word.steps):
        img = push_forward(keys, c, gamma.box)
        keys = img.keys
        idx = idx[img.source]
    if idx.size == 0:
        return 0.0
    w2 = sobolev_weights(keys, alpha, squared=True)
    return compensated_sum(w2 * np.abs(gamma.values[idx]) ** 2)


def random_word(rng: np.random.Generator, n: int, length: int, seed: int = 0) -> DuhamelWord:
    """Uniform single collisions, step p acting on order n + p + 1, with one shared field."""
    steps = []
    for p in range(length):
        order = n + p + 1
        k = int(rng.integers(2, order + 1))
        j = int(rng.integers(1, k))
        steps.append(CollisionIndex.plus(j, k) if rng.random() < 0.5 else CollisionIndex.minus(j, k))
    return DuhamelWord(n, tuple(steps), Randomization(kind="dependent", seed=seed))


def _instance(
    n: int,
    ell: int,
    alpha: float,
    c1: float,
    seed: int,
    d: int,
    data_cutoff: int | None,
    chain: Chain,
    nnz: int | None,
) -> tuple[DuhamelWord, DensityMatrix]:
    top = n + ell
    K = data_cutoff if data_cutoff is not None else min_admissible_cutoff(top, d)
    gamma = sample_N(top, LatticeBox(d, K), alpha, c1, seed, chain=chain, nnz=nnz)
    # ℓ collisions move each frequency by at most 2ℓK
    gamma = gamma.embed(LatticeBox(d, (2 * ell + 1) * K))
    return random_word(generator(seed), n, ell, seed), gamma


def nonresonant_sweep(
    lengths: Sequence[int],
    alphas: Sequence[float],
    samples: int,
    seed: int,
    *,
    n: int = 1,
    d: int = 1,
    data_cutoff: int | None = None,
    c1: float = 1.0,
    chain: Chain = "standard",
    nnz: int | None = None,
    method: OmegaAverage | None = None,
) -> ExperimentReport:
    """Per-level constants (LHS/RHS)^{1/(n+ℓ)} for random words on random 𝒩 samples."""
    report = ExperimentReport("nonresonant-bound", BOUND_COLUMNS)
    seeds = split_seed(seed, samples)
    for alpha in alphas:
        maxima: dict[int, float] = {}
        for ell in lengths:
            log.info("nonresonant sweep: alpha=%g ell=%d samples=%d", alpha, ell, samples)
            for s in seeds:
                word, gamma = _instance(n, ell, alpha, c1, s, d, data_cutoff, chain, nnz)
                c = _bound_row(report, word, gamma, alpha, method, None)
                if c is not None:
                    maxima[ell] = max(maxima.get(ell, 0.0), c)
        report.summary[f"alpha={alpha}"] = {f"ell={ell}": v for ell, v in sorted(maxima.items())}
        if maxima:
            report.summary[f"alpha={alpha}"]["spread"] = max(maxima.values()) / min(maxima.values()) - 1.0
    report.header.update(n=n, d=d, c1=c1, chain=chain, lengths=list(lengths), alphas=list(alphas))
    return report


def pairing_oracle(
    instances: int,
    seed: int,
    *,
    lengths: Sequence[int] = (1, 2),
    alpha: float = 0.0,
    n: int = 1,
    d: int = 1,
    nnz: int = 2,
    max_variables: int = 12,
) -> ExperimentReport:
    """Exact Ω-averages against 2^M enumeration and against the diagonal pairing sum."""
    report = ExperimentReport("pairing-oracle", ORACLE_COLUMNS)
    seeds = split_seed(seed, instances)
    worst_enum = worst_diag = 0.0
    for i, s in enumerate(seeds):
        ell = lengths[i % len(lengths)]
        word, gamma = _instance(n, ell, alpha, 1.0, s, d, None, "standard", nnz)
        builder = WordBuilder.at_equal_times(word, gamma)
        m = len(builder_variables(builder))
        exact = omega_averaged_sq_norm(builder, alpha, OmegaAverage(method="exact"))
        diag = diagonal_pairing_sum(word, gamma, alpha)
        enum = enumerate_sq_norm(builder, alpha, max_variables) if m <= max_variables else None
        scale = max(abs(exact), 1e-300)
        rel_enum = abs(exact - enum) / scale if enum is not None else None
        rel_diag = abs(exact - diag) / scale
        if rel_enum is not None:
            worst_enum = max(worst_enum, rel_enum)
        worst_diag = max(worst_diag, rel_diag)
        report.add_row(i, ell, m, exact, enum, diag, rel_enum, rel_diag)
    report.summary.update(
        max_rel_enum=worst_enum,
        max_rel_diag=worst_diag,
        enumerated=sum(1 for v in report.column("enumerated") if v is not None),
    )
    report.header.update(seed=seed, alpha=alpha, n=n, d=d, nnz=nnz, lengths=list(lengths))
    return report
