# src/gplab/duhamel/boardgame.py
"""Two Duhamel integrals that the boardgame regrouping identifies.

For permutation-symmetric γ^(5) both integrals coincide when every level shares
one field (or no field at all). With independent fields per level the
regrouping would have to swap ω_3 and ω_4, so the two integrals differ.

I2 uses B_{1,2} B_{1,3} B_{2,4} B_{3,5}: the kernel that exchanging the times of the
third and fourth collisions produces from I1 after the slots are relabelled.
Written with B_{3,4} B_{3,5} it names the same term in the unrelabelled slots.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from ..config.params import EnsembleProfile, Randomization, SimplexScheme
from ..lattice.box import LatticeBox
from ..lattice.density import DensityMatrix, weighted_norm
from ..lattice.ensemble import random_ensemble, symmetrized
from ..operators.collision import CollisionIndex
from ..randomization.fields import ConstantSignField, SignField, field_from, split_seed
from ..report import ExperimentReport
from .plan import ChainPlan
from .quadrature import simplex_rule

log = logging.getLogger(__name__)

DATA_CUTOFF = 1
WORK_CUTOFF = 9  # no output of four collisions on K = 1 data leaves |ξ| <= 9
BOARDGAME_T = 0.25
BOARDGAME_ORDER = 8

# (j, k) outermost first, then the position in the time tuple of each integration variable
I1_STEPS = ((1, 2), (2, 3), (1, 4), (4, 5))
I2_STEPS = ((1, 2), (1, 3), (2, 4), (3, 5))
# simplex node s = (s1 >= s2 >= s3 >= s4) -> times (t1..t5) of each integral
I1_TIMES = (1, 4, 3, 2)  # t2 = s1, t3 = s4, t4 = s3, t5 = s2
I2_TIMES = (1, 3, 4, 2)  # t2 = s1, t3 = s3, t4 = s4, t5 = s2


def boardgame_gamma(seed: int, nnz: int = 24) -> DensityMatrix:
    """Permutation-symmetric sparse γ^(5) on K = 1, placed in the working box."""
    g = random_ensemble(5, LatticeBox(1, DATA_CUTOFF), seed, EnsembleProfile(nnz=nnz))
    return symmetrized(g).embed(LatticeBox(1, WORK_CUTOFF))


def _full_terms(j: int, k: int) -> list[tuple[CollisionIndex, complex]]:
    return [(CollisionIndex.plus(j, k), 1.0), (CollisionIndex.minus(j, k), -1.0)]


def boardgame_integral(
    gamma: DensityMatrix,
    steps: Sequence[tuple[int, int]],
    time_map: Sequence[int],
    field: SignField | None,
    t: float = BOARDGAME_T,
    scheme: SimplexScheme | None = None,
) -> DensityMatrix:
    """∫ U(t1−t2)[B_{j1,k1}]^{ω} … U(t4−t5)[B_{j4,k4}]^{ω} γ(t5) over the ordering `time_map`."""
    level_terms = [_full_terms(j, k) for j, k in reversed(steps)]
    plan = ChainPlan.compile(gamma.box, gamma.keys, level_terms, field=field)
    nodes, weights = simplex_rule(t, len(steps), scheme or SimplexScheme(order=BOARDGAME_ORDER))
    times = np.concatenate([np.full((nodes.shape[0], 1), t), nodes[:, [i - 1 for i in time_map]]], axis=1)
    acc = np.zeros(plan.out_keys.shape[0], dtype=np.complex128)
    step = 512
    for a in range(0, nodes.shape[0], step):
        top = np.broadcast_to(gamma.values[:, None], (gamma.nnz, min(step, nodes.shape[0] - a)))
        acc += plan.apply_batch(top, times[a : a + step]) @ weights[a : a + step]
    return plan.to_density(acc)


def boardgame_demo(
    seed: int,
    scheme: SimplexScheme | None = None,
    *,
    seeds: int = 8,
    t: float = BOARDGAME_T,
    nnz: int = 24,
) -> ExperimentReport:
    """‖I₁ − I₂‖ for no field, shared fields and independent fields, per seed."""
    gamma = boardgame_gamma(seed, nnz)
    report = ExperimentReport("boardgame-demo", ("mode", "seed", "norm_I1", "diff", "relative"))
    cases: list[tuple[str, int, SignField | None]] = [("deterministic", 0, ConstantSignField(1))]
    for s in split_seed(seed, seeds):
        cases.append(("shared", s, field_from(Randomization(kind="dependent", seed=s))))
        cases.append(("independent", s, field_from(Randomization(kind="independent", seed=s))))
    for mode, s, field in cases:
        i1 = boardgame_integral(gamma, I1_STEPS, I1_TIMES, field, t, scheme)
        i2 = boardgame_integral(gamma, I2_STEPS, I2_TIMES, field, t, scheme)
        norm = weighted_norm(i1, 0.0)
        diff = weighted_norm(i1 - i2, 0.0)
        rel = diff / norm if norm > 0 else 0.0
        log.info("boardgame %s seed=%#x: |I1-I2| = %.3e (relative %.3e)", mode, s, diff, rel)
        report.add_row(mode, s, norm, diff, rel)
    shared = [r["relative"] for r in report.where(mode="shared")]
    indep = [r["relative"] for r in report.where(mode="independent")]
    report.summary.update(
        max_relative_shared=max(shared, default=0.0),
        max_relative_independent=max(indep, default=0.0),
        gamma_nnz=gamma.nnz,
    )
    report.header.update(seed=seed, t=t, data_cutoff=DATA_CUTOFF, work_cutoff=WORK_CUTOFF)
    return report
