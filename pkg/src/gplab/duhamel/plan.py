# src/gplab/duhamel/plan.py
"""Compiled collision chains.

A chain of collisions only moves coefficients between keys, so on a fixed top
support it is a product of sparse matrices. Compiling once and reusing the
matrices at every quadrature node keeps the time integrals cheap: the nested
simplex integral is evaluated level by level as a Gauss tree.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import sparse

from ..config.defaults import DEFAULTS
from ..config.params import SimplexScheme
from ..lattice.box import IntArray, LatticeBox
from ..lattice.density import DensityMatrix, group_rows
from ..operators.collision import CollisionIndex, full_collision_terms, push_forward
from ..operators.evolution import energies
from ..randomization.fields import SignField
from ..randomization.symbolic import MonoArray, RandomDensityMatrix, toggle, widen
from .quadrature import gauss_unit, nested_gauss, simplex_rule

log = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]
Terms = Sequence[tuple[CollisionIndex, complex]]
# times (P,) -> values (n_top, P) or (n_top, 1) when constant in time
TopFn = Callable[[npt.NDArray[np.float64]], ComplexArray]


@dataclass(frozen=True)
class PlanLevel:
    order: int
    matrix: sparse.csr_matrix
    keys: IntArray
    monos: MonoArray
    energies: npt.NDArray[np.float64]


def hierarchy_terms(k: int, n: int) -> list[list[tuple[CollisionIndex, complex]]]:
    """Full collisions B^(n+k), …, B^(k+1), innermost first."""
    return [full_collision_terms(m) for m in range(n + k, k, -1)]


class ChainPlan:
    """Sparse chain from a top support down through `levels` (innermost first)."""

    def __init__(
        self,
        box: LatticeBox,
        top_keys: IntArray,
        top_monos: MonoArray,
        levels: list[PlanLevel],
    ) -> None:
        self.box = box
        self.top_keys = top_keys
        self.top_monos = top_monos
        self.levels = levels

    @classmethod
    def compile(
        cls,
        box: LatticeBox,
        top_keys: npt.ArrayLike,
        level_terms: Sequence[Terms],
        *,
        field: SignField | None = None,
        symbolic: bool = False,
        independent: bool = False,
    ) -> ChainPlan:
        """`field` bakes one ω into the matrices; `symbolic` keeps signs as monomials."""
        if symbolic and field is not None:
            raise ValueError("a plan is either symbolic or built for one field, not both")
        keys = np.asarray(top_keys, dtype=np.int64)
        monos = np.zeros((keys.shape[0], 0), dtype=np.uint64)
        top_monos = monos
        levels: list[PlanLevel] = []
        for terms in level_terms:
            m = keys.shape[1] // 2
            level_field = None if field is None else field.at_level(m)
            ns = (m if independent else 0) if symbolic else None
            out_keys, out_monos, src, coef = [], [], [], []
            for c, cf in terms:
                img = push_forward(keys, c, box)
                v = np.full(img.source.shape[0], complex(cf), dtype=np.complex128)
                if level_field is not None:
                    v = v * np.prod(level_field.signs(img.sign_freqs), axis=1)
                mono = monos[img.source]
                if ns is not None:
                    for col in range(4):
                        mono = toggle(mono, box, img.sign_freqs[:, col, :], ns)
                out_keys.append(img.keys)
                out_monos.append(mono)
                src.append(img.source)
                coef.append(v)
            width = max((mo.shape[1] for mo in out_monos), default=0)
            all_keys = np.concatenate(out_keys) if out_keys else np.zeros((0, 2 * m - 2, box.d), np.int64)
            all_monos = (
                np.concatenate([widen(mo, width) for mo in out_monos])
                if out_monos
                else np.zeros((0, 0), np.uint64)
            )
            first, inverse = group_rows(box, all_keys, all_monos)
            matrix = sparse.csr_matrix(
                (
                    np.concatenate(coef) if coef else np.zeros(0, np.complex128),
                    (inverse, np.concatenate(src) if src else np.zeros(0, np.int64)),
                ),
                shape=(first.shape[0], keys.shape[0]),
            )
            matrix.sum_duplicates()
            matrix.eliminate_zeros()
            keys = all_keys[first]
            monos = all_monos[first]
            levels.append(PlanLevel(m, matrix, keys, monos, energies(keys)))
            log.debug("plan level order=%d -> %d states, %d entries", m, keys.shape[0], matrix.nnz)
        return cls(box, np.asarray(top_keys, dtype=np.int64), top_monos, levels)

    @classmethod
    def hierarchy(
        cls,
        box: LatticeBox,
        top_keys: npt.ArrayLike,
        k: int,
        n: int,
        *,
        field: SignField | None = None,
        symbolic: bool = False,
        independent: bool = False,
    ) -> ChainPlan:
        return cls.compile(
            box,
            top_keys,
            hierarchy_terms(k, n),
            field=field,
            symbolic=symbolic,
            independent=independent,
        )

    # ---- shape ----
    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def out_keys(self) -> IntArray:
        return self.levels[-1].keys if self.levels else self.top_keys

    @property
    def out_monos(self) -> MonoArray:
        return self.levels[-1].monos if self.levels else self.top_monos

    @property
    def out_order(self) -> int:
        return self.out_keys.shape[1] // 2

    # ---- evaluation ----
    def apply_batch(self, top_values: npt.ArrayLike, times: npt.ArrayLike) -> ComplexArray:
        """Integrand at Q time tuples: top values (n_top, Q), times (Q, depth + 1) outermost first."""
        x = np.asarray(top_values, dtype=np.complex128)
        t = np.asarray(times, dtype=np.float64).reshape(-1, self.depth + 1)
        n = self.depth
        for i, level in enumerate(self.levels):
            x = level.matrix @ x
            dt = t[:, n - 1 - i] - t[:, n - i]
            x = x * np.exp(-1j * level.energies[:, None] * dt[None, :])
        return np.asarray(x)

    def integrate(
        self,
        top: TopFn,
        t_points: npt.ArrayLike,
        scheme: SimplexScheme | None = None,
    ) -> ComplexArray:
        """∫ over t ≥ s_1 ≥ … ≥ s_n ≥ 0 of the chain, one column per t (no (−i)^n factor)."""
        scheme = scheme or SimplexScheme()
        ts = np.atleast_1d(np.asarray(t_points, dtype=np.float64))
        n_out = self.out_keys.shape[0]
        if self.depth == 0:
            return np.broadcast_to(top(ts), (n_out, ts.shape[0])).copy()
        out = np.zeros((n_out, ts.shape[0]), dtype=np.complex128)
        for col, t in enumerate(ts):
            if t == 0:
                continue
            if nested_gauss(scheme, self.depth):
                x, w = gauss_unit(scheme.order)
                out[:, col] = self._tree(1, np.array([t]), top, x, w)[:, 0]
            else:
                out[:, col] = self._montecarlo(t, top, scheme)
        return out

    def _tree(
        self,
        depth: int,
        parents: npt.NDArray[np.float64],
        top: TopFn,
        x: npt.NDArray[np.float64],
        w: npt.NDArray[np.float64],
    ) -> ComplexArray:
        n = self.depth
        level = self.levels[n - depth]
        q = x.shape[0]
        rows = level.matrix.shape[0]
        out = np.zeros((rows, parents.shape[0]), dtype=np.complex128)
        step = max(1, DEFAULTS.NODE_CHUNK // q)
        for a in range(0, parents.shape[0], step):
            par = parents[a : a + step]
            child = np.outer(par, x).ravel()
            inner = top(child) if depth == n else self._tree(depth + 1, child, top, x, w)
            z = level.matrix @ inner
            par_rep = np.repeat(par, q)
            phase = np.exp(-1j * level.energies[:, None] * (par_rep - child)[None, :])
            z = z * phase * (np.tile(w, par.shape[0]) * par_rep)[None, :]
            out[:, a : a + step] = z.reshape(rows, par.shape[0], q).sum(axis=2)
        return out

    def _montecarlo(self, t: float, top: TopFn, scheme: SimplexScheme) -> ComplexArray:
        nodes, weights = simplex_rule(t, self.depth, scheme)
        acc = np.zeros(self.out_keys.shape[0], dtype=np.complex128)
        for a in range(0, nodes.shape[0], DEFAULTS.NODE_CHUNK):
            chunk = nodes[a : a + DEFAULTS.NODE_CHUNK]
            times = np.concatenate([np.full((chunk.shape[0], 1), t), chunk], axis=1)
            vals = np.broadcast_to(top(chunk[:, -1]), (self.top_keys.shape[0], chunk.shape[0]))
            acc += self.apply_batch(vals, times) @ weights[a : a + DEFAULTS.NODE_CHUNK]
        return acc

    # ---- results ----
    def to_density(self, column: npt.ArrayLike) -> DensityMatrix:
        return DensityMatrix(self.box, self.out_order, self.out_keys, column)

    def to_random(self, column: npt.ArrayLike) -> RandomDensityMatrix:
        return RandomDensityMatrix(self.box, self.out_order, self.out_keys, self.out_monos, column)
