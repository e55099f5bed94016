# src/gplab/lattice/density.py
from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from typing import Any

import numpy as np
import numpy.typing as npt

from ..config.defaults import Freq, Key
from ..errors import OrderMismatchError
from .box import IntArray, LatticeBox, as_freq
from .weights import weighted_sq_sum

ComplexArray = npt.NDArray[np.complex128]

_CODE_BITS = 62  # integer row codes must stay below 2^62


def group_rows(
    box: LatticeBox,
    keys: IntArray,
    extra: npt.NDArray[np.uint64] | None = None,
) -> tuple[IntArray, IntArray]:
    """Group equal rows of `keys` (and `extra`, if given).

    Returns ``(first, inverse)``: the index of the first row of every group, in
    canonical (lexicographic) order, and the group id of every row.
    """
    n = keys.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    flat = box.index(keys).reshape(n, -1)
    slots = flat.shape[1]
    has_extra = extra is not None and extra.shape[1] > 0
    if not has_extra and slots * math.log2(max(box.size, 2)) < _CODE_BITS:
        codes = np.zeros(n, dtype=np.int64)
        for col in range(slots):
            codes = codes * box.size + flat[:, col]
        _, first, inverse = np.unique(codes, return_index=True, return_inverse=True)
    else:
        rows = flat
        if has_extra:
            assert extra is not None
            rows = np.concatenate([flat, np.ascontiguousarray(extra).view(np.int64)], axis=1)
        _, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    return first.astype(np.int64), inverse.reshape(-1).astype(np.int64)


def sum_groups(inverse: IntArray, values: ComplexArray, n_groups: int) -> ComplexArray:
    """Deterministic per-group sums (bincount keeps input order)."""
    re = np.bincount(inverse, weights=values.real, minlength=n_groups)
    im = np.bincount(inverse, weights=values.imag, minlength=n_groups)
    return re + 1j * im


class DensityMatrix:
    """Fourier coefficients γ̂(ξ_1..ξ_k; ξ'_1..ξ'_k) of an order-k density matrix.

    Stored as COO arrays: ``keys`` of shape (nnz, 2k, d) sorted lexicographically
    and unique, ``values`` of shape (nnz,) with no exact zeros. Instances are
    treated as immutable.
    """

    __slots__ = ("box", "keys", "order", "values")

    def __init__(
        self,
        box: LatticeBox,
        order: int,
        keys: npt.ArrayLike,
        values: npt.ArrayLike,
        *,
        canonical: bool = False,
    ) -> None:
        if order < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        karr = np.asarray(keys, dtype=np.int64).reshape(-1, 2 * order, box.d)
        varr = np.asarray(values, dtype=np.complex128).reshape(-1)
        if karr.shape[0] != varr.shape[0]:
            raise ValueError(f"{karr.shape[0]} keys but {varr.shape[0]} values")
        if not canonical:
            box.check(karr)
            first, inverse = group_rows(box, karr)
            summed = sum_groups(inverse, varr, first.shape[0])
            keep = summed != 0
            karr = karr[first][keep]
            varr = summed[keep]
        karr.setflags(write=False)
        varr.setflags(write=False)
        self.box = box
        self.order = order
        self.keys = karr
        self.values = varr

    # ---- constructors ----
    @classmethod
    def empty(cls, box: LatticeBox, order: int) -> DensityMatrix:
        return cls(box, order, np.zeros((0, 2 * order, box.d)), np.zeros(0), canonical=True)

    @classmethod
    def from_arrays(
        cls,
        box: LatticeBox,
        order: int,
        keys: npt.ArrayLike,
        values: npt.ArrayLike,
        *,
        drop_outside: bool = False,
    ) -> DensityMatrix:
        karr = np.asarray(keys, dtype=np.int64).reshape(-1, 2 * order, box.d)
        varr = np.asarray(values, dtype=np.complex128).reshape(-1)
        if drop_outside:
            inside = box.contains(karr).all(axis=1)
            karr, varr = karr[inside], varr[inside]
        return cls(box, order, karr, varr)

    @classmethod
    def from_mapping(
        cls,
        box: LatticeBox,
        order: int,
        coeffs: Mapping[Any, complex],
    ) -> DensityMatrix:
        """Build from {((ξ_1..ξ_k), (ξ'_1..ξ'_k)): value}; ints allowed when d = 1."""
        rows = [_key_array(key, order, box.d) for key in coeffs]
        keys = np.array(rows, dtype=np.int64).reshape(-1, 2 * order, box.d)
        return cls(box, order, keys, np.array(list(coeffs.values()), dtype=np.complex128))

    @staticmethod
    def linear_combination(
        coeffs: Sequence[complex],
        mats: Sequence[DensityMatrix],
    ) -> DensityMatrix:
        if not mats:
            raise ValueError("linear_combination needs at least one matrix")
        box, order = mats[0].box, mats[0].order
        for m in mats:
            _require_compatible(mats[0], m)
        keys = np.concatenate([m.keys for m in mats], axis=0)
        values = np.concatenate([complex(c) * m.values for c, m in zip(coeffs, mats, strict=True)])
        return DensityMatrix(box, order, keys, values)

    # ---- mapping-style access ----
    @property
    def nnz(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.nnz

    def __getitem__(self, key: Any) -> complex:
        row = _key_array(key, self.order, self.box.d)
        if not self.box.contains(row).all():
            return 0j
        hit = np.all(self.keys == row[None], axis=(1, 2))
        idx = np.flatnonzero(hit)
        return complex(self.values[idx[0]]) if idx.size else 0j

    def items(self) -> Iterator[tuple[Key, complex]]:
        k = self.order
        for row, v in zip(self.keys.tolist(), self.values.tolist(), strict=True):
            u = tuple(tuple(f) for f in row[:k])
            p = tuple(tuple(f) for f in row[k:])
            yield (u, p), complex(v)

    def to_dict(self) -> dict[Key, complex]:
        return dict(self.items())

    # ---- algebra ----
    def __add__(self, other: DensityMatrix) -> DensityMatrix:
        return DensityMatrix.linear_combination((1.0, 1.0), (self, other))

    def __sub__(self, other: DensityMatrix) -> DensityMatrix:
        return DensityMatrix.linear_combination((1.0, -1.0), (self, other))

    def __neg__(self) -> DensityMatrix:
        return DensityMatrix(self.box, self.order, self.keys, -self.values, canonical=True)

    def __mul__(self, scalar: complex) -> DensityMatrix:
        return self.with_values(complex(scalar) * self.values)

    __rmul__ = __mul__

    def with_values(self, values: npt.ArrayLike) -> DensityMatrix:
        """Same support, new values (zeros dropped)."""
        varr = np.asarray(values, dtype=np.complex128).reshape(-1)
        keep = varr != 0
        return DensityMatrix(self.box, self.order, self.keys[keep], varr[keep], canonical=True)

    def embed(self, box: LatticeBox) -> DensityMatrix:
        """The same coefficients viewed inside a larger box."""
        if box.d != self.box.d or box.K < self.box.K:
            raise ValueError(f"cannot embed a K={self.box.K} matrix into K={box.K}, d={box.d}")
        return DensityMatrix(box, self.order, self.keys, self.values, canonical=True)

    def max_abs_diff(self, other: DensityMatrix) -> float:
        diff = self - other
        return float(np.max(np.abs(diff.values))) if diff.nnz else 0.0

    def allclose(self, other: DensityMatrix, atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return (
            self.box == other.box
            and self.order == other.order
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"DensityMatrix(order={self.order}, d={self.box.d}, K={self.box.K}, nnz={self.nnz})"


def _require_compatible(a: DensityMatrix, b: DensityMatrix) -> None:
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} vs {b.order}")
    if a.box != b.box:
        raise ValueError(f"boxes differ: {a.box} vs {b.box}")


def _key_array(key: Any, order: int, d: int) -> IntArray:
    try:
        unprimed, primed = key
    except (TypeError, ValueError) as exc:
        raise ValueError(f"key {key!r} must be a pair (unprimed, primed)") from exc
    u = _slot_list(unprimed, order, d)
    p = _slot_list(primed, order, d)
    if len(u) != order or len(p) != order:
        raise OrderMismatchError(
            f"key {key!r} has {len(u)}+{len(p)} slots, expected {order}+{order}"
        )
    slots: list[Freq] = [as_freq(f, d) for f in (*u, *p)]
    return np.array(slots, dtype=np.int64)


def _slot_list(part: Any, order: int, d: int) -> list[Any]:
    if isinstance(part, (int, np.integer)):
        return [part]
    items = list(part)
    # a lone d-vector for an order-1 key
    if d > 1 and order == 1 and len(items) == d and all(
        isinstance(c, (int, np.integer)) for c in items
    ):
        return [tuple(items)]
    return items


def delta_matrix(
    order: int,
    modes: Any,
    value: complex = 1.0,
    *,
    box: LatticeBox,
) -> DensityMatrix:
    """Matrix with the single coefficient γ̂(modes) = value (empty when value is 0)."""
    row = _key_array(modes, order, box.d)
    box.check(row)
    return DensityMatrix(box, order, row[None], np.array([value], dtype=np.complex128))


def weighted_norm(gamma: DensityMatrix, alpha: float) -> float:
    """‖S^(k,α) γ‖_{L²} = sqrt(Σ Π⟨ξ_j⟩^{2α}⟨ξ'_j⟩^{2α} |γ̂|²)."""
    return math.sqrt(weighted_sq_sum(gamma.keys, gamma.values, alpha))
