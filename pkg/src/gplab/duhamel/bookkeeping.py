# src/gplab/duhamel/bookkeeping.py
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..config.defaults import Freq
from ..operators.collision import Sign
from .word import DuhamelWord

# a slot of the top-order key: ("u", i) or ("p", i), i 1-based
Slot = tuple[str, int]
Decomposition = tuple[tuple[int, Slot], ...]


def _slot_rank(slot: Slot) -> tuple[int, int]:
    return (0 if slot[0] == "u" else 1, slot[1])


@dataclass(frozen=True)
class ExpansionBookkeeping:
    """Which output frequencies a word has convolved, and how.

    ``decompositions[("u", j)]`` writes ξ_j as a signed sum of top-order slots;
    ``("p", j)`` does the same for ξ'_j. Terms are ordered unprimed slots first.
    """

    n: int
    decompositions: dict[Slot, Decomposition]

    @property
    def A(self) -> tuple[int, ...]:
        """Indices j with ξ_j touched by a collision."""
        return tuple(j for (side, j), dec in sorted(self.decompositions.items()) if side == "u" and len(dec) > 1)

    @property
    def B(self) -> tuple[int, ...]:
        return tuple(j for (side, j), dec in sorted(self.decompositions.items()) if side == "p" and len(dec) > 1)

    @property
    def N(self) -> dict[int, int]:
        return {j: len(self.decompositions[("u", j)]) for j in self.A}

    @property
    def M(self) -> dict[int, int]:
        return {j: len(self.decompositions[("p", j)]) for j in self.B}

    def signs(self, slot: Slot) -> tuple[int, ...]:
        return tuple(s for s, _ in self.decompositions[slot])

    def slots(self, slot: Slot) -> tuple[Slot, ...]:
        return tuple(sl for _, sl in self.decompositions[slot])

    def describe(self, slot: Slot) -> str:
        """e.g. 'xi1 = eta1 + eta2 + eta3 - eta4 - eta5'."""
        name = f"xi{slot[1]}" if slot[0] == "u" else f"xi'{slot[1]}"
        parts = []
        for i, (s, _) in enumerate(self.decompositions[slot], start=1):
            op = ("-" if s < 0 else "") if i == 1 else (" - " if s < 0 else " + ")
            parts.append(f"{op}eta{i}")
        return f"{name} = {''.join(parts)}"

    def evaluate(self, top_key: Sequence[Sequence[int]] | npt.ArrayLike) -> list[Freq]:
        """Output key (ξ_1..ξ_n, ξ'_1..ξ'_n) predicted for one top-order key."""
        arr = np.asarray(top_key, dtype=np.int64)
        m = arr.shape[0] // 2
        arr = arr.reshape(2 * m, -1)
        out: list[Freq] = []
        for side in ("u", "p"):
            for j in range(1, self.n + 1):
                acc = np.zeros(arr.shape[1], dtype=np.int64)
                for s, (sl_side, i) in self.decompositions[(side, j)]:
                    acc += s * arr[(i - 1) if sl_side == "u" else (m + i - 1)]
                out.append(tuple(int(c) for c in acc))
        return out


def expansion_bookkeeping(word: DuhamelWord) -> ExpansionBookkeeping:
    """Signed decompositions of every output frequency in terms of top-order slots.

    Walks the word outermost first. A plus step B⁺_{j,k} writes output slot u_j
    as u_j + u_k − p_k of its input; a minus step writes p_j as p_j + p_k − u_k;
    input slots above k shift up by one.
    """
    n = word.n
    exprs: dict[Slot, dict[Slot, int]] = {}
    for j in range(1, n + 1):
        exprs[("u", j)] = {("u", j): 1}
        exprs[("p", j)] = {("p", j): 1}

    for c in word.steps:
        changed: Slot = ("u", c.j) if c.sign is Sign.PLUS else ("p", c.j)
        if c.sign is Sign.PLUS:
            expansion = {("u", c.j): 1, ("u", c.k): 1, ("p", c.k): -1}
        else:
            expansion = {("p", c.j): 1, ("p", c.k): 1, ("u", c.k): -1}
        for original, expr in exprs.items():
            new: dict[Slot, int] = {}
            for slot, coef in expr.items():
                if slot == changed:
                    for s2, c2 in expansion.items():
                        new[s2] = new.get(s2, 0) + coef * c2
                else:
                    side, i = slot
                    shifted = (side, i + 1) if i >= c.k else slot
                    new[shifted] = new.get(shifted, 0) + coef
            exprs[original] = {s: v for s, v in new.items() if v != 0}

    decompositions = {
        orig: tuple((coef, slot) for slot, coef in sorted(expr.items(), key=lambda kv: _slot_rank(kv[0])))
        for orig, expr in exprs.items()
    }
    return ExpansionBookkeeping(n, decompositions)
