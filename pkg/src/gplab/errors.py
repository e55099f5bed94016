# src/gplab/errors.py
"""Exception types. Each also derives from the closest builtin."""
from __future__ import annotations

from collections.abc import Sequence


class GplabError(Exception):
    """Base class for gplab errors."""


class OutOfBoxError(GplabError, ValueError):
    def __init__(self, coords: Sequence[int], K: int) -> None:
        self.coords = tuple(int(c) for c in coords)
        self.K = K
        super().__init__(f"frequency {self.coords} lies outside the box |coord| <= {K}")


class OrderMismatchError(GplabError, ValueError):
    pass


class MissingOrderError(GplabError, KeyError):
    pass


class CapacityError(GplabError, RuntimeError):
    pass


class EmptyAdmissibleSetError(GplabError, ValueError):
    pass


class AcceptanceError(GplabError):
    pass
