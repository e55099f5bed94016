# src/gplab/utils/parallel.py
from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

# worker cap set by the CLI (--threads); 1 keeps everything in the calling thread
_THREADS = 1


def set_threads(n: int) -> None:
    global _THREADS
    if n < 1:
        raise ValueError(f"threads must be >= 1, got {n}")
    _THREADS = n


def get_threads() -> int:
    return _THREADS


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """map() over a thread pool; results keep input order so reductions stay bit-stable."""
    work = list(items)
    n = threads or _THREADS
    if n <= 1 or len(work) <= 1:
        return [fn(x) for x in work]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, work))
