# src/gplab/utils/__init__.py
from .parallel import get_threads, ordered_map, set_threads
from .quadrature import gauss_interval, gauss_unit

__all__ = ["gauss_interval", "gauss_unit", "get_threads", "ordered_map", "set_threads"]
