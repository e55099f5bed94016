# src/gplab/io/__init__.py
from .text import dumps_density, loads_density, read_density, write_density
from .write import write_report

__all__ = ["dumps_density", "loads_density", "read_density", "write_density", "write_report"]
