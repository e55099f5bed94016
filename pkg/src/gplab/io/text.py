# src/gplab/io/text.py
"""Line-oriented text form of a DensityMatrix.

    # gplab density-matrix v1
    d 1
    K 4
    k 2
    3 -1 | 2 0 | 0.5 -0.25

One line per coefficient: the k unprimed frequencies, the k primed ones, then
real and imaginary parts written with ``repr`` so the round trip is exact.
Frequencies are comma-joined when d > 1.
"""
from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

import numpy as np

from ..config.defaults import FORMAT_TAG
from ..lattice.box import LatticeBox
from ..lattice.density import DensityMatrix


def _freq(f: Iterable[int]) -> str:
    return ",".join(str(int(c)) for c in f)


def dumps_density(gamma: DensityMatrix) -> str:
    k = gamma.order
    lines = [f"# {FORMAT_TAG}", f"d {gamma.box.d}", f"K {gamma.box.K}", f"k {k}"]
    for key, v in zip(gamma.keys.tolist(), gamma.values.tolist(), strict=True):
        u = " ".join(_freq(f) for f in key[:k])
        p = " ".join(_freq(f) for f in key[k:])
        lines.append(f"{u} | {p} | {float(v.real)!r} {float(v.imag)!r}")
    return "\n".join(lines) + "\n"


def _header_int(line: str, name: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != name:
        raise ValueError(f"line {lineno}: expected '{name} <int>', got {line!r}")
    try:
        return int(parts[1])
    except ValueError:
        raise ValueError(f"line {lineno}: {name} must be an integer, got {parts[1]!r}") from None


def loads_density(text: str) -> DensityMatrix:
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"# {FORMAT_TAG}":
        raise ValueError(f"missing '# {FORMAT_TAG}' header")
    if len(lines) < 4:
        raise ValueError("truncated header: need d, K and k lines")
    d = _header_int(lines[1].strip(), "d", 2)
    K = _header_int(lines[2].strip(), "K", 3)
    k = _header_int(lines[3].strip(), "k", 4)
    box = LatticeBox(d, K)
    keys: list[list[list[int]]] = []
    values: list[complex] = []
    for lineno, raw in enumerate(lines[4:], start=5):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [s.split() for s in line.split("|")]
        if len(parts) != 3 or len(parts[0]) != k or len(parts[1]) != k or len(parts[2]) != 2:
            raise ValueError(f"line {lineno}: expected {k} | {k} | re im fields, got {raw!r}")
        try:
            key = [[int(c) for c in f.split(",")] for f in (*parts[0], *parts[1])]
            re, im = (float(x) for x in parts[2])
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
        if any(len(f) != d for f in key):
            raise ValueError(f"line {lineno}: every frequency needs {d} components")
        keys.append(key)
        values.append(complex(re, im))
    if not keys:
        return DensityMatrix.empty(box, k)
    return DensityMatrix(box, k, np.array(keys, dtype=np.int64), np.array(values, dtype=np.complex128))


def write_density(gamma: DensityMatrix, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_density(gamma), encoding="utf-8")
    return path


def read_density(path: str | Path) -> DensityMatrix:
    return loads_density(Path(path).read_text(encoding="utf-8"))
