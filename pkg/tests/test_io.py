# tests/test_io.py
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from gplab.io import dumps_density, loads_density, read_density, write_density, write_report
from gplab.lattice import DensityMatrix, LatticeBox, delta_matrix
from gplab.report import ExperimentReport

from ._util import small_matrix


def test_text_format_layout() -> None:
    g = delta_matrix(2, ((3, -1), (2, 0)), 0.5 - 0.25j, box=LatticeBox(1, 4))
    lines = dumps_density(g).splitlines()
    assert lines[:4] == ["# gplab density-matrix v1", "d 1", "K 4", "k 2"]
    assert lines[4] == "3 -1 | 2 0 | 0.5 -0.25"


def test_round_trip_is_bit_exact(tmp_path: Path) -> None:
    g = small_matrix(2, K=3, seed=9, nnz=12, d=2)
    # values that need every digit of repr
    g = g.with_values(g.values / 3.0)
    path = write_density(g, tmp_path / "nested" / "gamma.txt")
    back = read_density(path)
    assert back == g
    assert "," in path.read_text(encoding="utf-8").splitlines()[4]


def test_empty_matrix_round_trip() -> None:
    g = DensityMatrix.empty(LatticeBox(1, 2), 3)
    assert loads_density(dumps_density(g)) == g


@pytest.mark.parametrize(
    ("text", "fragment"),
    [
        ("d 1\nK 1\nk 1\n", "header"),
        ("# gplab density-matrix v1\nd 1\nK x\nk 1\n", "line 3"),
        ("# gplab density-matrix v1\nd 1\nK 2\nk 1\n0 | 1 | 1.0\n", "line 5"),
        ("# gplab density-matrix v1\nd 1\nK 2\nk 1\n0 | 5 | 1.0 0.0\n", "outside"),
    ],
)
def test_malformed_text_is_rejected(text: str, fragment: str) -> None:
    with pytest.raises(ValueError, match=fragment):
        loads_density(text)


def test_write_report_with_meta(tmp_path: Path) -> None:
    report = ExperimentReport("demo", ("K", "ratio"))
    report.add_row(4, 0.25)
    report.add_row(8, None)
    report.summary["growth"] = 0.1
    report.header["seed"] = 7

    out = write_report(report, tmp_path / "out" / "demo")
    assert out.suffix == ".csv"
    assert out.read_text(encoding="utf-8") == "K,ratio\n4,0.25\n8,\n"

    meta = json.loads(out.with_suffix(".meta.json").read_text(encoding="utf-8"))
    assert meta["experiment"] == "demo"
    assert meta["n_rows"] == 2
    assert meta["summary"]["growth"] == 0.1
    assert meta["header"]["seed"] == 7


def test_report_rejects_wrong_row_width() -> None:
    report = ExperimentReport("demo", ("a", "b"))
    with pytest.raises(ValueError):
        report.add_row(1)
    report.add_row(np.float64(1.5), True)
    assert report.to_csv().splitlines()[1] == "1.5,true"
