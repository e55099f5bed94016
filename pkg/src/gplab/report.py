# src/gplab/report.py
from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


@dataclass
class ExperimentReport:
    """Named scalar series with a header (config echo, version) and a summary."""

    name: str
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]] = field(default_factory=list)
    header: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    verdict: dict[str, Any] | None = None

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, report has {len(self.columns)} columns")
        self.rows.append(tuple(values))

    def extend(self, rows: Iterable[Sequence[Any]]) -> None:
        for r in rows:
            self.add_row(*r)

    def column(self, name: str) -> list[Any]:
        idx = self.columns.index(name)
        return [r[idx] for r in self.rows]

    def where(self, **match: Any) -> list[dict[str, Any]]:
        """Rows (as dicts) whose columns equal every given value."""
        out = []
        for r in self.rows:
            rec = dict(zip(self.columns, r, strict=True))
            if all(rec[k] == v for k, v in match.items()):
                out.append(rec)
        return out

    def finite(self, name: str) -> list[float]:
        return [float(v) for v in self.column(name) if v is not None and math.isfinite(float(v))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow([_cell(v) for v in r])
        return buf.getvalue()

    def meta(self) -> dict[str, Any]:
        return {
            "experiment": self.name,
            "header": self.header,
            "columns": list(self.columns),
            "n_rows": len(self.rows),
            "summary": self.summary,
            "verdict": self.verdict,
        }
