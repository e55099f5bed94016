# src/gplab/io/write.py
from __future__ import annotations

import json
from pathlib import Path

from ..report import ExperimentReport


def write_report(report: ExperimentReport, csv_path: str | Path) -> Path:
    """Write the report rows to a CSV file and a sidecar JSON metadata file."""
    csv_path = Path(csv_path).with_suffix(".csv")
    csv_path.parent.mkdir(parents=True, exist_ok=True)

    with csv_path.open("w", encoding="utf-8", newline="") as f:
        f.write(report.to_csv())

    meta_path = csv_path.with_suffix(".meta.json")
    with meta_path.open("w", encoding="utf-8") as f:
        json.dump(report.meta(), f, indent=2, ensure_ascii=False, default=str)

    return csv_path
