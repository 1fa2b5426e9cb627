"""Delimited and JSON report writers.

Output is byte-deterministic for a fixed run configuration: floats are
written in shortest round-trip form, keys are sorted, and nothing
time-dependent is recorded.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .inequalities import BoundReport

BOUND_COLUMNS = ["inequality", "k", "n", "alpha", "beta", "lhs", "rhs",
                 "slack", "satisfied", "proxy"]
SPECTRUM_COLUMNS = ["index", "eigenvalue", "residual"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def bound_report_row(report: BoundReport) -> dict:
    return {
        "inequality": str(report.inequality_id),
        "k": report.k,
        "n": report.n,
        "alpha": report.alpha,
        "beta": report.beta,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "slack": report.slack,
        "satisfied": report.satisfied,
        "proxy": report.proxy,
    }


def write_bounds_csv(reports: Sequence[BoundReport], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BOUND_COLUMNS)
        for rep in reports:
            row = bound_report_row(rep)
            writer.writerow([_fmt(row[c]) for c in BOUND_COLUMNS])


def write_bounds_json(reports: Sequence[BoundReport], meta: dict, path) -> None:
    payload = {"meta": meta, "reports": [bound_report_row(r) for r in reports]}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_spectrum_csv(values: Iterable[float], residuals: Iterable[float], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPECTRUM_COLUMNS)
        for i, (v, r) in enumerate(zip(values, residuals), start=1):
            writer.writerow([i, repr(float(v)), repr(float(r))])


def read_spectrum_csv(path) -> np.ndarray:
    """Eigenvalues from a spectrum CSV (a bare one-column file also works)."""
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row:
                continue
            cell = row[min(1, len(row) - 1)]
            try:
                values.append(float(cell))
            except ValueError:
                continue  # header line
    if not values:
        raise ValidationError(f"no eigenvalues found in {path}")
    return np.asarray(values)


def write_json(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
