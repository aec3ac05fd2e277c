"""Result records for numerical identity and inequality checks."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algebra import Multivector


def safe_ratio(lhs: float, rhs: float) -> float:
    if rhs == 0:
        return math.inf if lhs > 0 else 1.0
    return lhs / rhs


def _plain(value: Any):
    if isinstance(value, Multivector):
        return {"p": value.sig.p, "q": value.sig.q, "coeffs": value.as_dict()}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class VerificationReport:
    name: str
    lhs: float
    rhs: float
    tolerance: float
    passed: bool
    ratio: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.passed = bool(self.passed)
        if self.ratio is None:
            self.ratio = safe_ratio(self.lhs, self.rhs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "diagnostics": _plain(self.diagnostics),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    CSV_FIELDS = ("name", "lhs", "rhs", "ratio", "tolerance", "pass")

    def csv_row(self) -> list:
        d = self.to_dict()
        return [d[k] for k in self.CSV_FIELDS]

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: lhs={self.lhs:.12g} rhs={self.rhs:.12g} ratio={self.ratio:.12g} tol={self.tolerance:g}"


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VerificationReport.CSV_FIELDS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def plain(value):
    """JSON-ready copy of nested diagnostics."""
    return _plain(value)
