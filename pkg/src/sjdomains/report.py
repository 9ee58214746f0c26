"""Typed results for verification suites plus JSON/CSV serialization.

A check either carries a residual (deterministic, compared against tol) or an
(estimate, sigma) pair (Monte Carlo, compared against a target within a sigma
multiple).  Reports serialize deterministically: keys sorted, complex values
as [re, im], timestamp optional so byte-identical reruns are possible.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np


def encode_value(value):
    """JSON encoding: complex -> [re, im]; numpy scalars -> python scalars."""
    if isinstance(value, complex) or isinstance(value, np.complexfloating):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [encode_value(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    if isinstance(value, dict):
        return {str(key): encode_value(val) for key, val in value.items()}
    return value


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float | None = None
    estimate: complex | None = None
    sigma: float | None = None
    tol: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "pass": bool(self.passed)}
        if self.residual is not None:
            out["residual"] = float(self.residual)
        if self.estimate is not None:
            out["estimate"] = encode_value(complex(self.estimate))
        if self.sigma is not None:
            out["sigma"] = float(self.sigma)
        if self.tol is not None:
            out["tol"] = float(self.tol)
        if self.detail:
            out["detail"] = encode_value(self.detail)
        return out

    def summary(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if self.residual is not None:
            body = f"residual={self.residual:.3e}"
            if self.tol is not None:
                body += f" tol={self.tol:.1e}"
        elif self.estimate is not None:
            body = f"estimate={complex(self.estimate):.6g}"
            if self.sigma is not None:
                body += f" sigma={self.sigma:.2e}"
        else:
            body = ""
        return f"{tag} {self.name} {body}".rstrip()


def residual_check(name, residual, tol, detail=None) -> CheckResult:
    return CheckResult(name=name, passed=bool(residual <= tol),
                       residual=float(residual), tol=float(tol),
                       detail=detail or {})


def mc_check(name, estimate, sigma, target, nsigma=3.0, floor=0.0, detail=None) -> CheckResult:
    err = abs(complex(estimate) - complex(target))
    return CheckResult(name=name, passed=bool(err <= nsigma * sigma + floor),
                       estimate=complex(estimate), sigma=float(sigma),
                       tol=float(nsigma * sigma + floor),
                       detail={**(detail or {}), "target": encode_value(complex(target))})


@dataclass
class VerifyReport:
    suite: str
    params: dict
    seed: int | None
    checks: list
    timestamp: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def stamp(self):
        self.timestamp = time.strftime("%Y-%m-%dT%H:%M:%S")
        return self

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "params": encode_value(self.params),
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "pass": bool(self.passed),
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary_lines(self) -> list:
        head = f"[{'PASS' if self.passed else 'FAIL'}] suite {self.suite}"
        return [head] + ["  " + c.summary() for c in self.checks]


def atomic_write_text(path, text):
    """Write-to-temp plus rename so failed runs never leave partial files."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report_json(report: VerifyReport, path):
    atomic_write_text(path, report.to_json())


def matrix_csv_text(matrix, row_labels, col_labels, sigma=None) -> str:
    """Long-format CSV of a (Gram) matrix: indices, labels, estimate, sigma."""
    matrix = np.asarray(matrix)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["i", "j", "row", "col", "re", "im", "sigma"])
    for i, rlab in enumerate(row_labels):
        for j, clab in enumerate(col_labels):
            entry = complex(matrix[i, j])
            sig = repr(float(sigma[i, j])) if sigma is not None else ""
            writer.writerow([i, j, str(rlab), str(clab),
                             repr(entry.real), repr(entry.imag), sig])
    return buf.getvalue()


def write_csv_rows(path, header, rows):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for row in rows:
                writer.writerow([encode_value(v) for v in row])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
