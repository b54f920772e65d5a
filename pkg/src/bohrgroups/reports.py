"""Inequality check results, sweep summaries and report files."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field, is_dataclass
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
MAX_DETAILS = 50


@dataclass
class CheckReport:
    """Outcome of one inequality ``lhs <= rhs`` (margin = rhs - lhs)."""

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return to_jsonable(asdict(self))


@dataclass
class SweepSummary:
    """Aggregate of a randomized sweep.

    ``worst_margin`` is the smallest observed ``rhs - lhs`` (negative means
    a violation).  At most ``MAX_DETAILS`` cases are kept; the rest are only
    counted in ``overflow``.
    """

    name: str
    trials: int = 0
    failures: int = 0
    worst_margin: float = math.inf
    details: list = field(default_factory=list)
    overflow: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def add(self, margins, passed, make_detail=None):
        """Fold a batch of margins/pass flags into the summary.

        ``make_detail(i)`` builds a detail record for batch position ``i``;
        it is only called for failing cases (and the batch's worst case while
        the detail list has room).
        """
        margins = np.atleast_1d(np.asarray(margins, dtype=float))
        passed = np.atleast_1d(np.asarray(passed, dtype=bool))
        self.trials += int(margins.size)
        self.failures += int(np.count_nonzero(~passed))
        if margins.size:
            self.worst_margin = min(self.worst_margin, float(np.min(margins)))
        if make_detail is None:
            return
        for i in np.flatnonzero(~passed):
            self._push(make_detail(int(i)))

    def _push(self, record):
        if len(self.details) < MAX_DETAILS:
            self.details.append(record)
        else:
            self.overflow += 1

    def merge(self, other: SweepSummary):
        self.trials += other.trials
        self.failures += other.failures
        self.worst_margin = min(self.worst_margin, other.worst_margin)
        for d in other.details:
            self._push(d)
        self.overflow += other.overflow
        return self

    def as_dict(self):
        return to_jsonable({
            "name": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
            "passed": self.passed,
            "details": self.details,
            "overflow": self.overflow,
            **self.extra,
        })

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: trials={self.trials} failures={self.failures} "
                f"worst_margin={self.worst_margin:.3e}")


def to_jsonable(obj):
    """Recursively convert numpy/complex/dataclass values to JSON-safe types."""
    if is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "as_dict"):
            return to_jsonable(obj.as_dict())
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def atomic_write(path, text: str):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(payload) -> str:
    body = {"schema_version": SCHEMA_VERSION, **to_jsonable(payload)}
    return json.dumps(body, indent=2, sort_keys=False) + "\n"


def rows_to_csv(header, rows) -> str:
    """Locale-free CSV with '.' decimals and '\\n' line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
