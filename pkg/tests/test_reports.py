import json
import math

import numpy as np
import pytest

from bohrgroups.matfun import DotMode
from bohrgroups.reports import (MAX_DETAILS, CheckReport, SweepSummary, atomic_write, dump_json, rows_to_csv,
                                to_jsonable)


def test_summary_accumulates_batches():
    s = SweepSummary("demo")
    s.add([0.5, 0.1, 0.2], [True, True, True])
    s.add([-0.3, 0.4], [False, True], lambda i: {"i": i})
    assert (s.trials, s.failures, s.worst_margin) == (5, 1, -0.3)
    assert s.details == [{"i": 0}] and not s.passed
    assert s.line() == "[FAIL] demo: trials=5 failures=1 worst_margin=-3.000e-01"


def test_summary_caps_details():
    s = SweepSummary("many")
    n = MAX_DETAILS + 7
    s.add(-np.ones(n), np.zeros(n, bool), lambda i: {"i": i})
    assert len(s.details) == MAX_DETAILS and s.overflow == 7


def test_merge():
    a, b = SweepSummary("a"), SweepSummary("b")
    a.add([1.0], [True])
    b.add([-2.0, 3.0], [False, True], lambda i: i)
    a.merge(b)
    assert (a.trials, a.failures, a.worst_margin, a.details) == (3, 1, -2.0, [0])


def test_empty_summary_passes():
    s = SweepSummary("empty")
    assert s.passed and s.as_dict()["worst_margin"] == "inf"


@pytest.mark.parametrize("value,expected", [
    (np.float64(1.5), 1.5), (np.int64(3), 3), (np.bool_(True), True), (1 + 2j, [1.0, 2.0]),
    (math.inf, "inf"), (-math.inf, "-inf"), (math.nan, "nan"), (np.eye(2), [[1.0, 0.0], [0.0, 1.0]]),
    ((1, 2), [1, 2]), ({1: "a"}, {"1": "a"}), (DotMode.MATRIX, DotMode.MATRIX.value),
])
def test_to_jsonable(value, expected):
    assert to_jsonable(value) == expected


def test_check_report_serializes():
    d = CheckReport("x", 1.0, 2.0, 1.0, True, {"m": np.array([1j])}).as_dict()
    assert d["details"]["m"] == [[0.0, 1.0]]


def test_dump_json_has_schema_version():
    body = json.loads(dump_json({"a": np.float32(0.5)}))
    assert body == {"schema_version": 1, "a": 0.5}


def test_rows_to_csv_round_trips_floats():
    text = rows_to_csv(["a", "b"], [[0.1, "x"], [1 / 3, 2]])
    assert text == "a,b\n0.1,x\n0.3333333333333333,2\n"


def test_atomic_write(tmp_path):
    target = tmp_path / "sub" / "out.json"
    atomic_write(target, "one")
    atomic_write(target, "two")
    assert target.read_text() == "two"
    assert [p.name for p in target.parent.iterdir()] == ["out.json"]
