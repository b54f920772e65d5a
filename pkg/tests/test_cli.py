import csv
import io
import json

import pytest

from bohrgroups import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _strip_times(obj):
    if isinstance(obj, dict):
        return {k: _strip_times(v) for k, v in obj.items() if k not in ("wall_time", "seconds")}
    if isinstance(obj, list):
        return [_strip_times(v) for v in obj]
    return obj


@pytest.mark.parametrize("target", ["thm1", "thm2", "coeff-bound", "lemma1", "thmB", "thmC", "thmD", "thmE"])
def test_verify_targets_pass(capsys, target):
    code, out, err = run(capsys, "verify", target, "--trials", "200", "--seed", "1")
    body = json.loads(out)
    assert code == 0 and body["schema_version"] == 1
    assert body["summary"]["failures"] == 0 and body["seed"] == 1
    assert "[PASS]" in err


@pytest.mark.parametrize("variant,flag,value", [
    ("i", "--norm", "kyfan:1"), ("ii", "--gauge", "gauge:topk:2"), ("iii", "--gmf", "gmf:sign"),
])
def test_verify_fixed_descriptors(capsys, variant, flag, value):
    code, out, _ = run(capsys, "verify", "thm1", "--group", "quaternion:8", "--variant", variant, flag, value,
                       "--trials", "200", "--quiet")
    assert code == 0 and json.loads(out)["variant"] == variant


def test_runs_are_deterministic(capsys):
    args = ("verify", "thm2", "--group", "symmetric:4", "--variant", "iii", "--trials", "300", "--seed", "9")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert _strip_times(json.loads(first)) == _strip_times(json.loads(second))


def test_negative_control_is_reported(capsys):
    code, out, _ = run(capsys, "verify", "coeff-bound", "--negative-control", "--trials", "300", "--quiet")
    neg = json.loads(out)["negative_control"]
    assert code == 0 and neg["detected"] and neg["violations"] > 0


@pytest.mark.parametrize("argv", [
    ("verify", "thm1", "--group", "nosuch:3"),
    ("verify", "thm1", "--variant", "i", "--norm", "bogus:1"),
    ("verify", "thm1", "--trials", "-5"),
    ("verify", "nothing"),
    ("radius", "--family", "blaschke"),
    ("convexity", "lambda", "--p", "1.5"),
    ("convexity", "thm3", "--group", "symmetric:3"),
    ("counterexample", "remark3", "--mu-min", "0"),
    ("selftest", "--only", "nomodule"),
    ("verify", "lemma1", "--out", "csv"),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_radius(capsys):
    code, out, err = run(capsys, "radius", "--tol", "1e-4")
    res = json.loads(out)["result"]
    assert code == 0 and abs(res["radius"] - 1 / 3) <= 1e-4 and "radius=0.333" in err


def test_radius_csv(capsys):
    code, out, _ = run(capsys, "radius", "--family", "zero", "--out", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["saturated"] == "1" and float(rows[0]["radius"]) == 0.95


def test_remark3_csv(capsys):
    code, out, _ = run(capsys, "counterexample", "remark3", "--mu-min", "1e-6", "--steps", "20", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 20 and list(rows[0]) == ["mu", "lhs", "bound"]
    assert float(rows[0]["lhs"]) > float(rows[-1]["lhs"])


def test_convexity2x2(capsys):
    code, out, _ = run(capsys, "counterexample", "convexity2x2", "--steps", "64")
    body = json.loads(out)
    assert code == 0 and body["lambda_hat"] == 0 and abs(body["max_theta_norm"] - 1) <= 1e-12


def test_convexity_commands(capsys):
    code, out, _ = run(capsys, "convexity", "lambda", "--dim", "1", "--trials", "2000")
    assert code == 0 and abs(json.loads(out)["estimate"]["lambda_hat"] - 1) <= 1e-6
    code, out, _ = run(capsys, "convexity", "thm3", "--trials", "500", "--quiet")
    body = json.loads(out)
    assert code == 0 and body["summary"]["failures"] == 0 and "forward" in body and "converse" in body


def test_failing_check_exits_1(capsys):
    code, _, err = run(capsys, "selftest", "--only", "group_rep", "--inject-fault", "group_rep", "--quiet")
    assert code == 1 and "FAIL group_rep: symmetric:3: dual orthogonality and completeness" in err


def test_atomic_file_output(capsys, tmp_path):
    path = tmp_path / "reports" / "thm1.json"
    code, out, _ = run(capsys, "verify", "thm1", "--trials", "100", "--out", str(path), "--quiet")
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["summary"]["trials"] == 200  # sweep plus equality cases
    assert sorted(p.name for p in path.parent.iterdir()) == ["thm1.json"]


def test_csv_path_selects_csv(capsys, tmp_path):
    path = tmp_path / "rows.csv"
    run(capsys, "counterexample", "remark3", "--steps", "5", "--out", str(path))
    assert path.read_text().startswith("mu,lhs,bound\n")


def test_selftest_subset(capsys):
    code, out, err = run(capsys, "selftest", "--only", "circle", "convexity", "--scale", "0.2")
    body = json.loads(out)
    assert code == 0 and body["passed"] and set(body["modules"]) == {"circle", "convexity"}
    assert "[PASS] circle" in err


def test_selftest_function():
    rep = cli.selftest(["group_rep", "fourier"])
    assert rep["passed"] and not rep["failures"]


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
