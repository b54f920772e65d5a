"""Acceptance criteria 1-12 at their stated sizes and tolerances.

Each test records one or more sub-checks through ``record_criterion``; the
terminal summary prints a single pass/fail line per criterion.
"""

import json
import math
import time

import numpy as np
import pytest

from bohrgroups import bohr, circle, cli, convexity, matfun
from bohrgroups.fourier import inverse_values, transform_values
from bohrgroups.groups import build_group, dual
from bohrgroups.matfun import GmfSpec

from conftest import record_criterion

SEED = 20240611


def _rng(offset=0):
    return np.random.default_rng(SEED + offset)


def test_criterion_01_moebius_radius():
    t = time.perf_counter()
    res = circle.bohr_radius("moebius", tol=1e-4)
    elapsed = time.perf_counter() - t
    ok = abs(res.radius - 1 / 3) <= 1e-3 and elapsed < 5
    record_criterion(1, ok, f"radius={res.radius:.6f} |r-1/3|={abs(res.radius - 1 / 3):.1e} in {elapsed:.2f}s")
    assert ok


def test_criterion_02_a0zero_radius():
    s = 2 ** -0.5
    forced = abs(circle.h_closed_form(s, s) - 1)
    res = circle.bohr_radius("moebius-a0zero", tol=1e-4)
    ok = forced <= 1e-9 and abs(res.radius - s) <= 1e-3
    record_criterion(2, ok, f"h(1/sqrt2, 1/sqrt2) - 1 = {forced:.1e}; radius={res.radius:.6f}")
    assert ok


def test_criterion_03_circle_reduction():
    rep = circle.thm1_circle_reduction(0.5, 1 / 3)
    a = _rng(3).uniform(0, 1, 1000)
    coeffs = np.stack([circle.moebius_coeffs(x).coeffs for x in a])
    lhs, _ = circle.circle_reduction_batch(coeffs, 1 / 3, 0.0)
    direct = np.array([circle.bohr_sum(circle.moebius_coeffs(x), 1 / 3) for x in a])
    ok = (abs(rep.constraint_value - 0.5) <= 1e-12 and np.all(lhs <= 1 + 1e-9)
          and np.max(np.abs(lhs - direct)) <= 1e-12)
    record_criterion(3, ok, f"constraint={rep.constraint_value!r}; max lhs over 1000 Moebius={lhs.max():.12f}; "
                            f"|reduction - bohr_sum| <= {np.max(np.abs(lhs - direct)):.1e}")
    assert ok


def test_criterion_04_fourier_exactness():
    t = time.perf_counter()
    worst_rt = worst_pv = 0.0
    rng = _rng(4)
    for lab in ("cyclic:8", "symmetric:3", "quaternion:8"):
        du = dual(build_group(lab))
        order = du.group.order
        vals = rng.standard_normal((1000, order)) + 1j * rng.standard_normal((1000, order))
        coeffs = transform_values(vals, du)
        worst_rt = max(worst_rt, float(np.max(np.abs(inverse_values(coeffs, du) - vals))))
        energy = sum(r.dim * np.sum(np.abs(c) ** 2, axis=(1, 2)) for r, c in zip(du, coeffs))
        worst_pv = max(worst_pv, float(np.max(np.abs(np.mean(np.abs(vals) ** 2, axis=1) - energy))))
    elapsed = time.perf_counter() - t
    ok = worst_rt <= 1e-10 and worst_pv <= 1e-10 and elapsed < 10
    record_criterion(4, ok, f"round trip {worst_rt:.1e}, Parseval {worst_pv:.1e} in {elapsed:.2f}s")
    assert ok


def test_criterion_05_coefficient_bound():
    lines, ok = [], True
    for i, lab in enumerate(("symmetric:3", "quaternion:8")):
        du = dual(build_group(lab))
        s = bohr.sweep_coeff_bound(du, 10_000, _rng(50 + i))
        neg = bohr.sweep_coeff_bound(du, 1000, _rng(60 + i), negative_control=True)
        ok &= s.failures == 0 and neg.failures >= 1
        lines.append(f"{lab} {s.failures}/10000 violations, negative control {neg.failures}/1000 detected")
    record_criterion(5, ok, "; ".join(lines))
    assert ok


@pytest.mark.parametrize("label", ["cyclic:12", "symmetric:3", "quaternion:8"])
def test_criterion_06_theorem_sweeps(label):
    du = dual(build_group(label))
    rng = _rng(6)
    fails, worst = 0, -math.inf
    eq_dev = 0.0
    for th in (1, 2):
        for v in bohr.VARIANTS:
            s = bohr.sweep_theorem(th, v, du, 10_000, rng)
            fails += s.failures
            worst = max(worst, s.extra["max_lhs"])
            e = bohr.equality_sweep(th, v, du, 100, rng)
            fails += e.failures
            eq_dev = max(eq_dev, e.extra["max_deviation"])
    ok = fails == 0
    record_criterion(6, ok, f"{label}: 6 x 10^4 tight cases, max lhs {worst:.12f}, "
                            f"f = 1 deviation {eq_dev:.1e}, failures {fails}")
    assert ok


def test_criterion_07_lemma_oracle():
    t = time.perf_counter()
    s = matfun.sweep_lemma1(100_000, _rng(7))
    elapsed = time.perf_counter() - t
    ok = s.failures == 0 and elapsed < 60
    record_criterion(7, ok, f"{s.trials} triples x 6 modes x m=1..4: {s.failures} violations in {elapsed:.1f}s")
    assert ok


def test_criterion_08_matrix_theorems():
    rng = _rng(8)
    results = {name: fn(10_000, rng) for name, fn in (
        ("B", matfun.sweep_thmB), ("C", matfun.sweep_thmC), ("D", matfun.sweep_thmD))}
    specs = [GmfSpec.symmetric(2, "sign"), GmfSpec.symmetric(3, "sign"), matfun.parse_gmf("gmf:a3:omega", 3)]
    results["E"] = matfun.sweep_thmE(10_000, rng, specs=specs)
    ok = all(s.failures == 0 and s.trials == 10_000 for s in results.values())
    record_criterion(8, ok, ", ".join(f"{k}: {s.failures} violations" for k, s in results.items())
                     + f" (E over {', '.join(str(x) for x in specs)})")
    assert ok


def test_criterion_09_blowup_threshold():
    # cot(mu/2)/4 is about 1/(2 mu), so at mu = 2e-6 it is 2.5e5; 1e6 needs mu below about 5e-7
    mus = np.geomspace(1e-9, 2e-6, 50)
    vals = circle.remark3_lhs(mus, 1)
    ok = bool(np.all(vals > 1e6))
    record_criterion(9, ok, f"remark3_lhs(2e-6, 1) = {circle.remark3_lhs(2e-6, 1):.4g} "
                            f"(needs > 1e6 for every mu <= 2e-6)")
    assert ok


def test_criterion_09_monotone_and_admissible():
    vals = np.array([r[1] for r in circle.remark3_series(1e-6, 50)])
    monotone = bool(np.all(np.diff(vals) < 0))
    reps = [circle.mu_function_check(circle.MuFunction(float(m))) for m in np.geomspace(1e-2, 1.5, 20)]
    admissible = all(r.passed for r in reps)
    residual = max(r.details["coefficient_residual"] for r in reps)
    top = max(r.details["max_modulus"] for r in reps)
    ok = monotone and admissible
    record_criterion(9, ok, f"strictly decreasing on 50-point grid: {monotone}; 20 f_mu admissible "
                            f"(max |f| {top:.6f}, residual {residual:.1e})")
    assert ok


def test_criterion_10_convexity_constants():
    e2 = convexity.estimate_lambda(2, 2, 2000, seed=SEED)
    e1 = convexity.estimate_lambda(2, 1, 100_000, seed=SEED)
    ok = e2.lambda_hat <= 1e-9 and 0.9 <= e1.lambda_hat <= 1 + 1e-9
    record_criterion(10, ok, f"d=2 lambda {e2.lambda_hat:.1e}; d=1 lambda {e1.lambda_hat:.12f} over 10^5 pairs")
    assert ok


def test_criterion_11_operator_valued_inequality():
    fw = convexity.thm3_forward_check("cyclic:16", 1, 10_000, p=2, r0=1 / 3, seed=SEED)
    cv = convexity.thm3_converse_check("cyclic:16", 1, 2.0, 10_000, r=1 / 3, seed=SEED + 1)
    fns = convexity.gen_Finfty("cyclic:16", 1, (0,) + convexity.analytic_half(dual(build_group("cyclic:16"))),
                               seed=SEED, count=10_000)
    du = dual(build_group("cyclic:16"))
    membership = max(float(np.max(convexity.finfty_residual(np.stack([f.values for f in fns]), du, fns[0].lam))),
                     cv["max_membership_residual"])
    ok = fw["failures"] == 0 and cv["failures"] == 0 and membership <= 1e-10
    record_criterion(11, ok, f"forward {fw['failures']}/10^4, converse {cv['failures']}/10^4 violations; "
                             f"membership residual {membership:.1e}")
    assert ok


DETERMINISM_COMMANDS = [
    ["radius", "--family", "moebius", "--tol", "1e-4"],
    ["verify", "coeff-bound", "--group", "quaternion:8", "--trials", "2000", "--negative-control"],
    ["verify", "thm1", "--group", "cyclic:12", "--variant", "iii", "--trials", "2000"],
    ["verify", "thm2", "--group", "symmetric:3", "--variant", "ii", "--trials", "2000"],
    ["verify", "lemma1", "--trials", "5000"],
    ["verify", "thmE", "--trials", "2000"],
    ["convexity", "lambda", "--dim", "1", "--trials", "5000"],
    ["convexity", "thm3", "--trials", "2000"],
]


def _fingerprint(body):
    summary = body.get("summary") or {}
    sweeps = [(s["failures"], s["worst_margin"]) for s in body.get("sweeps", [])]
    return (summary.get("failures"), summary.get("worst_margin"), sweeps,
            body.get("result", {}).get("radius"), body.get("estimate", {}).get("lambda_hat"))


def test_criterion_12_determinism(capsys):
    same = True
    for cmd in DETERMINISM_COMMANDS:
        prints = []
        for _ in range(2):
            cli.main(cmd + ["--seed", "7", "--quiet"])
            prints.append(_fingerprint(json.loads(capsys.readouterr().out)))
        same &= prints[0] == prints[1]
    record_criterion(12, same, f"{len(DETERMINISM_COMMANDS)} commands run twice with seed 7: "
                               f"{'identical' if same else 'different'} failure counts and worst margins")
    assert same
