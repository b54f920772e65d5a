"""Command-line entry point.

Exit status: 0 when every check passes, 1 when an inequality check fails,
2 on usage or configuration errors (unknown descriptors included).
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import bohr, circle, convexity, matfun
from .fourier import inverse_values, transform_values
from .groups import DualList, GroupSpecError, Irrep, build_group, check_group, dual, verify_dual
from .reports import SweepSummary, atomic_write, dump_json, rows_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MODULES = ("group_rep", "fourier", "matfun", "bohr_verify", "circle", "convexity")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _emit(args, payload, csv_rows=None):
    """Write the report to ``--out`` (atomically) or print it.

    ``--out json`` / ``--out csv`` with no path select the format and print to stdout.
    """
    fmt, out = args.format, args.out
    if out in ("json", "csv"):
        fmt, out = out, None
    if fmt is None:
        fmt = "csv" if (out or "").endswith(".csv") else "json"
    if fmt == "csv":
        if csv_rows is None:
            raise UsageError("this command has no CSV output; use --format json")
        text = rows_to_csv(*csv_rows)
    else:
        text = dump_json(payload)
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _summary_payload(args, summaries, start, **extra):
    total = SweepSummary("total")
    for s in summaries:
        total.merge(s)
    return {
        "command": " ".join(args.argv),
        "seed": args.seed,
        "summary": {"trials": total.trials, "failures": total.failures, "worst_margin": total.worst_margin},
        "wall_time": time.perf_counter() - start,
        "sweeps": [s.as_dict() for s in summaries],
        "reports": [d for s in summaries for d in s.details],
        "overflow": total.overflow,
        **extra,
    }


def _status(summaries):
    return EXIT_OK if all(s.passed for s in summaries) else EXIT_FAIL


def _log(args, text):
    if not args.quiet:
        print(text, file=sys.stderr)


# ---------------------------------------------------------------------------
# commands


def _load_group(spec):
    try:
        return build_group(spec)
    except GroupSpecError as exc:
        raise UsageError(str(exc)) from exc


def _fixed_specs(args, du):
    try:
        if args.variant == "i" and args.norm:
            return bohr.default_specs(du, "i", norm=matfun.parse_norm(args.norm))
        if args.variant == "ii" and args.gauge:
            return bohr.default_specs(du, "ii", gauge=matfun.parse_gauge(args.gauge))
        if args.variant == "iii" and (args.gmf or args.norm):
            norm = matfun.parse_norm(args.norm) if args.norm else None
            if args.gmf:
                for n in du.nontrivial:
                    if not bohr._gmf_fits(args.gmf, du[n].dim):
                        matfun.parse_gmf(args.gmf, du[n].dim)  # raises with the reason
            return bohr.default_specs(du, "iii", norm=norm, gmf=args.gmf)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad descriptor: {exc}") from exc
    return None


def cmd_verify(args):
    start = time.perf_counter()
    rng = np.random.default_rng(args.seed)
    target = args.target
    trials = args.trials
    if target in ("thm1", "thm2", "coeff-bound"):
        g = _load_group(args.group)
        du = dual(g)
        theorem = 1 if target in ("thm1", "coeff-bound") else 2
        if target == "coeff-bound":
            sums = [bohr.sweep_coeff_bound(du, trials, rng)]
            if args.negative_control:
                neg = bohr.sweep_coeff_bound(du, min(trials, 1000), rng, negative_control=True)
                _log(args, neg.line())
                sums_extra = {"negative_control": {"trials": neg.trials, "violations": neg.failures,
                                                   "detected": neg.failures > 0}}
            else:
                sums_extra = {}
        else:
            specs = _fixed_specs(args, du)
            sums = [bohr.sweep_theorem(theorem, args.variant, du, trials, rng, specs=specs)]
            if args.equality_trials:
                sums.append(bohr.equality_sweep(theorem, args.variant, du, args.equality_trials, rng))
            sums_extra = {"variant": args.variant, "group": g.label}
    elif target == "lemma1":
        sums, sums_extra = [matfun.sweep_lemma1(trials, rng)], {}
    else:
        fn = {"thmB": matfun.sweep_thmB, "thmC": matfun.sweep_thmC, "thmD": matfun.sweep_thmD,
              "thmE": matfun.sweep_thmE}[target]
        sums, sums_extra = [fn(trials, rng)], {}
    for s in sums:
        _log(args, s.line())
    payload = _summary_payload(args, sums, start, **sums_extra)
    _emit(args, payload)
    status = _status(sums)
    if target == "coeff-bound" and args.negative_control and not sums_extra["negative_control"]["detected"]:
        status = EXIT_FAIL
    return status


def cmd_radius(args):
    start = time.perf_counter()
    try:
        res = circle.bohr_radius(args.family, args.tol, r_cap=args.r_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"{res.family}: radius={res.radius:.6f} (tol={res.tol:g}, saturated={res.saturated})", file=sys.stderr)
    payload = {"command": " ".join(args.argv), "result": res.as_dict(), "wall_time": time.perf_counter() - start}
    _emit(args, payload, (["family", "radius", "tol", "saturated"],
                          [[res.family, res.radius, res.tol, int(res.saturated)]]))
    return EXIT_OK


def cmd_counterexample(args):
    if args.kind == "remark3":
        try:
            rows = circle.remark3_series(args.mu_min, args.steps, args.n_tilde, args.r0)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        lhs = [r[1] for r in rows]
        monotone = all(a > b for a, b in zip(lhs, lhs[1:]))
        crossing = [r[0] for r in rows if r[1] > r[2]]
        payload = {"command": " ".join(args.argv), "rows": [dict(zip(("mu", "lhs", "bound"), r)) for r in rows],
                   "strictly_decreasing_in_mu": monotone,
                   "largest_mu_exceeding_bound": max(crossing) if crossing else None}
        _emit(args, payload, (["mu", "lhs", "bound"], rows))
        return EXIT_OK if monotone else EXIT_FAIL
    # convexity2x2: the operator-norm pair that defeats complex convexity
    x, y = convexity.canonical_pair(2)
    thetas = 2 * np.pi * np.arange(args.steps) / args.steps
    norms = convexity.spectral_norm(x[None] + np.exp(1j * thetas)[:, None, None] * y[None])
    rows = [(float(t), float(v)) for t, v in zip(thetas, norms)]
    est = convexity.estimate_lambda(2.0, 2, 0)
    payload = {"command": " ".join(args.argv), "x": x, "y": y, "max_theta_norm": float(norms.max()),
               "lambda_hat": est.lambda_hat, "rows": [{"theta": t, "norm": v} for t, v in rows]}
    _emit(args, payload, (["theta", "norm"], rows))
    return EXIT_OK if est.lambda_hat <= 1e-9 else EXIT_FAIL


def cmd_convexity(args):
    start = time.perf_counter()
    if args.kind == "lambda":
        if args.p < 2:
            raise UsageError("--p must be at least 2")
        est = convexity.estimate_lambda(args.p, args.dim, args.trials, seed=args.seed)
        print(f"lambda_hat={est.lambda_hat:.6g} (p={args.p:g}, d={args.dim}, trials={args.trials})", file=sys.stderr)
        payload = {"command": " ".join(args.argv), "estimate": est.as_dict(), "wall_time": time.perf_counter() - start}
        _emit(args, payload, (["p", "d", "trials", "lambda_hat"], [[args.p, args.dim, args.trials, est.lambda_hat]]))
        return EXIT_OK
    g = _load_group(args.group)
    if not g.is_abelian:
        raise UsageError("convexity thm3 needs an abelian group")
    parts = {}
    if args.dir in ("forward", "both"):
        r0 = args.r if args.dim == 1 else None
        parts["forward"] = convexity.thm3_forward_check(g, args.dim, args.trials, p=args.p, r0=r0, seed=args.seed)
    if args.dir in ("converse", "both"):
        try:
            parts["converse"] = convexity.thm3_converse_check(g, args.dim, args.p, args.trials,
                                                              r=args.r, seed=args.seed + 1)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    for part in parts.values():
        _log(args, part["line"])
    failures = sum(p["failures"] for p in parts.values())
    payload = {"command": " ".join(args.argv), "summary": {
        "trials": sum(p["trials"] for p in parts.values()), "failures": failures,
        "worst_margin": min((p["worst_margin"] for p in parts.values()), key=_num, default=math.inf)},
        **parts, "wall_time": time.perf_counter() - start}
    _emit(args, payload)
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _num(v):
    return {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}.get(v, v) if isinstance(v, str) else v


# ---------------------------------------------------------------------------
# selftest


def _corrupt(du: DualList) -> DualList:
    """Perturb one matrix entry of the last irrep (fault injection for the selftest)."""
    reps = list(du.irreps)
    m = np.array(reps[-1].matrices)
    m[1, 0, 0] *= 1.1
    reps[-1] = Irrep(reps[-1].dim, m, reps[-1].label, reps[-1].name)
    return DualList(du.group, tuple(reps), du.conjugate_index)


def _selftest_checks(scale: float, fault: str | None):
    rng = np.random.default_rng(12345)
    n = lambda k: max(1, int(k * scale))  # noqa: E731
    groups = ["cyclic:8", "cyclic:12", "dihedral:5", "symmetric:3", "symmetric:4", "quaternion:8"]

    def group_rep():
        out = []
        for lab in groups:
            g = build_group(lab)
            du = dual(g)
            if fault == "group_rep" and lab == "symmetric:3":
                du = _corrupt(du)
            out.append((f"{lab}: group axioms", all(check_group(g).values())))
            out.append((f"{lab}: dual orthogonality and completeness", verify_dual(du).passed))
        return out

    def fourier():
        out = []
        for lab in ("cyclic:8", "symmetric:3", "quaternion:8"):
            g = build_group(lab)
            du = dual(g)
            vals = rng.standard_normal((n(200), g.order)) + 1j * rng.standard_normal((n(200), g.order))
            coeffs = transform_values(vals, du)
            rt = float(np.max(np.abs(inverse_values(coeffs, du) - vals)))
            pv = np.mean(np.abs(vals) ** 2, axis=1) - sum(r.dim * np.sum(np.abs(c) ** 2, axis=(1, 2))
                                                          for r, c in zip(du, coeffs))
            out.append((f"{lab}: inversion round trip", rt <= 1e-10))
            out.append((f"{lab}: Parseval", float(np.max(np.abs(pv))) <= 1e-10))
        return out

    def matfun_checks():
        return [(s.name, s.passed) for s in (
            matfun.sweep_lemma1(n(5000), rng), matfun.sweep_thmB(n(1000), rng), matfun.sweep_thmC(n(1000), rng),
            matfun.sweep_thmD(n(1000), rng), matfun.sweep_thmE(n(1000), rng))]

    def bohr_checks():
        out = []
        for lab in ("cyclic:12", "symmetric:3", "quaternion:8"):
            du = dual(build_group(lab))
            out.append((f"{lab}: coefficient bound", bohr.sweep_coeff_bound(du, n(1000), rng).passed))
            neg = bohr.sweep_coeff_bound(du, n(200), rng, negative_control=True)
            out.append((f"{lab}: negative control detected", neg.failures > 0))
            for th in (1, 2):
                for v in bohr.VARIANTS:
                    out.append((f"{lab}: thm{th}-{v}", bohr.sweep_theorem(th, v, du, n(300), rng).passed))
                out.append((f"{lab}: thm{th} equality", bohr.equality_sweep(th, "i", du, n(50), rng).passed))
        return out

    def circle_checks():
        r1 = circle.bohr_radius("moebius", 1e-4)
        r2 = circle.bohr_radius("moebius-a0zero", 1e-4)
        red = circle.thm1_circle_reduction(0.5, 1 / 3)
        mus = np.linspace(0.01, math.pi / 2 - 0.01, 5)
        return [
            ("Moebius radius 1/3", abs(r1.radius - 1 / 3) <= 1e-3),
            ("a0 = 0 radius 1/sqrt(2)", abs(r2.radius - 2 ** -0.5) <= 1e-3),
            ("reduction budget 1/2 at r = 1/3", abs(red.constraint_value - 0.5) <= 1e-12 and red.passed),
            ("closed form matches truncated sum",
             abs(circle.bohr_sum(circle.moebius_coeffs(0.7), 0.9) - (0.7 + 0.51 * 0.9 / 0.37)) <= 1e-9),
            ("f_mu bounded with exact coefficients",
             all(circle.mu_function_check(circle.MuFunction(m)).passed for m in mus)),
            ("remark3 lhs decreasing in mu", bool(np.all(np.diff(circle.remark3_lhs(np.geomspace(1e-6, 1.5, 50))) < 0))),
        ]

    def convexity_checks():
        e1 = convexity.estimate_lambda(2, 1, n(20000), seed=1)
        e2 = convexity.estimate_lambda(2, 2, n(2000), seed=2)
        fw = convexity.thm3_forward_check("cyclic:16", 1, n(2000), r0=1 / 3, seed=3)
        cv = convexity.thm3_converse_check("cyclic:16", 1, 2.0, n(2000), seed=4)
        return [("scalar lambda near 1", 0.9 <= e1.lambda_hat <= 1 + 1e-9),
                ("2x2 operator norm lambda vanishes", e2.lambda_hat <= 1e-9),
                ("forward direction", fw["failures"] == 0), ("converse direction", cv["failures"] == 0)]

    return {"group_rep": group_rep, "fourier": fourier, "matfun": matfun_checks, "bohr_verify": bohr_checks,
            "circle": circle_checks, "convexity": convexity_checks}


def selftest(only=None, *, scale: float = 1.0, fault: str | None = None) -> dict:
    """Run every module's invariant suite at reduced trial counts."""
    checks = _selftest_checks(scale, fault)
    chosen = list(MODULES) if not only else list(only)
    unknown = [m for m in chosen if m not in checks]
    if unknown:
        raise UsageError(f"unknown module(s) {unknown}; choose from {list(MODULES)}")
    results, failures = {}, []
    for mod in chosen:
        t = time.perf_counter()
        res = checks[mod]()
        results[mod] = {"checks": [{"invariant": name, "passed": bool(ok)} for name, ok in res],
                        "seconds": time.perf_counter() - t}
        failures += [{"module": mod, "invariant": name} for name, ok in res if not ok]
    return {"modules": results, "failures": failures, "passed": not failures}


def cmd_selftest(args):
    start = time.perf_counter()
    rep = selftest(args.only, scale=args.scale, fault=args.inject_fault)
    for f in rep["failures"]:
        print(f"FAIL {f['module']}: {f['invariant']}", file=sys.stderr)
    for mod, r in rep["modules"].items():
        ok = all(c["passed"] for c in r["checks"])
        _log(args, f"[{'PASS' if ok else 'FAIL'}] {mod} ({len(r['checks'])} invariants, {r['seconds']:.1f}s)")
    rep["wall_time"] = time.perf_counter() - start
    rep["command"] = " ".join(args.argv)
    _emit(args, rep)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random stream (default 0)")
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--out", default=None, help="report path; 'json' or 'csv' alone prints that format")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--quiet", action="store_true", help="suppress per-sweep status lines")

    p = argparse.ArgumentParser(prog="bohrgroups", description="Bohr inequalities on compact groups: checks and searches.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="randomized inequality sweeps")
    v.add_argument("target", choices=("thm1", "thm2", "coeff-bound", "lemma1", "thmB", "thmC", "thmD", "thmE"))
    v.add_argument("--group", default="symmetric:3")
    v.add_argument("--variant", choices=bohr.VARIANTS, default="i")
    v.add_argument("--norm", help="e.g. schatten:2, kyfan:1, spectral, trace, frobenius")
    v.add_argument("--gauge", help="e.g. gauge:lp:2, gauge:topk:2")
    v.add_argument("--gmf", help="e.g. gmf:sign, gmf:a3:omega")
    v.add_argument("--equality-trials", type=int, default=100, help="f = 1 cases with unconstrained R")
    v.add_argument("--negative-control", action="store_true", help="coeff-bound: also run Re f > 1 inputs")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("radius", parents=[common], help="Bohr radius bisection")
    r.add_argument("--family", default="moebius", help="moebius, moebius-a0zero or zero")
    r.add_argument("--tol", type=float, default=1e-4)
    r.add_argument("--r-cap", type=float, default=circle.R_CAP)
    r.set_defaults(func=cmd_radius)

    c = sub.add_parser("counterexample", parents=[common], help="constructions showing a hypothesis is needed")
    c.add_argument("kind", choices=("remark3", "convexity2x2"))
    c.add_argument("--mu-min", type=float, default=1e-4)
    c.add_argument("--steps", type=int, default=50)
    c.add_argument("--n-tilde", type=int, default=1)
    c.add_argument("--r0", type=float, default=0.5, help="largest single weight |z_n| (bound = 1/r0)")
    c.set_defaults(func=cmd_counterexample)

    k = sub.add_parser("convexity", parents=[common], help="complex convexity constant and the operator-valued inequality")
    k.add_argument("kind", choices=("lambda", "thm3"))
    k.add_argument("--p", type=float, default=2.0)
    k.add_argument("--dim", type=int, default=1)
    k.add_argument("--group", default="cyclic:16")
    k.add_argument("--dir", choices=("forward", "converse", "both"), default="both")
    k.add_argument("--r", type=float, default=1 / 3)
    k.set_defaults(func=cmd_convexity)

    s = sub.add_parser("selftest", parents=[common], help="every module's invariants at reduced size")
    s.add_argument("--only", nargs="+", choices=MODULES)
    s.add_argument("--scale", type=float, default=1.0, help="multiplier on the reduced trial counts")
    s.add_argument("--inject-fault", choices=("group_rep",), help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    if getattr(args, "trials", 0) < 0:
        print("error: --trials must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
