"""Bohr-type inequalities for Fourier coefficients on finite groups.

Two families are checked.  For ``Re f <= 1`` with mean ``a0 = f^(pi_0)`` in
``[0, 1)`` the coefficient blocks are symmetrized,
``X_n = f^(pi_n) + conj(f^(conj pi_n))``, and every singular value of
``X_n`` is at most ``2 (1 - a0)``.  Consequently, for matrices ``R_n``
under a budget of ``1/2``,

    a0 + sum_n  N_n( X_n . pi_n(x) . R_n )  <=  1

with ``N_n`` a unitarily invariant norm (variant ``i``), a symmetric gauge
function (``ii``, budget weighted by ``d_n**2``) or ``|M_chi|**(1/d_n)`` for
a generalized matrix function (``iii``, budget normalized by ``||E11||``).

For ``||f||_2 <= 1`` the plain blocks ``f^(pi_n)`` are used with ``d_n``
weights and the budget ``(1 + a0)(1 + sum_n c_n) <= 2``, where ``c_n`` is
``d_n ||R_n||**2``, ``d_n**5 phi_n(R_n)**2`` or ``d_n ||R_n||**2 / ||E11||**2``.

Numerical work happens on stacked arrays (a leading trial axis); the
single-case functions are thin wrappers.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import matfun as mf
from .fourier import GroupFunction, transform_values
from .groups import DualList, GroupTable
from .matfun import DotMode, GaugeSpec, GmfSpec, NormSpec
from .reports import SweepSummary, to_jsonable

__all__ = [
    "VerificationReport", "RSequence", "IrrepSpec", "AdmissibilityError",
    "gen_re_bounded", "gen_l2_bounded", "coeff_bound", "thm1_verify", "thm2_verify",
    "bohr_lhs", "bohr_constraint", "constraint_cost", "default_specs", "random_specs",
    "sweep_coeff_bound", "sweep_theorem", "equality_sweep", "sharpness_probe",
    "re_bounded_values", "l2_bounded_values",
]

TOL = 1e-9
ADMISSIBLE_TOL = 1e-12
CONJ_TOL = 1e-10
VARIANTS = ("i", "ii", "iii")


class AdmissibilityError(ValueError):
    """The test function does not meet the hypotheses of the inequality."""


@dataclass(frozen=True)
class IrrepSpec:
    """What measures the ``n``-th summand: a norm (i), a gauge (ii) or a
    generalized matrix function paired with the norm used in its budget (iii)."""

    norm: NormSpec | None = None
    gauge: GaugeSpec | None = None
    gmf: GmfSpec | None = None

    def __str__(self):
        if self.gmf is not None:
            return f"{self.gmf}|{self.norm}"
        return str(self.norm if self.norm is not None else self.gauge)


@dataclass
class VerificationReport:
    lhs: float
    constraint_value: float
    constraint_bound: float
    margin: float
    passed: bool
    per_irrep: list
    variant: str
    dot_mode: str
    x: int
    rhs_bound: float = 1.0
    constraint_satisfied: bool = True
    equality_case: bool = False

    def as_dict(self):
        return to_jsonable(asdict(self))


class RSequence(dict):
    """Weight matrices ``R_n`` keyed by dual position ``n >= 1``."""

    @classmethod
    def zeros(cls, dual: DualList):
        return cls({n: np.zeros((dual[n].dim,) * 2, dtype=complex) for n in dual.nontrivial})

    @classmethod
    def unit(cls, dual: DualList, i: int = 1):
        """Every ``R_n`` equal to ``E_ii`` of size ``d_n`` (``i`` is 1-based, clipped to ``d_n``)."""
        out = cls()
        for n in dual.nontrivial:
            e = np.zeros((dual[n].dim,) * 2, dtype=complex)
            k = min(i, dual[n].dim) - 1
            e[k, k] = 1.0
            out[n] = e
        return out

    def check(self, dual: DualList):
        for n in dual.nontrivial:
            if n not in self:
                raise ValueError(f"missing R_{n}")
            if np.shape(self[n]) != (dual[n].dim,) * 2:
                raise ValueError(f"R_{n} must be {dual[n].dim}x{dual[n].dim}, got {np.shape(self[n])}")


# ---------------------------------------------------------------------------
# test-function generators


def _real_shapes(rng, count, order):
    kind = rng.integers(0, 4, count)
    u = rng.standard_normal((count, order))
    u[kind == 1] = -rng.exponential(size=(int((kind == 1).sum()), order))
    u[kind == 2] = rng.integers(0, 2, (int((kind == 2).sum()), order)).astype(float)
    spike = np.zeros((int((kind == 3).sum()), order))
    if spike.size:
        spike[np.arange(spike.shape[0]), rng.integers(0, order, spike.shape[0])] = -1.0
    u[kind == 3] = spike
    return u


def re_bounded_values(rng: np.random.Generator, count: int, order: int) -> np.ndarray:
    """Stacked functions with ``max Re f <= 1`` and real mean in ``[0, 1)``.

    The real part is an affine image of a random shape with target mean
    ``m`` and maximum ``m + t (1 - m)`` (``t = 1`` in half the draws, the
    tight case); the imaginary part is centred so the mean is real.
    """
    u = _real_shapes(rng, count, order)
    m = rng.random(count) ** rng.choice([0.3, 1.0, 3.0], count)
    m = np.minimum(m, 1.0 - 1e-6)
    t = np.where(rng.random(count) < 0.5, 1.0, rng.random(count))
    spread = u.max(axis=1) - u.mean(axis=1)
    s = np.where(spread > 0, t * (1 - m) / np.where(spread > 0, spread, 1.0), 0.0)
    re = m[:, None] + s[:, None] * (u - u.mean(axis=1, keepdims=True))
    re = np.minimum(re, 1.0)
    im = rng.standard_normal((count, order)) * np.exp(rng.standard_normal(count))[:, None]
    im -= im.mean(axis=1, keepdims=True)
    return re + 1j * im


def l2_bounded_values(rng: np.random.Generator, count: int, order: int) -> np.ndarray:
    """Stacked functions with ``mean |f|^2 <= 1`` and real mean in ``[0, 1)``."""
    m = np.minimum(rng.random(count) ** rng.choice([0.3, 1.0, 3.0], count), 1.0 - 1e-6)
    t = np.where(rng.random(count) < 0.5, 1.0, m + (1 - m) * rng.random(count))
    g = rng.standard_normal((count, order)) + 1j * rng.standard_normal((count, order))
    g *= rng.random((count, order)) ** rng.choice([0.0, 2.0, 8.0], (count, 1))
    g -= g.mean(axis=1, keepdims=True)
    power = np.mean(np.abs(g) ** 2, axis=1)
    target = np.maximum(t ** 2 - m ** 2, 0.0) * (1 - 1e-12)
    g *= np.sqrt(np.where(power > 0, target / np.where(power > 0, power, 1.0), 0.0))[:, None]
    return m[:, None] + g


def _parse_fn_spec(spec):
    kind, _, arg = str(spec).partition(":")
    return kind, arg


def gen_re_bounded(group: GroupTable, dual: DualList, seed=0, spec="random") -> GroupFunction:
    """A scalar function with ``Re f <= 1`` and ``0 <= f^(pi_0) < 1``.

    ``spec`` is ``random``, ``constant:c`` (0 <= c <= 1) or ``extremal``
    (``f = 1``, where the mean reaches 1 and equality holds).
    """
    kind, arg = _parse_fn_spec(spec)
    if kind == "constant":
        c = float(arg)
        if not 0 <= c <= 1:
            raise ValueError("constant must lie in [0, 1]")
        return GroupFunction(group, np.full(group.order, c, dtype=complex))
    if kind == "extremal":
        return GroupFunction(group, np.ones(group.order, dtype=complex))
    if kind != "random":
        raise ValueError(f"unknown function spec {spec!r}")
    rng = np.random.default_rng(seed)
    return GroupFunction(group, re_bounded_values(rng, 1, group.order)[0])


def gen_l2_bounded(group: GroupTable, dual: DualList, seed=0, spec="random") -> GroupFunction:
    """A scalar function with ``||f||_2 <= 1`` and ``0 <= f^(pi_0) < 1``.

    ``spec``: ``random``, ``constant:c``, ``extremal`` (``f = 1``),
    ``character:n`` (the 1-dimensional irrep at dual position n), or
    ``norm:s`` (random, rescaled to L2 norm ``s``).
    """
    kind, arg = _parse_fn_spec(spec)
    if kind in ("constant", "extremal"):
        c = 1.0 if kind == "extremal" else float(arg)
        return GroupFunction(group, np.full(group.order, c, dtype=complex))
    if kind == "character":
        rep = dual[int(arg)]
        if rep.dim != 1:
            raise ValueError("character:n needs a one-dimensional irrep")
        return GroupFunction(group, rep.matrices[:, 0, 0])
    rng = np.random.default_rng(seed)
    vals = l2_bounded_values(rng, 1, group.order)[0]
    if kind == "norm":
        s = float(arg)
        m = vals.mean().real
        g = vals - m
        m = min(m, s * 0.5)
        g *= math.sqrt(max(s * s - m * m, 0.0) / max(np.mean(np.abs(g) ** 2), 1e-300))
        vals = m + g
    elif kind != "random":
        raise ValueError(f"unknown function spec {spec!r}")
    return GroupFunction(group, vals)


# ---------------------------------------------------------------------------
# hypotheses


def _mean_coefficient(values):
    a0 = np.mean(values, axis=-1)
    return a0.real, np.abs(a0.imag)


def _admissible_re(values, tol=ADMISSIBLE_TOL):
    a0, im = _mean_coefficient(values)
    return (np.max(values.real, axis=-1) <= 1 + tol) & (a0 >= -tol) & (a0 <= 1 + tol) & (im <= tol)


def _admissible_l2(values, tol=ADMISSIBLE_TOL):
    a0, im = _mean_coefficient(values)
    return (np.mean(np.abs(values) ** 2, axis=-1) <= 1 + tol) & (a0 >= -tol) & (a0 <= 1 + tol) & (im <= tol)


def _check_f(f: GroupFunction, dual: DualList, theorem: int):
    if not f.is_scalar:
        raise AdmissibilityError("the Bohr inequalities here take scalar functions")
    if f.group.order != dual.group.order or f.group.label != dual.group.label:
        raise ValueError("function and dual belong to different groups")
    ok = _admissible_re(f.values) if theorem == 1 else _admissible_l2(f.values)
    if not ok:
        hyp = "Re f <= 1 and 0 <= f^(pi_0) <= 1" if theorem == 1 else "||f||_2 <= 1 and 0 <= f^(pi_0) <= 1"
        raise AdmissibilityError(f"function violates the hypotheses ({hyp})")


# ---------------------------------------------------------------------------
# coefficient blocks


def symmetrized_blocks(values, dual: DualList, *, tol: float = CONJ_TOL) -> list:
    """``f^(pi_n) + conj(f^(conj pi_n))`` for every position (index 0 included).

    The conjugate term is computed as the transform at the contragredient
    (then conjugated) and, independently, as the transform of ``conj f``;
    a disagreement beyond ``tol`` raises ``ArithmeticError``.
    """
    values = np.asarray(values)
    plain = transform_values(values, dual)
    conj_f = transform_values(np.conj(values), dual)
    order = dual.group.order
    out = []
    for rep, p, cf in zip(dual, plain, conj_f):
        at_contra = np.einsum("...x,xij->...ij", values, np.swapaxes(rep.matrices, 1, 2)) / order
        err = float(np.max(np.abs(np.conj(at_contra) - cf), initial=0.0))
        if err > tol:
            raise ArithmeticError(f"conjugate transform paths disagree by {err:.3e}")
        out.append(p + np.conj(at_contra))
    return out


# ---------------------------------------------------------------------------
# the inequalities on stacked arrays


def _summand(prod, spec: IrrepSpec, variant: str, d: int):
    if variant == "i":
        return mf.uinorm(prod, spec.norm)
    if variant == "ii":
        return mf.gauge(prod, spec.gauge)
    return np.abs(mf.gmf(prod, spec.gmf)) ** (1.0 / d)


def bohr_lhs(theorem: int, variant: str, a0, blocks, pis, rs, mode: DotMode, specs, dims):
    """Left side ``a0 + sum_n w_n N_n(X_n . pi_n(x) . R_n)`` on stacked inputs.

    ``blocks``, ``pis``, ``rs`` and ``specs`` are aligned lists over the
    nontrivial positions; ``w_n`` is 1 for ``theorem=1`` and ``d_n`` for
    ``theorem=2``.  Returns ``(lhs, contributions)`` where contributions has
    one column per position.
    """
    terms = []
    for x, p, r, spec, d in zip(blocks, pis, rs, specs, dims):
        val = _summand(mf.dot3(x, p, r, mode), spec, variant, d)
        terms.append(val * (d if theorem == 2 else 1))
    a0 = np.asarray(a0, dtype=float)
    if not terms:
        return a0.copy(), np.zeros(a0.shape + (0,))
    contrib = np.stack(np.broadcast_arrays(*terms), axis=-1)
    return a0 + contrib.sum(axis=-1), contrib


def constraint_cost(theorem: int, variant: str, r, spec: IrrepSpec, d: int):
    """Per-position budget term ``c_n``: degree 1 in ``R`` for the Re-bounded inequality, degree 2 for the L2 one."""
    if variant == "i":
        base = mf.uinorm(r, spec.norm)
        return base if theorem == 1 else d * base ** 2
    if variant == "ii":
        base = mf.gauge(r, spec.gauge)
        return d ** 2 * base if theorem == 1 else d ** 5 * base ** 2
    base = mf.uinorm(r, spec.norm) / float(mf.uinorm(mf.E11(d), spec.norm))
    return base if theorem == 1 else d * base ** 2


def bohr_constraint(theorem: int, variant: str, a0, rs, specs, dims):
    """Constraint value and its bound (``1/2`` or ``2``)."""
    total = 0.0
    for r, spec, d in zip(rs, specs, dims):
        total = total + constraint_cost(theorem, variant, r, spec, d)
    if theorem == 1:
        return np.asarray(total, dtype=float) + 0 * np.asarray(a0, dtype=float), 0.5
    return (1 + np.asarray(a0, dtype=float)) * (1 + total), 2.0


def _passes(lhs, constraint, bound, a0, tol=TOL):
    """pass  <=>  (constraint met  =>  lhs <= 1 + tol); the mean-one case must hit equality."""
    satisfied = constraint <= bound + tol
    equality = np.abs(a0 - 1.0) <= ADMISSIBLE_TOL
    ok = np.where(equality, np.abs(lhs - 1.0) <= tol, ~satisfied | (lhs <= 1.0 + tol))
    return ok, satisfied, equality


# ---------------------------------------------------------------------------
# single-case API


def default_specs(dual: DualList, variant: str, *, norm=None, gauge=None, gmf=None) -> dict:
    """One ``IrrepSpec`` per nontrivial position.

    ``norm``/``gauge``/``gmf`` accept spec objects or text descriptors; a gmf
    descriptor without a size (``sign``, ``trivial``) is instantiated per
    irrep dimension.
    """
    norm = mf.parse_norm(norm) if isinstance(norm, str) else (norm or NormSpec("schatten", 2.0))
    gauge = mf.parse_gauge(gauge) if isinstance(gauge, str) else (gauge or GaugeSpec("lp", 2.0))
    out = {}
    for n in dual.nontrivial:
        d = dual[n].dim
        if variant == "i":
            out[n] = IrrepSpec(norm=norm)
        elif variant == "ii":
            out[n] = IrrepSpec(gauge=gauge)
        else:
            if isinstance(gmf, GmfSpec) and gmf.n == d:
                g = gmf
            elif isinstance(gmf, str) and _gmf_fits(gmf, d):
                g = mf.parse_gmf(gmf, d)
            else:
                g = _fallback_gmf(d)
            out[n] = IrrepSpec(norm=norm, gmf=g)
    return out


def _gmf_fits(text, d):
    try:
        mf.parse_gmf(text, d)
        return True
    except (ValueError, KeyError):
        return False


def _fallback_gmf(d):
    return mf.GmfSpec.symmetric(d, "sign" if d > 1 else "trivial")


def _single_case(theorem, f, dual, R, x, variant, dot_mode, specs):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    _check_f(f, dual, theorem)
    R = RSequence(R)
    R.check(dual)
    mode = DotMode.parse(dot_mode)
    specs = specs if specs is not None else default_specs(dual, variant)
    if not isinstance(specs, dict):
        specs = {n: specs for n in dual.nontrivial}
    positions = list(dual.nontrivial)
    blocks = symmetrized_blocks(f.values, dual) if theorem == 1 else transform_values(f.values, dual)
    a0 = float(blocks[0].real[0, 0] / (2 if theorem == 1 else 1))
    dims = [dual[n].dim for n in positions]
    xs = [blocks[n] for n in positions]
    pis = [dual[n].matrices[x] for n in positions]
    rs = [np.asarray(R[n], dtype=complex) for n in positions]
    sp = [specs[n] for n in positions]
    lhs, contrib = bohr_lhs(theorem, variant, a0, xs, pis, rs, mode, sp, dims)
    constraint, bound = bohr_constraint(theorem, variant, a0, rs, sp, dims)
    ok, satisfied, equality = _passes(float(lhs), float(constraint), bound, a0)
    return VerificationReport(
        lhs=float(lhs), constraint_value=float(constraint), constraint_bound=bound,
        margin=1.0 - float(lhs), passed=bool(ok),
        per_irrep=[(n, float(c)) for n, c in zip(positions, np.atleast_1d(contrib))],
        variant=f"thm{theorem}-{variant}", dot_mode=mode.value, x=int(x),
        constraint_satisfied=bool(satisfied), equality_case=bool(equality),
    )


def thm1_verify(f: GroupFunction, R, x: int, variant: str, dot_mode, specs=None, *,
                dual: DualList | None = None) -> VerificationReport:
    """Check the symmetrized-coefficient inequality at element ``x``.

    Requires ``Re f <= 1`` and a real mean in ``[0, 1]``; when the mean is
    exactly 1 the report checks equality for whatever ``R`` is given.

    Raises
    ------
    AdmissibilityError
        If ``f`` does not meet the hypotheses.
    """
    from .groups import dual as make_dual
    dual = dual or make_dual(f.group)
    return _single_case(1, f, dual, R, x, variant, dot_mode, specs)


def thm2_verify(f: GroupFunction, R, x: int, variant: str, dot_mode, specs=None, *,
                dual: DualList | None = None) -> VerificationReport:
    """Check the L2 inequality (``d_n``-weighted plain coefficients) at element ``x``."""
    from .groups import dual as make_dual
    dual = dual or make_dual(f.group)
    return _single_case(2, f, dual, R, x, variant, dot_mode, specs)


def coeff_bound(f: GroupFunction, dual: DualList, *, check: bool = True, tol: float = TOL) -> dict:
    """Largest singular value of each symmetrized block against ``2 (1 - f^(pi_0))``.

    With ``check=False`` the hypotheses are not enforced (used by negative controls).
    """
    if check:
        _check_f(f, dual, 1)
    blocks = symmetrized_blocks(f.values, dual)
    a0 = float(np.mean(f.values).real)
    bound = 2 * (1 - a0)
    per = {n: float(mf.singular_values(blocks[n])[0]) for n in dual.nontrivial}
    worst = max(per.values(), default=0.0)
    return {"bound": bound, "a0": a0, "sigma_max": per, "margin": bound - worst,
            "passed": worst <= bound + tol}


# ---------------------------------------------------------------------------
# sweeps


def random_specs(rng, dual: DualList, variant: str) -> list:
    """Independently drawn per-position specs from the built-in families."""
    out = []
    for n in dual.nontrivial:
        d = dual[n].dim
        if variant == "i":
            fam = mf.norm_family(d)
            out.append(IrrepSpec(norm=fam[rng.integers(len(fam))]))
        elif variant == "ii":
            fam = mf.gauge_family()
            out.append(IrrepSpec(gauge=fam[rng.integers(len(fam))]))
        else:
            gf, nf = mf.gmf_family(d), mf.norm_family(d)
            out.append(IrrepSpec(norm=nf[rng.integers(len(nf))], gmf=gf[rng.integers(len(gf))]))
    return out


def _budget_weights(rng, count, k):
    if k == 0:
        return np.zeros((count, 0))
    w = rng.dirichlet(np.full(k, 0.3), count)
    onehot = rng.random(count) < 0.25
    if onehot.any():
        w[onehot] = np.eye(k)[rng.integers(0, k, int(onehot.sum()))]
    return w


def _tight_r(rng, theorem, variant, a0, dual, specs, count):
    """Random ``R`` scaled so the budget is met with equality."""
    positions = list(dual.nontrivial)
    w = _budget_weights(rng, count, len(positions))
    budget = np.full(count, 0.5) if theorem == 1 else (1 - a0) / (1 + a0)
    rs = []
    for j, n in enumerate(positions):
        d = dual[n].dim
        r = mf.random_matrices(rng, count, d)
        cost = constraint_cost(theorem, variant, r, specs[j], d)
        target = w[:, j] * budget
        safe = np.where(cost > 0, cost, 1.0)
        scale = target / safe if theorem == 1 else np.sqrt(target / safe)
        rs.append(r * np.where(cost > 0, scale, 0.0)[:, None, None])
    return rs


def _case_batch(theorem, variant, dual, rng, count, specs, tight=True, values=None):
    order = dual.group.order
    if values is None:
        values = (re_bounded_values if theorem == 1 else l2_bounded_values)(rng, count, order)
    blocks = symmetrized_blocks(values, dual) if theorem == 1 else transform_values(values, dual)
    a0 = np.mean(values, axis=-1).real
    if tight:
        rs = _tight_r(rng, theorem, variant, a0, dual, specs, count)
    else:
        rs = [mf.random_matrices(rng, count, dual[n].dim) for n in dual.nontrivial]
    x = rng.integers(0, order, count)
    modes = rng.integers(0, len(DotMode), count)
    return values, blocks, a0, rs, x, modes


def _evaluate(theorem, variant, dual, blocks, a0, rs, x, modes, specs):
    positions = list(dual.nontrivial)
    dims = [dual[n].dim for n in positions]
    count = a0.shape[0]
    lhs = np.empty(count)
    contrib = np.empty((count, len(positions)))
    for k, mode in enumerate(DotMode):
        idx = np.flatnonzero(modes == k)
        if idx.size == 0:
            continue
        l, c = bohr_lhs(theorem, variant, a0[idx], [blocks[n][idx] for n in positions],
                        [dual[n].matrices[x[idx]] for n in positions], [r[idx] for r in rs],
                        mode, specs, dims)
        lhs[idx], contrib[idx] = l, c
    constraint, bound = bohr_constraint(theorem, variant, a0, rs, specs, dims)
    return lhs, contrib, np.broadcast_to(constraint, a0.shape), bound


def sweep_theorem(theorem: int, variant: str, dual: DualList, trials: int, rng: np.random.Generator,
                  *, block: int = 250, specs=None, tight: bool = True) -> SweepSummary:
    """Randomized sweep over admissible ``(f, R, x, dot mode)`` at constraint equality.

    Specs are redrawn per block of ``block`` trials unless fixed by ``specs``.
    ``worst_margin`` is the smallest ``1 - lhs`` among cases whose
    constraint holds.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    summary = SweepSummary(f"thm{theorem}-{variant}:{dual.group.label}")
    modes_all = list(DotMode)
    max_lhs = -math.inf
    done = 0
    while done < trials:
        count = min(block, trials - done)
        sp = specs if specs is not None else random_specs(rng, dual, variant)
        if isinstance(sp, dict):
            sp = [sp[n] for n in dual.nontrivial]
        values, blocks, a0, rs, x, modes = _case_batch(theorem, variant, dual, rng, count, sp, tight)
        lhs, contrib, constraint, bound = _evaluate(theorem, variant, dual, blocks, a0, rs, x, modes, sp)
        ok, satisfied, equality = _passes(lhs, constraint, bound, a0)
        margin = np.where(satisfied, 1.0 - lhs, np.inf)
        max_lhs = max(max_lhs, float(np.max(np.where(satisfied, lhs, -np.inf), initial=-np.inf)))

        def detail(i, lhs=lhs, constraint=constraint, contrib=contrib, x=x, modes=modes, sp=sp):
            return VerificationReport(
                float(lhs[i]), float(constraint[i]), bound, 1.0 - float(lhs[i]), False,
                [(n, float(c)) for n, c in zip(dual.nontrivial, contrib[i])],
                f"thm{theorem}-{variant}", modes_all[modes[i]].value, int(x[i]),
            ).as_dict() | {"specs": [str(s) for s in sp]}

        summary.add(margin, ok, detail)
        done += count
    summary.extra.update({"max_lhs": max_lhs, "group": dual.group.label, "variant": variant,
                          "theorem": theorem, "tight": tight})
    return summary


def equality_sweep(theorem: int, variant: str, dual: DualList, trials: int, rng: np.random.Generator) -> SweepSummary:
    """``f = 1`` with arbitrary, unconstrained ``R``: the left side must equal 1."""
    summary = SweepSummary(f"thm{theorem}-{variant}-equality:{dual.group.label}")
    order = dual.group.order
    done = 0
    while done < trials:
        count = min(250, trials - done)
        sp = random_specs(rng, dual, variant)
        values = np.ones((count, order), dtype=complex)
        _, blocks, a0, _, x, modes = _case_batch(theorem, variant, dual, rng, count, sp, tight=False,
                                                 values=values)
        rs = [mf.random_matrices(rng, count, dual[n].dim) * 10 for n in dual.nontrivial]
        lhs, _, constraint, bound = _evaluate(theorem, variant, dual, blocks, a0, rs, x, modes, sp)
        dev = np.abs(lhs - 1.0)
        summary.add(-dev, dev <= 1e-12, lambda i, lhs=lhs: {"lhs": float(lhs[i])})
        summary.extra["max_deviation"] = max(summary.extra.get("max_deviation", 0.0), float(dev.max()))
        done += count
    return summary


def sweep_coeff_bound(dual: DualList, trials: int, rng: np.random.Generator, *,
                      negative_control: bool = False, tol: float = TOL) -> SweepSummary:
    """Check ``s_i(X_n) <= 2 (1 - a0)`` on random admissible functions.

    With ``negative_control`` a mean-preserving spike pushes ``Re f`` above 1
    at one element; such functions are expected to break the bound.
    """
    name = "coeff-bound" + ("-negative" if negative_control else "") + f":{dual.group.label}"
    summary = SweepSummary(name)
    order = dual.group.order
    done = 0
    while done < trials:
        count = min(2000, trials - done)
        values = re_bounded_values(rng, count, order)
        if negative_control:
            at = rng.integers(0, order, count)
            spike = -np.ones((count, order))
            spike[np.arange(count), at] += order
            values = values + (1.0 + 4.0 * rng.random(count))[:, None] * spike
        blocks = symmetrized_blocks(values, dual)
        a0 = np.mean(values, axis=-1).real
        bound = 2 * (1 - a0)
        worst = np.full(count, np.inf)
        for n in dual.nontrivial:
            worst = np.minimum(worst, bound - mf.singular_values(blocks[n])[:, 0])
        ok = worst >= -tol
        summary.add(worst, ok, lambda i, worst=worst, a0=a0: {"a0": float(a0[i]), "margin": float(worst[i])})
        done += count
    return summary


def sharpness_probe(theorem: int, variant: str, group, trials: int, rng: np.random.Generator | None = None,
                    *, dual: DualList | None = None) -> dict:
    """Largest left side seen at constraint equality, and the smallest factor by
    which ``R`` must be inflated before the inequality breaks.

    Every summand is homogeneous of degree one in ``R``, so the factor is
    ``(1 - a0) / (lhs - a0)`` per case.  ``group="circle"`` probes the
    Moebius family through the circle reduction instead.
    """
    if trials <= 0:
        return {"trials": 0, "max_lhs": None, "inflation_factor": None, "cases": []}
    rng = rng or np.random.default_rng(0)
    if isinstance(group, str) and group == "circle":
        from .circle import thm1_circle_reduction
        a_grid = 1 - np.logspace(0, -6, trials)
        lhs = np.array([thm1_circle_reduction(a, 1 / 3).lhs for a in a_grid])
        infl = (1 - a_grid) / np.maximum(lhs - a_grid, 1e-300)
        return {"trials": trials, "group": "circle", "max_lhs": float(lhs.max()),
                "inflation_factor": float(infl.min()), "a_at_max": float(a_grid[np.argmax(lhs)]),
                "cases": [{"a": float(a), "lhs": float(v)} for a, v in zip(a_grid[-5:], lhs[-5:])]}
    from .groups import build_group, dual as make_dual
    g = build_group(group) if not isinstance(group, GroupTable) else group
    dual = dual or make_dual(g)
    best_lhs, best_infl = -math.inf, math.inf
    done = 0
    while done < trials:
        count = min(250, trials - done)
        sp = random_specs(rng, dual, variant)
        _, blocks, a0, rs, x, modes = _case_batch(theorem, variant, dual, rng, count, sp)
        lhs, _, _, _ = _evaluate(theorem, variant, dual, blocks, a0, rs, x, modes, sp)
        best_lhs = max(best_lhs, float(lhs.max()))
        gain = lhs - a0
        infl = np.where(gain > 0, (1 - a0) / np.where(gain > 0, gain, 1.0), np.inf)
        best_infl = min(best_infl, float(infl.min()))
        done += count
    return {"trials": trials, "group": dual.group.label, "theorem": theorem, "variant": variant,
            "max_lhs": best_lhs, "inflation_factor": best_infl}
