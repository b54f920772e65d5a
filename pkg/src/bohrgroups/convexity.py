"""p-uniform complex convexity of matrix spaces and the operator-valued Bohr inequality.

A normed space is p-uniformly C-convex when some ``lambda > 0`` satisfies
``(||x||**p + lambda ||y||**p)**(1/p) <= max_theta ||x + exp(i theta) y||``.
For scalars and ``p = 2`` the best constant is 1; for ``d x d`` matrices
under the operator norm (``d >= 2``) the pair ``diag(1, 0)``, ``diag(0, 1)``
forces ``lambda = 0``.

On a finite abelian group the class ``F_inf`` is relative to an index set
``Lambda`` of nontrivial characters: ``f`` belongs when the transform of
``x -> f(x)^*`` vanishes on ``Lambda``.  ``Lambda`` defaults to the
"analytic half" of the dual (positions ``1 .. floor((N-1)/2)`` on
``cyclic:N``), which is disjoint from its conjugate; with the full nontrivial
dual the class would contain constants only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import transform_values
from .groups import DualList, GroupTable, build_group, dual as make_dual
from .reports import SweepSummary, to_jsonable

__all__ = [
    "ConvexityEstimate", "OperatorFunction", "SupportError",
    "spectral_norm", "max_theta_norm", "estimate_lambda", "default_sampler", "canonical_pair",
    "analytic_half", "gen_Finfty", "finfty_residual", "thm3_forward_check", "thm3_converse_check",
    "scalar_lambda",
]

MEMBERSHIP_TOL = 1e-10
GOLDEN = (math.sqrt(5) - 1) / 2


class SupportError(ValueError):
    """Support of an ``F_inf`` function contains a character together with its conjugate."""


def scalar_lambda(p: float) -> float | None:
    """Best constant for the complex scalars; known in closed form only for ``p = 2``."""
    return 1.0 if p == 2 else None


def spectral_norm(a):
    """Operator norm on stacked matrices (closed form for 1x1 and 2x2)."""
    a = np.asarray(a)
    d = a.shape[-1]
    if d == 1:
        return np.abs(a[..., 0, 0])
    if d == 2:
        fro2 = np.sum(np.abs(a) ** 2, axis=(-2, -1))
        det = a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
        disc = np.sqrt(np.maximum(fro2 ** 2 - 4 * np.abs(det) ** 2, 0.0))
        return np.sqrt((fro2 + disc) / 2)
    return np.linalg.norm(a, ord=2, axis=(-2, -1))


def max_theta_norm(x, y, grid: int = 256, *, refine_steps: int = 60):
    """``max_theta ||x + exp(i theta) y||`` in the operator norm.

    A uniform ``grid`` over ``[0, 2 pi)`` locates the best cell, then a
    golden-section search on the neighbouring cells refines it.  Stacked
    inputs ``(..., d, d)`` are handled elementwise; scalars are 1x1.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.ndim < 2:
        x, y = x[..., None, None], y[..., None, None]
    if x.shape != y.shape:
        raise ValueError("x and y must have equal shapes")
    thetas = 2 * np.pi * np.arange(grid) / grid
    phases = np.exp(1j * thetas)
    vals = spectral_norm(x[..., None, :, :] + phases[:, None, None] * y[..., None, :, :])
    k = np.argmax(vals, axis=-1)
    best = np.take_along_axis(vals, k[..., None], axis=-1)[..., 0]
    h = 2 * np.pi / grid
    lo, hi = thetas[k] - h, thetas[k] + h

    def f(t):
        return spectral_norm(x + np.exp(1j * t)[..., None, None] * y)

    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(refine_steps):
        left = fc > fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        c_new = hi - GOLDEN * (hi - lo)
        d_new = lo + GOLDEN * (hi - lo)
        c, d = np.where(left, c_new, d), np.where(left, c, d_new)
        fc, fd = np.where(left, f(c), fd), np.where(left, fc, f(d))
    out = np.maximum(best, np.maximum(fc, fd))
    return float(out) if out.ndim == 0 else out


def canonical_pair(d: int):
    """``x = E_11``, ``y = I - E_11``: ``||x + e^{i theta} y|| = 1`` for all ``theta``."""
    x = np.zeros((d, d), dtype=complex)
    x[0, 0] = 1
    return x, np.eye(d, dtype=complex) - x


@dataclass
class ConvexityEstimate:
    p: float
    d: int
    lambda_hat: float
    worst_pair: tuple
    theta_resolution: int
    trials: int
    raw_minimum: float = math.nan

    def as_dict(self):
        return to_jsonable({"p": self.p, "d": self.d, "lambda_hat": self.lambda_hat,
                            "raw_minimum": self.raw_minimum, "theta_resolution": self.theta_resolution,
                            "trials": self.trials, "worst_pair": [np.asarray(m) for m in self.worst_pair]})


def default_sampler(rng: np.random.Generator, count: int, d: int):
    """Pairs ``(x, y)`` with ``y != 0`` and ``||x|| / ||y||`` spread down to 0.

    Directions are complex Gaussian; the ratio is ``10**(-s)`` with ``s``
    uniform on ``[0, 12]`` in half the draws (shrinking ``x``) and ``x = 0``
    in 1% of them.
    """
    shape = (count, d, d)
    x = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    y = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    x /= spectral_norm(x)[:, None, None]
    y /= spectral_norm(y)[:, None, None]
    ratio = np.where(rng.random(count) < 0.5, 10.0 ** (-12 * rng.random(count)),
                     np.exp(2 * rng.standard_normal(count)))
    ratio[rng.random(count) < 0.01] = 0.0
    return x * ratio[:, None, None], y


def estimate_lambda(p: float, d: int, trials: int, sampler=None, *, seed: int = 0, grid: int = 256,
                    include_canonical: bool = True, block: int = 5000) -> ConvexityEstimate:
    """Smallest observed ``(M**p - ||x||**p) / ||y||**p`` with ``M = max_theta_norm(x, y)``.

    The canonical pair is always included for ``d >= 2`` (it yields 0 in
    the operator norm).  The estimate is clamped at 0.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    sampler = sampler or default_sampler
    rng = np.random.default_rng(seed)
    best, pair = math.inf, None
    if include_canonical and d >= 2:
        x, y = canonical_pair(d)
        m = max_theta_norm(x, y, grid)
        best, pair = (m ** p - spectral_norm(x) ** p) / spectral_norm(y) ** p, (x, y)
    done = 0
    while done < trials:
        count = min(block, trials - done)
        x, y = sampler(rng, count, d)
        ny = spectral_norm(y)
        keep = ny > 0
        x, y, ny = x[keep], y[keep], ny[keep]
        if x.shape[0]:
            m = max_theta_norm(x, y, grid)
            val = (m ** p - spectral_norm(x) ** p) / ny ** p
            i = int(np.argmin(val))
            if val[i] < best:
                best, pair = float(val[i]), (x[i], y[i])
        done += count
    if pair is None:
        return ConvexityEstimate(p, d, math.nan, (), grid, trials)
    return ConvexityEstimate(p, d, max(best, 0.0), pair, grid, trials, raw_minimum=best)


# ---------------------------------------------------------------------------
# F_inf on finite abelian groups


@dataclass(frozen=True, eq=False)
class OperatorFunction:
    """``d x d`` matrix values on an abelian group, with the ``Lambda`` used for membership."""

    group: GroupTable
    values: np.ndarray
    lam: tuple = ()

    def __post_init__(self):
        if not self.group.is_abelian:
            raise ValueError("operator functions here live on abelian groups")
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 3 or v.shape[0] != self.group.order or v.shape[1] != v.shape[2]:
            raise ValueError("values must have shape (|G|, d, d)")
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def sup_norm(self) -> float:
        """Exact ``L_inf`` norm: the largest operator norm over the elements."""
        return float(np.max(spectral_norm(self.values)))


def analytic_half(dual: DualList) -> tuple:
    """Nontrivial positions ``n`` with ``n < conj(n)``: one character from each conjugate pair."""
    return tuple(n for n in dual.nontrivial if n < dual.conjugate_index[n])


def _check_support(dual, support):
    support = tuple(sorted(set(int(n) for n in support)))
    if any(n < 0 or n >= len(dual) for n in support):
        raise SupportError(f"support {support} outside the dual (size {len(dual)})")
    for n in support:
        if n != 0 and dual.conjugate_index[n] in support:
            raise SupportError(f"support contains position {n} and its conjugate {dual.conjugate_index[n]}")
    return support


def finfty_residual(values, dual: DualList, lam) -> np.ndarray:
    """Largest entry of the transform of ``x -> f(x)^*`` over positions in ``lam`` (stacked)."""
    adj = np.conj(np.swapaxes(np.asarray(values), -1, -2))
    coeffs = transform_values(adj, dual, matrix=True)
    out = np.zeros(adj.shape[:-3])
    for n in lam:
        out = np.maximum(out, np.max(np.abs(coeffs[n]), axis=(-2, -1)))
    return out


def _combine(dual, support, amps):
    """``sum_{n in support} A_n pi_n(x)`` for stacked amplitudes ``(T, |support|, d, d)``."""
    chars = np.stack([dual[n].matrices[:, 0, 0] for n in support])  # (S, |G|)
    return np.einsum("tsab,sx->txab", amps, chars)


def gen_Finfty(group, d: int, support, seed=0, *, lam=None, count: int | None = None) -> OperatorFunction:
    """Random ``f = sum_{n in support} A_n pi_n`` scaled to ``||f||_inf <= 1``, membership re-verified.

    ``lam`` defaults to the nontrivial part of ``support``.  With ``count``
    a list of that many functions is returned.

    Raises
    ------
    SupportError
        If the support contains a conjugate pair.
    ArithmeticError
        If the transform of ``f^*`` does not vanish on ``lam`` to 1e-10.
    """
    g = build_group(group) if isinstance(group, str) else group
    if not g.is_abelian:
        raise ValueError("F_inf functions are generated on abelian groups only")
    du = make_dual(g)
    support = _check_support(du, support)
    lam = tuple(n for n in support if n != 0) if lam is None else tuple(lam)
    rng = np.random.default_rng(seed)
    vals = _finfty_values(rng, du, support, d, count or 1)
    res = finfty_residual(vals, du, lam)
    if np.max(res, initial=0.0) > MEMBERSHIP_TOL:
        raise ArithmeticError(f"membership residual {np.max(res):.3e} exceeds {MEMBERSHIP_TOL}")
    fns = [OperatorFunction(g, v, lam) for v in vals]
    return fns if count else fns[0]


def _finfty_values(rng, du, support, d, count):
    amps = rng.standard_normal((count, len(support), d, d)) + 1j * rng.standard_normal((count, len(support), d, d))
    amps *= np.exp(1.5 * rng.standard_normal((count, len(support), 1, 1)))
    vals = _combine(du, support, amps)
    sup = np.max(spectral_norm(vals), axis=1)
    target = np.where(rng.random(count) < 0.5, 1.0, rng.random(count))
    vals *= (target / np.where(sup > 0, sup, 1.0))[:, None, None, None]
    return vals


def thm3_forward_check(group, d: int = 1, trials: int = 1000, *, p: float = 2.0, r0: float | None = None,
                       seed: int = 0, grid: int = 256, tol: float = 1e-9) -> dict:
    """``f = A + pi_1 B``: Fourier extraction, the supremum chain and the certified ``r0``.

    For each pair the largest ``r`` with ``(||A||**p + r ||B||**p)**(1/p) <= ||f||_inf`` is
    recorded; their minimum is the certified ``r0``, which is also a valid
    convexity constant because ``sup over the group <= max over the circle``.
    When ``r0`` is given the inequality is asserted at that value.
    """
    g = build_group(group) if isinstance(group, str) else group
    du = make_dual(g)
    if not g.is_abelian or len(du) < 2:
        raise ValueError("need an abelian group with a nontrivial character")
    rng = np.random.default_rng(seed)
    shape = (trials, d, d)
    A = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.exp(rng.standard_normal(trials))[:, None, None]
    B = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.exp(rng.standard_normal(trials))[:, None, None]
    A[rng.random(trials) < 0.05] = 0
    B[rng.random(trials) < 0.05] = 0
    if d >= 2 and trials:
        A[0], B[0] = canonical_pair(d)
    chi = du[1].matrices[:, 0, 0]
    vals = A[:, None] + chi[None, :, None, None] * B[:, None]
    coeffs = transform_values(vals, du, matrix=True)
    extraction = np.maximum(np.max(np.abs(coeffs[0] - A), axis=(1, 2)), np.max(np.abs(coeffs[1] - B), axis=(1, 2)))
    for n in du.nontrivial:
        if n != 1:
            extraction = np.maximum(extraction, np.max(np.abs(coeffs[n]), axis=(1, 2)))
    sup_group = np.max(spectral_norm(vals), axis=1)
    sup_circle = max_theta_norm(A, B, grid)
    na, nb = spectral_norm(A), spectral_norm(B)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_pair = np.where(nb > 0, (sup_group ** p - na ** p) / nb ** p, np.inf)
    chain_gap = sup_group - sup_circle
    summary = SweepSummary(f"thm3-forward:{g.label}:d{d}")
    margin = np.minimum(tol - chain_gap, MEMBERSHIP_TOL - extraction)
    ok = (chain_gap <= tol) & (extraction <= MEMBERSHIP_TOL)
    if r0 is not None:
        lhs = (na ** p + r0 * nb ** p) ** (1 / p)
        margin = np.minimum(margin, sup_group - lhs)
        ok &= lhs <= sup_group + tol
    summary.add(margin, ok, lambda i: {"A": A[i], "B": B[i], "sup_group": float(sup_group[i])})
    r_cert = float(np.min(r_pair)) if trials else math.inf
    out = summary.as_dict()
    out.update({"p": p, "d": d, "r0": r0, "certified_r0": max(r_cert, 0.0), "raw_certified_r0": r_cert,
                "max_extraction_error": float(np.max(extraction, initial=0.0)),
                "lambda_lower_bound": max(r_cert, 0.0), "lambda_positive": r_cert > tol, "line": summary.line()})
    return out


def thm3_converse_check(group, d: int = 1, p: float = 2.0, trials: int = 1000, *, r: float | None = None,
                        seed: int = 0, lam=None, tol: float = 1e-9) -> dict:
    """Coefficient-weighted inequality for random ``F_inf`` functions (scalar case asserted).

    Checks ``(|f^(pi_0)|**p + sum_{n in Lambda} r**n |f^(pi_n)|**p)**(1/p) <= ||f||_inf``
    with ``r = lambda / (2 + lambda)`` and ``n`` the position in the dual
    enumeration, together with ``|f^(pi_n)|**p <= (2 / lambda) (1 - |f^(pi_0)|**p)``
    for ``||f||_inf = 1``.  For ``d >= 2`` the radius is not asserted; the
    report carries the estimated convexity constant instead.
    """
    g = build_group(group) if isinstance(group, str) else group
    du = make_dual(g)
    lam = analytic_half(du) if lam is None else tuple(lam)
    support = _check_support(du, (0,) + tuple(lam))
    summary = SweepSummary(f"thm3-converse:{g.label}:d{d}")
    out_extra = {"lambda_positions": list(lam), "ordering": "dual enumeration index", "p": p, "d": d}
    if d >= 2:
        est = estimate_lambda(p, d, 2000, seed=seed)
        out = summary.as_dict()
        out.update(out_extra | {"skipped": True, "lambda_hat": est.lambda_hat, "line": summary.line()})
        return out
    lam_val = scalar_lambda(p)
    if lam_val is None:
        raise ValueError("the scalar convexity constant is only known for p = 2")
    r = lam_val / (2 + lam_val) if r is None else r
    rng = np.random.default_rng(seed)
    vals = _finfty_values(rng, du, support, 1, trials)
    if trials:
        vals[0] = 0.5  # a constant member
        vals[min(1, trials - 1)] = du[lam[0]].matrices[:, :, :] if lam else 1.0
    membership = finfty_residual(vals, du, lam)
    coeffs = transform_values(vals, du, matrix=True)
    c0 = np.abs(coeffs[0][:, 0, 0])
    sup = np.max(np.abs(vals[..., 0, 0]), axis=1)
    weighted = c0 ** p + sum(r ** n * np.abs(coeffs[n][:, 0, 0]) ** p for n in lam)
    lhs = weighted ** (1 / p)
    # coefficient bound after normalizing to ||f||_inf = 1
    scale = np.where(sup > 0, sup, 1.0)
    cb_margin = np.full(trials, np.inf)
    for n in lam:
        an = np.abs(coeffs[n][:, 0, 0]) / scale
        cb_margin = np.minimum(cb_margin, (2 / lam_val) * (1 - (c0 / scale) ** p) - an ** p)
    margin = np.minimum(sup - lhs, np.minimum(cb_margin, MEMBERSHIP_TOL - membership))
    ok = (lhs <= sup + tol) & (cb_margin >= -tol) & (membership <= MEMBERSHIP_TOL)
    summary.add(margin, ok, lambda i: {"lhs": float(lhs[i]), "sup": float(sup[i]),
                                      "coefficient_margin": float(cb_margin[i])})
    out = summary.as_dict()
    out.update(out_extra | {"r": r, "lambda": lam_val, "max_membership_residual": float(np.max(membership, initial=0.0)),
                            "max_ratio": float(np.max(lhs / np.where(sup > 0, sup, 1.0), initial=0.0)),
                            "skipped": False, "line": summary.line()})
    return out
