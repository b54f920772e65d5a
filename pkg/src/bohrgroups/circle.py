"""The unit circle as a compact abelian group: classical Bohr radii.

The circle dual is enumerated as ``pi_{2k-1}(theta) = exp(i k theta)`` and
``pi_{2k}(theta) = exp(-i k theta)`` (k >= 1), so the contragredient of
``pi_{2k-1}`` is ``pi_{2k}``.  For an analytic function only odd positions
carry coefficients, and with ``R_{2k-1} = z**k``, ``R_{2k} = 0`` the group
inequality collapses to the power-series Bohr sum.  ``thm1_circle_reduction``
builds exactly that data and evaluates it with the finite-group machinery
of :mod:`bohrgroups.bohr`.

Also here: the Moebius and ``a0 = 0`` extremal families, a bisection for
the Bohr radius, and the ``f_mu`` family showing the contragredient term
cannot be dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import bohr
from .bohr import IrrepSpec, VerificationReport
from .matfun import DotMode, GaugeSpec, GmfSpec, NormSpec
from .reports import CheckReport

__all__ = [
    "AnalyticCoefficients", "MuFunction", "CoefficientFamily", "RadiusResult", "NonBracketingError",
    "moebius_coeffs", "moebius_a0zero_coeffs", "bohr_sum", "bohr_radius", "family",
    "thm1_circle_reduction", "remark3_lhs", "remark3_series", "mu_function_check",
    "h_closed_form", "max_modulus_on_grid",
]

TRUNCATION = 200
R_CAP = 0.95
GRID = 4096
BOUND_TOL = 1e-6


class NonBracketingError(ValueError):
    """The family never exceeds 1 below the r-cap, so there is nothing to bisect."""


@dataclass(frozen=True)
class AnalyticCoefficients:
    """Coefficients ``a_0, ..., a_N`` of a truncated power series."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("need a finite, nonempty 1-d coefficient list")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def evaluate(self, z):
        """Horner evaluation of the truncated series."""
        return np.polynomial.polynomial.polyval(z, self.coeffs)


def _check_a(a):
    a = np.asarray(a, dtype=float)
    if np.any((a < 0) | (a >= 1)):
        raise ValueError("Moebius parameter must lie in [0, 1)")
    return a


def moebius_coeffs(a: float, N: int = TRUNCATION) -> AnalyticCoefficients:
    """Power series of ``(a - z) / (1 - a z)``: ``a_0 = a``, ``a_n = -(1 - a**2) a**(n-1)``."""
    a = float(_check_a(a))
    n = np.arange(1, N + 1)
    return AnalyticCoefficients(np.concatenate([[a], -(1 - a * a) * a ** (n - 1)]))


def moebius_a0zero_coeffs(a: float, N: int = TRUNCATION) -> AnalyticCoefficients:
    """Power series of ``z (a - z) / (1 - a z)``, which vanishes at the origin."""
    shifted = moebius_coeffs(a, N - 1).coeffs
    return AnalyticCoefficients(np.concatenate([[0.0], shifted]))


def bohr_sum(c: AnalyticCoefficients, r: float) -> float:
    """``sum_n |a_n| r**n`` over the stored coefficients."""
    n = np.arange(c.coeffs.size)
    return float(np.sum(np.abs(c.coeffs) * float(r) ** n))


def h_closed_form(a, r):
    """``r (a + (1 - a**2) r / (1 - a r))``: the Bohr sum of ``z (a - z)/(1 - a z)``."""
    return r * (a + (1 - a * a) * r / (1 - a * r))


def max_modulus_on_grid(fun: Callable, grid: int = GRID) -> float:
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    return float(np.max(np.abs(fun(z))))


@dataclass(frozen=True)
class CoefficientFamily:
    """A one-parameter family of bounded analytic functions.

    ``coeffs(params, N)`` returns an array ``(len(params), N + 1)`` of
    coefficient moduli; ``function(a)`` is the closed-form function used to
    certify boundedness on the circle.
    """

    name: str
    coeffs: Callable
    function: Callable
    params: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def certify(self, grid: int = GRID, tol: float = BOUND_TOL, samples: int = 9) -> float:
        """Largest modulus of sampled members on a ``grid``-point circle; raises if above ``1 + tol``."""
        picks = self.params[np.linspace(0, self.params.size - 1, min(samples, self.params.size)).astype(int)]
        worst = max(max_modulus_on_grid(self.function(a), grid) for a in picks)
        if worst > 1 + tol:
            raise ValueError(f"family {self.name} is not bounded by 1 on the circle (max {worst:.6g})")
        return worst


def _moebius_moduli(a, N):
    a = np.asarray(a, dtype=float)[:, None]
    n = np.arange(1, N + 1)[None, :]
    return np.concatenate([a, (1 - a * a) * a ** (n - 1)], axis=1)


def _a0zero_moduli(a, N):
    return np.concatenate([np.zeros((np.size(a), 1)), _moebius_moduli(a, N - 1)], axis=1)


def _param_grid():
    return np.unique(np.concatenate([np.linspace(0, 1, 2001)[:-1], 1 - np.logspace(-1, -9, 1500)]))


def family(name: str) -> CoefficientFamily:
    """Built-in families: ``moebius``, ``moebius-a0zero`` and ``zero``."""
    if name == "moebius":
        return CoefficientFamily(name, _moebius_moduli, lambda a: (lambda z: (a - z) / (1 - a * z)),
                                 _param_grid())
    if name in ("moebius-a0zero", "a0zero"):
        return CoefficientFamily("moebius-a0zero", _a0zero_moduli,
                                 lambda a: (lambda z: z * (a - z) / (1 - a * z)), _param_grid())
    if name == "zero":
        return CoefficientFamily(name, lambda a, N: np.zeros((np.size(a), N + 1)),
                                 lambda a: (lambda z: 0 * z), np.zeros(1))
    raise ValueError(f"unknown family {name!r} (moebius, moebius-a0zero, zero)")


def _family_sup(fam: CoefficientFamily, r: float, N: int) -> tuple[float, float]:
    """Largest Bohr sum over the family at radius ``r``: grid search, then a bounded refinement."""
    powers = r ** np.arange(N + 1)
    sums = fam.coeffs(fam.params, N) @ powers
    k = int(np.argmax(sums))
    best, arg = float(sums[k]), float(fam.params[k])
    if fam.params.size > 2:
        lo = fam.params[max(k - 1, 0)]
        hi = fam.params[min(k + 1, fam.params.size - 1)]
        if hi > lo:
            res = minimize_scalar(lambda a: -float(fam.coeffs(np.array([a]), N)[0] @ powers),
                                  bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
            if -res.fun > best:
                best, arg = float(-res.fun), float(res.x)
    return best, arg


@dataclass
class RadiusResult:
    radius: float
    tol: float
    family: str
    saturated: bool
    iterations: int
    sup_at_radius: float
    extremal_param: float
    max_modulus: float

    def as_dict(self):
        return dict(self.__dict__)


def bohr_radius(fam, tol: float = 1e-4, *, r_cap: float = R_CAP, N: int = TRUNCATION,
                saturate_ok: bool = True) -> RadiusResult:
    """Bisection for the largest ``r`` with ``sup_family sum |a_n| r**n <= 1``.

    ``fam`` is a family name or a ``CoefficientFamily``.  If even ``r_cap``
    keeps the sum at or below 1 the search saturates there and the result is
    flagged ``saturated`` (``NonBracketingError`` when ``saturate_ok`` is false).
    """
    fam = family(fam) if isinstance(fam, str) else fam
    max_mod = fam.certify()
    exceeds = lambda r: _family_sup(fam, r, N)[0] > 1 + 1e-13  # noqa: E731
    lo, hi, it = 0.0, float(r_cap), 0
    if not exceeds(hi):
        if not saturate_ok:
            raise NonBracketingError(f"family {fam.name} stays <= 1 up to r={r_cap}")
        s, arg = _family_sup(fam, hi, N)
        return RadiusResult(hi, tol, fam.name, True, 0, s, arg, max_mod)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exceeds(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    s, arg = _family_sup(fam, lo, N)
    return RadiusResult(0.5 * (lo + hi), tol, fam.name, False, it, s, arg, max_mod)


# ---------------------------------------------------------------------------
# the circle as a group


def _circle_data(coeffs: np.ndarray, r: float, theta):
    """Dual-position data for the reduction, stacked over a leading trial axis.

    ``coeffs`` is ``(T, N + 1)``.  Returns per-position symmetrized blocks,
    ``pi_n(theta)`` and ``R_n``, each of shape ``(T, 1, 1)``.
    """
    T, n1 = coeffs.shape
    N = n1 - 1
    theta = np.broadcast_to(np.asarray(theta, dtype=float), (T,))
    # plain coefficients f^(pi_n): analytic, so only odd positions are nonzero
    plain = {}
    for k in range(1, N + 1):
        plain[2 * k - 1] = coeffs[:, k]
        plain[2 * k] = np.zeros(T, dtype=complex)
    conj_of = {**{2 * k - 1: 2 * k for k in range(1, N + 1)}, **{2 * k: 2 * k - 1 for k in range(1, N + 1)}}
    blocks, pis, rs = [], [], []
    for n in range(1, 2 * N + 1):
        k = (n + 1) // 2
        sign = 1 if n % 2 else -1
        blocks.append((plain[n] + np.conj(plain[conj_of[n]]))[:, None, None])
        pis.append(np.exp(1j * sign * k * theta)[:, None, None])
        rk = r ** k if n % 2 else 0.0
        rs.append(np.full((T, 1, 1), rk, dtype=complex))
    return blocks, pis, rs


def _scalar_specs(variant, count):
    if variant == "i":
        spec = IrrepSpec(norm=NormSpec("schatten", 2.0))
    elif variant == "ii":
        spec = IrrepSpec(gauge=GaugeSpec("lp", 1.0))
    else:
        spec = IrrepSpec(norm=NormSpec("schatten", 2.0), gmf=GmfSpec.identity_only(1))
    return [spec] * count


def circle_reduction_batch(coeffs, r: float, theta, variant: str = "i"):
    """Stacked version of :func:`thm1_circle_reduction`; returns ``(lhs, constraint)``."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    blocks, pis, rs = _circle_data(coeffs, r, theta)
    specs = _scalar_specs(variant, len(blocks))
    dims = [1] * len(blocks)
    a0 = coeffs[:, 0].real
    lhs, _ = bohr.bohr_lhs(1, variant, a0, blocks, pis, rs, DotMode.MATRIX, specs, dims)
    constraint, _ = bohr.bohr_constraint(1, variant, a0, [x[:1] for x in rs], specs, dims)
    return lhs, np.broadcast_to(constraint[:1], lhs.shape)


def thm1_circle_reduction(a: float, r: float, theta: float = 0.0, *, N: int = TRUNCATION,
                          variant: str = "i") -> VerificationReport:
    """The symmetrized-coefficient inequality on the circle for the Moebius function at ``a``.

    ``R_{2k-1} = r**k`` and ``R_{2k} = 0``, so the budget is
    ``sum_k r**k = r / (1 - r)`` (up to the truncation) and reaches ``1/2`` at ``r = 1/3``.
    """
    _check_a(a)
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    c = moebius_coeffs(a, N).coeffs
    lhs, constraint = circle_reduction_batch(c[None, :], r, theta, variant)
    lhs, constraint = float(lhs[0]), float(constraint[0])
    ok, satisfied, equality = bohr._passes(lhs, constraint, 0.5, a)
    return VerificationReport(
        lhs=lhs, constraint_value=constraint, constraint_bound=0.5, margin=1 - lhs, passed=bool(ok),
        per_irrep=[], variant=f"thm1-{variant}", dot_mode=DotMode.MATRIX.value, x=0,
        constraint_satisfied=bool(satisfied), equality_case=bool(equality),
    )


# ---------------------------------------------------------------------------
# the f_mu family


@dataclass(frozen=True)
class MuFunction:
    """``cos(mu) + i sin(mu) sum_{0 < |n| <= M} exp(i n theta) / (4 n**2)``."""

    mu: float
    truncation: int = TRUNCATION

    def __post_init__(self):
        if not 0 < self.mu < math.pi / 2:
            raise ValueError("mu must lie in (0, pi/2)")
        if self.truncation < 1:
            raise ValueError("truncation must be positive")

    def coefficient(self, n):
        n = np.asarray(n)
        safe = np.where(n == 0, 1, n)
        inside = (np.abs(n) <= self.truncation) & (n != 0)
        return np.where(n == 0, math.cos(self.mu), np.where(inside, 1j * math.sin(self.mu) / (4 * safe ** 2), 0))

    def evaluate(self, theta):
        n = np.arange(1, self.truncation + 1)
        series = np.cos(np.multiply.outer(theta, n)) @ (1 / (2 * n ** 2))
        return math.cos(self.mu) + 1j * math.sin(self.mu) * series

    def tail_bound(self) -> float:
        """``sin(mu) sum_{|n| > M} 1 / (4 n**2)``: sup-distance to the untruncated function."""
        n = np.arange(1, self.truncation + 1)
        tail = max(math.pi ** 2 / 6 - float(np.sum(1.0 / n[::-1] ** 2)), 0.0) / 2
        return math.sin(self.mu) * tail


def remark3_lhs(mu, n_tilde: int = 1):
    """``(1 / (4 n**2)) sin(mu) / (1 - cos(mu))``, evaluated as ``cot(mu / 2) / (4 n**2)``.

    Defined for ``0 < mu <= pi/2`` and nonzero integer ``n_tilde``.
    """
    mu = np.asarray(mu, dtype=float)
    if int(n_tilde) != n_tilde or n_tilde == 0:
        raise ValueError("n_tilde must be a nonzero integer")
    if np.any(~((mu > 0) & (mu <= math.pi / 2))):
        raise ValueError("mu must lie in (0, pi/2]")
    out = 1.0 / (np.tan(mu / 2) * 4 * n_tilde ** 2)
    return float(out) if out.ndim == 0 else out


def remark3_series(mu_min: float = 1e-4, steps: int = 50, n_tilde: int = 1, r0: float = 0.5):
    """Rows ``(mu, lhs, bound)`` on a log grid from ``mu_min`` to ``pi/2``.

    ``bound`` is ``1 / |z_n|`` for the largest single weight ``|z_n| = r0``
    the dropped-term inequality would allow.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    mus = np.geomspace(mu_min, math.pi / 2, steps)
    lhs = remark3_lhs(mus, n_tilde)
    return [(float(m), float(v), 1.0 / r0) for m, v in zip(mus, lhs)]


def mu_function_check(mf: MuFunction, grid: int = GRID, *, tail_tol: float = BOUND_TOL) -> CheckReport:
    """Sample ``f_mu`` on a circle grid and re-derive its coefficients by DFT.

    Passes when ``max |f_mu| < 1`` on the grid, ``a_0 = cos(mu) > 0`` and the
    DFT coefficients match the formula to 1e-6.  The untruncated function
    obeys ``|f_mu|**2 <= cos(mu)**2 + sin(mu)**2 (pi**2 / 12)**2 < 1``, which
    is reported as ``analytic_bound``.  A truncation whose tail bound exceeds
    ``tail_tol`` is flagged (``truncation_flagged``) without failing the check.
    """
    if grid <= 2 * mf.truncation:
        raise ValueError("grid must exceed 2 * truncation to avoid aliasing")
    theta = 2 * np.pi * np.arange(grid) / grid
    vals = mf.evaluate(theta)
    dft = np.fft.fft(vals) / grid
    freqs = np.fft.fftfreq(grid, d=1.0 / grid).round().astype(int)
    residual = float(np.max(np.abs(dft - mf.coefficient(freqs))))
    tail = mf.tail_bound()
    top = float(np.max(np.abs(vals)))
    a0 = float(math.cos(mf.mu))
    analytic = math.sqrt(a0 ** 2 + math.sin(mf.mu) ** 2 * (math.pi ** 2 / 12) ** 2)
    passed = top < 1 and analytic < 1 and a0 > 0 and residual <= 1e-6
    return CheckReport(
        f"mu-function:{mf.mu:.6g}", lhs=top, rhs=1.0, margin=1 - top, passed=passed,
        details={"max_modulus": top, "analytic_bound": analytic, "tail_bound": tail,
                 "truncation_flagged": tail > tail_tol, "a0": a0, "coefficient_residual": residual,
                 "truncation": mf.truncation, "grid": grid},
    )
