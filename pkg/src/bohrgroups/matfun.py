"""Singular values, unitarily invariant norms, symmetric gauge functions and
generalized matrix functions, with randomized oracles for the classical
inequalities that the Bohr-type estimates rest on.

All numerical routines broadcast over leading batch axes: a stack of
matrices of shape ``(..., n, n)`` yields results of shape ``(...)``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .reports import CheckReport, SweepSummary

__all__ = [
    "singular_values", "NormSpec", "uinorm", "norm_family", "parse_norm",
    "GaugeSpec", "gauge", "gauge_family", "parse_gauge",
    "GmfSpec", "gmf", "gmf_family", "parse_gmf",
    "DotMode", "dot3",
    "random_unitary", "random_matrices",
    "check_lemma1", "lemma1_margins", "check_thmB", "check_thmC", "check_thmD", "check_thmE",
    "sweep_lemma1", "sweep_thmB", "sweep_thmC", "sweep_thmD", "sweep_thmE",
    "E11",
]

REL_TOL = 1e-9


def _scaled_tol(scale, tol=REL_TOL):
    return tol * np.maximum(1.0, np.abs(scale))


# ---------------------------------------------------------------------------
# singular values and unitarily invariant norms


def singular_values(a) -> np.ndarray:
    """Singular values in decreasing order along the last axis.

    Raises
    ------
    ValueError
        For non-square input.
    """
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"singular_values expects square matrices, got shape {a.shape}")
    return np.linalg.svd(a, compute_uv=False)


def E11(n: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[0, 0] = 1.0
    return e


@dataclass(frozen=True)
class NormSpec:
    """Unitarily invariant norm: ``schatten`` (p >= 1, inf allowed),
    ``ky_fan`` (k >= 1), ``spectral``, ``trace`` or ``frobenius``."""

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind == "schatten" and not (self.param is not None and self.param >= 1):
            raise ValueError("schatten norm needs p >= 1")
        if self.kind == "ky_fan" and not (self.param is not None and int(self.param) >= 1):
            raise ValueError("Ky Fan norm needs k >= 1")
        if self.kind not in ("schatten", "ky_fan", "spectral", "trace", "frobenius"):
            raise ValueError(f"unknown norm kind {self.kind!r}")

    def __str__(self):
        if self.kind == "schatten":
            return f"schatten:{'inf' if math.isinf(self.param) else _fmt(self.param)}"
        if self.kind == "ky_fan":
            return f"kyfan:{int(self.param)}"
        return self.kind

    def from_singular_values(self, s):
        s = np.asarray(s)
        if self.kind == "spectral" or (self.kind == "schatten" and math.isinf(self.param)):
            return s[..., 0]
        if self.kind == "trace":
            return s.sum(axis=-1)
        if self.kind == "frobenius":
            return np.sqrt((s ** 2).sum(axis=-1))
        if self.kind == "ky_fan":
            return s[..., : int(self.param)].sum(axis=-1)
        p = self.param
        return (s ** p).sum(axis=-1) ** (1.0 / p)


def _fmt(x):
    return str(int(x)) if float(x).is_integer() else str(x)


def parse_norm(text: str) -> NormSpec:
    """Parse ``schatten:2``, ``schatten:inf``, ``kyfan:3``, ``spectral``, ``trace``, ``frobenius``."""
    parts = text.strip().lower().split(":")
    kind = {"kyfan": "ky_fan", "ky_fan": "ky_fan", "nuclear": "trace", "operator": "spectral"}.get(parts[0], parts[0])
    if kind in ("spectral", "trace", "frobenius") and len(parts) == 1:
        return NormSpec(kind)
    if kind in ("schatten", "ky_fan") and len(parts) == 2:
        return NormSpec(kind, float(parts[1]) if kind == "schatten" else int(parts[1]))
    raise ValueError(f"unknown norm descriptor {text!r}")


def uinorm(a, spec: NormSpec):
    """Unitarily invariant norm of ``a`` computed from its singular values."""
    return spec.from_singular_values(singular_values(a))


def norm_family(n: int) -> list[NormSpec]:
    """Built-in norms on n x n matrices: Schatten p in {1, 1.5, 2, 3, inf},
    every Ky Fan k <= n, spectral, trace and Frobenius."""
    fam = [NormSpec("schatten", p) for p in (1.0, 1.5, 2.0, 3.0, math.inf)]
    fam += [NormSpec("ky_fan", k) for k in range(1, n + 1)]
    fam += [NormSpec("spectral"), NormSpec("trace"), NormSpec("frobenius")]
    return fam


# ---------------------------------------------------------------------------
# symmetric gauge functions


@dataclass(frozen=True)
class GaugeSpec:
    """Symmetric gauge function on the row-major flattened entries:
    ``lp`` (p >= 1, inf allowed) or ``top_k_sum`` (k >= 1)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "lp" and not self.param >= 1:
            raise ValueError("lp gauge needs p >= 1")
        if self.kind == "top_k_sum" and not int(self.param) >= 1:
            raise ValueError("top-k gauge needs k >= 1")
        if self.kind not in ("lp", "top_k_sum"):
            raise ValueError(f"unknown gauge kind {self.kind!r}")

    def __str__(self):
        tag = "lp" if self.kind == "lp" else "topk"
        val = "inf" if math.isinf(self.param) else _fmt(self.param)
        return f"gauge:{tag}:{val}"

    def of_vector(self, v):
        m = np.abs(np.asarray(v))
        if self.kind == "lp":
            if math.isinf(self.param):
                return m.max(axis=-1)
            return (m ** self.param).sum(axis=-1) ** (1.0 / self.param)
        k = int(self.param)
        return -np.sort(-m, axis=-1)[..., :k].sum(axis=-1)


def parse_gauge(text: str) -> GaugeSpec:
    parts = text.strip().lower().split(":")
    if parts[0] == "gauge":
        parts = parts[1:]
    if len(parts) == 2:
        kind = {"lp": "lp", "topk": "top_k_sum", "top_k_sum": "top_k_sum"}.get(parts[0])
        if kind is not None:
            return GaugeSpec(kind, float(parts[1]) if kind == "lp" else int(parts[1]))
    raise ValueError(f"unknown gauge descriptor {text!r}")


def gauge(a, spec: GaugeSpec, *, order: str = "C"):
    """Apply a symmetric gauge function to the flattened entries of ``a``."""
    a = np.asarray(a)
    flat = a.reshape(a.shape[:-2] + (-1,), order="C") if order == "C" else \
        np.swapaxes(a, -1, -2).reshape(a.shape[:-2] + (-1,))
    return spec.of_vector(flat)


def gauge_family() -> list[GaugeSpec]:
    return [GaugeSpec("lp", p) for p in (1.0, 1.5, 2.0, 3.0, math.inf)] + \
        [GaugeSpec("top_k_sum", k) for k in (1, 2, 3)]


# ---------------------------------------------------------------------------
# generalized matrix functions


def _compose(s, t):
    return tuple(s[t[i]] for i in range(len(t)))


@dataclass(frozen=True)
class GmfSpec:
    """Permutation subgroup ``H`` of ``S_n`` with a degree-1 character.

    ``subgroup`` lists 0-based permutations as tuples (``sigma[i]`` is the
    image of ``i``); ``character`` holds the matching unit-modulus values.
    """

    n: int
    subgroup: tuple
    character: tuple
    name: str = ""

    def __post_init__(self):
        perms = [tuple(p) for p in self.subgroup]
        chi = dict(zip(perms, self.character))
        if len(chi) != len(perms) or len(self.character) != len(perms):
            raise ValueError("subgroup entries must be distinct and match the character values")
        for p in perms:
            if sorted(p) != list(range(self.n)):
                raise ValueError(f"{p} is not a permutation of {self.n} points")
            if abs(abs(chi[p]) - 1.0) > 1e-12:
                raise ValueError("character values must have unit modulus")
        for p, q in itertools.product(perms, repeat=2):
            pq = _compose(p, q)
            if pq not in chi:
                raise ValueError("subgroup is not closed under composition")
            if abs(chi[pq] - chi[p] * chi[q]) > 1e-12:
                raise ValueError("character is not multiplicative on the subgroup")

    @property
    def is_trivial_character(self) -> bool:
        return all(abs(c - 1.0) < 1e-12 for c in self.character)

    def __str__(self):
        return self.name or f"gmf:n{self.n}:h{len(self.subgroup)}"

    @classmethod
    def symmetric(cls, n: int, character: str = "sign") -> GmfSpec:
        perms = list(itertools.permutations(range(n)))
        if character == "sign":
            chi = [_perm_sign(p) for p in perms]
        elif character == "trivial":
            chi = [1.0] * len(perms)
        else:
            raise ValueError(f"S_{n} supports the sign and trivial characters, not {character!r}")
        return cls(n, tuple(perms), tuple(complex(c) for c in chi), f"gmf:s{n}:{character}")

    @classmethod
    def alternating3(cls, power: int = 1) -> GmfSpec:
        """``A_3`` with ``chi(c) = omega**power`` on the 3-cycle ``c = (0 1 2)``."""
        c = (1, 2, 0)
        perms = [(0, 1, 2), c, _compose(c, c)]
        w = np.exp(2j * np.pi * power / 3)
        tag = {0: "trivial", 1: "omega", 2: "omega2"}[power % 3]
        return cls(3, tuple(perms), (1.0 + 0j, complex(w), complex(w * w)), f"gmf:a3:{tag}")

    @classmethod
    def identity_only(cls, n: int) -> GmfSpec:
        """Trivial subgroup: the product of the diagonal entries."""
        return cls(n, (tuple(range(n)),), (1.0 + 0j,), f"gmf:e{n}:trivial")


def _perm_sign(p):
    inv = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1.0 if inv % 2 else 1.0


def parse_gmf(text: str, n: int | None = None) -> GmfSpec:
    """Parse ``gmf:s3:sign``, ``gmf:a3:omega``, ``gmf:s2:trivial``, ``gmf:e2:trivial``.

    The dimension may be left open (``gmf:s:sign``, ``gmf:sign``) and is then
    taken from ``n``.
    """
    parts = text.strip().lower().split(":")
    if parts[0] == "gmf":
        parts = parts[1:]
    if len(parts) == 1:
        parts = ["s", parts[0]]
    if len(parts) != 2:
        raise ValueError(f"unknown gmf descriptor {text!r}")
    group, char = parts
    fam, digits = group[0], group[1:]
    size = int(digits) if digits else n
    if size is None:
        raise ValueError(f"gmf descriptor {text!r} needs a dimension")
    if n is not None and size != n:
        raise ValueError(f"gmf descriptor {text!r} is for n={size}, not n={n}")
    if fam == "s":
        return GmfSpec.symmetric(size, char)
    if fam == "a" and size == 3:
        return GmfSpec.alternating3({"trivial": 0, "omega": 1, "omega2": 2}[char])
    if fam == "e" and char == "trivial":
        return GmfSpec.identity_only(size)
    raise ValueError(f"unknown gmf descriptor {text!r}")


def gmf(a, spec: GmfSpec):
    """``M_chi(A) = sum_{sigma in H} chi(sigma) prod_i A[i, sigma(i)]``."""
    a = np.asarray(a)
    if a.shape[-2:] != (spec.n, spec.n):
        raise ValueError(f"gmf for n={spec.n} applied to shape {a.shape}")
    rows = np.arange(spec.n)
    total = 0
    for perm, c in zip(spec.subgroup, spec.character):
        total = total + c * np.prod(a[..., rows, list(perm)], axis=-1)
    return total


def gmf_family(n: int) -> list[GmfSpec]:
    """Degree-1 characters exercised for n x n matrices (trivial characters included)."""
    if n == 1:
        return [GmfSpec.symmetric(1, "trivial")]
    fam = [GmfSpec.symmetric(n, "sign"), GmfSpec.symmetric(n, "trivial"), GmfSpec.identity_only(n)]
    if n == 3:
        fam += [GmfSpec.alternating3(1), GmfSpec.alternating3(2)]
    return fam


# ---------------------------------------------------------------------------
# the six ternary products


class DotMode(enum.Enum):
    """The six readings of ``A . B . C`` with ``.`` the matrix or Hadamard product."""

    HADAMARD = "AoBoC"
    MATRIX = "ABC"
    HAD_OUTER_MAT = "Ao(BC)"
    MAT_OUTER_HAD = "A(BoC)"
    HAD_THEN_MAT = "(AoB)C"
    MAT_THEN_HAD = "(AB)oC"

    @classmethod
    def parse(cls, text) -> DotMode:
        if isinstance(text, cls):
            return text
        for m in cls:
            if text in (m.value, m.name, m.name.lower()):
                return m
        raise ValueError(f"unknown dot mode {text!r}")


def dot3(a, b, c, mode: DotMode):
    """The ternary product selected by ``mode`` (all operands n x n)."""
    a, b, c = np.asarray(a), np.asarray(b), np.asarray(c)
    if not (a.shape[-2:] == b.shape[-2:] == c.shape[-2:]) or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"incompatible shapes {a.shape}, {b.shape}, {c.shape}")
    mode = DotMode.parse(mode)
    if mode is DotMode.HADAMARD:
        return a * b * c
    if mode is DotMode.MATRIX:
        return a @ b @ c
    if mode is DotMode.HAD_OUTER_MAT:
        return a * (b @ c)
    if mode is DotMode.MAT_OUTER_HAD:
        return a @ (b * c)
    if mode is DotMode.HAD_THEN_MAT:
        return (a * b) @ c
    return (a @ b) * c


# ---------------------------------------------------------------------------
# random matrices


def random_unitary(rng: np.random.Generator, n: int, size=()) -> np.ndarray:
    """Haar-distributed unitaries from the QR factorization of complex Gaussians."""
    size = tuple(np.atleast_1d(size)) if size != () else ()
    z = (rng.standard_normal(size + (n, n)) + 1j * rng.standard_normal(size + (n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def random_matrices(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """A mixed bag of test matrices: complex and real Gaussian, rank one,
    scaled unitary and ill-conditioned, each with a log-normal overall scale."""
    kind = rng.integers(0, 5, count)
    z = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    out = z.copy()
    out[kind == 1] = z[kind == 1].real
    u = rng.standard_normal((count, n, 1)) + 1j * rng.standard_normal((count, n, 1))
    v = rng.standard_normal((count, 1, n)) + 1j * rng.standard_normal((count, 1, n))
    out[kind == 2] = (u @ v)[kind == 2]
    out[kind == 3] = random_unitary(rng, n, count)[kind == 3]
    sel = kind == 4
    if sel.any():
        s = np.exp(-6 * rng.random((int(sel.sum()), n)))
        uu = random_unitary(rng, n, int(sel.sum()))
        vv = random_unitary(rng, n, int(sel.sum()))
        out[sel] = (uu * s[:, None, :]) @ np.conj(np.swapaxes(vv, -1, -2))
    return out * np.exp(rng.standard_normal(count))[:, None, None]


# ---------------------------------------------------------------------------
# inequality oracles


def lemma1_margins(a, b, c, mode: DotMode, m: int, *, tol: float = REL_TOL):
    """Partial-sum margins ``rhs_k - lhs_k`` for every k and a pass mask.

    ``lhs_k = sum_{i<=k} s_i(A.B.C)^m`` and
    ``rhs_k = sum_{i<=k} (s_i(A) s_i(B) s_i(C))^m``.
    """
    prod = dot3(a, b, c, mode)
    lhs = np.cumsum(singular_values(prod) ** m, axis=-1)
    rhs = np.cumsum((singular_values(a) * singular_values(b) * singular_values(c)) ** m, axis=-1)
    margin = rhs - lhs
    ok = np.all(margin >= -_scaled_tol(rhs, tol), axis=-1)
    return margin, ok, lhs, rhs


def check_lemma1(a, b, c, mode: DotMode, m: int, *, tol: float = REL_TOL) -> CheckReport:
    """Weak majorization of the m-th powers of singular values of a ternary product."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    mode = DotMode.parse(mode)
    margin, ok, lhs, rhs = lemma1_margins(a, b, c, mode, m, tol=tol)
    k = int(np.argmin(margin))
    return CheckReport(
        "lemma1", float(lhs[k]), float(rhs[k]), float(margin[k]), bool(ok),
        {"mode": mode.value, "m": m, "lhs_partial": lhs, "rhs_partial": rhs, "tightest_k": k + 1},
    )


def _ky_fan_sums(a):
    return np.cumsum(singular_values(a), axis=-1)


def check_thmB(a, b, c, *, norms=None, tol: float = REL_TOL) -> CheckReport:
    """Ky Fan dominance ``(sum_k s(A))^2 <= sum_k s(B) sum_k s(C)`` for all k
    versus ``||A||^2 <= ||B|| ||C||`` over the built-in norm family.

    Passes when the two statements agree; ``details['forward_violations']``
    lists norms that fail although Ky Fan dominance holds.
    """
    n = np.shape(a)[-1]
    norms = norm_family(n) if norms is None else norms
    ka, kb, kc = _ky_fan_sums(a), _ky_fan_sums(b), _ky_fan_sums(c)
    lhs_k, rhs_k = ka ** 2, kb * kc
    dominated = bool(np.all(lhs_k <= rhs_k + _scaled_tol(rhs_k, tol)))
    sa, sb, sc = singular_values(a), singular_values(b), singular_values(c)
    failing, worst = [], math.inf
    for spec in norms:
        na, nb, nc = (float(spec.from_singular_values(s)) for s in (sa, sb, sc))
        m = nb * nc - na ** 2
        worst = min(worst, m)
        if m < -_scaled_tol(nb * nc, tol):
            failing.append(str(spec))
    all_norms = not failing
    forward = failing if dominated else []
    k_margin = float(np.min(rhs_k - lhs_k))
    return CheckReport(
        "thmB", float(lhs_k[-1]), float(rhs_k[-1]), worst if dominated else k_margin,
        dominated == all_norms and not forward,
        {"ky_fan_dominated": dominated, "all_norms_hold": all_norms, "failing_norms": failing,
         "forward_violations": forward},
    )


def check_thmC(a, b, spec: NormSpec, *, tol: float = REL_TOL) -> CheckReport:
    """(a) ``||A B^*|| <= s_1(A) ||B||`` and (b) ``||A|| >= s_1(A) ||E11||``."""
    a, b = np.asarray(a), np.asarray(b)
    n = a.shape[-1]
    s1 = singular_values(a)[..., 0]
    lhs_a = uinorm(a @ np.conj(np.swapaxes(b, -1, -2)), spec)
    rhs_a = s1 * uinorm(b, spec)
    lhs_b = s1 * uinorm(E11(n), spec)
    rhs_b = uinorm(a, spec)
    ma, mb = rhs_a - lhs_a, rhs_b - lhs_b
    ok = (ma >= -_scaled_tol(rhs_a, tol)) & (mb >= -_scaled_tol(rhs_b, tol))
    return CheckReport("thmC", float(lhs_a), float(rhs_a), float(min(ma, mb)), bool(ok),
                       {"norm": str(spec), "a": [float(lhs_a), float(rhs_a)], "b": [float(lhs_b), float(rhs_b)]})


def _tail_dominated(x, y, tol):
    ax = np.sort(np.abs(x), axis=-1)
    ay = np.sort(np.abs(y), axis=-1)
    tx = np.cumsum(ax[..., ::-1], axis=-1)
    ty = np.cumsum(ay[..., ::-1], axis=-1)
    return np.all(tx <= ty + _scaled_tol(ty, tol), axis=-1)


def check_thmD(x, y, spec: GaugeSpec, *, tol: float = REL_TOL) -> CheckReport:
    """Tail-sum dominance of the ascending moduli implies ``phi(x) <= phi(y)``."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    dominated = bool(_tail_dominated(x, y, tol))
    px, py = float(spec.of_vector(x)), float(spec.of_vector(y))
    margin = py - px
    ok = (not dominated) or margin >= -_scaled_tol(py, tol)
    return CheckReport("thmD", px, py, margin, bool(ok), {"gauge": str(spec), "dominated": dominated})


def thmE_sides(a, spec: GmfSpec):
    n = spec.n
    lhs = np.abs(gmf(a, spec)) ** 2
    rhs = np.sum(singular_values(a) ** (2 * n), axis=-1) / n
    return lhs, rhs


def check_thmE(a, spec: GmfSpec, *, tol: float = REL_TOL) -> CheckReport:
    """``|M_chi(A)|^2 <= (1/n) sum_i s_i(A)^(2n)``."""
    lhs, rhs = thmE_sides(a, spec)
    margin = rhs - lhs
    return CheckReport("thmE", float(lhs), float(rhs), float(margin),
                       bool(margin >= -_scaled_tol(rhs, tol)),
                       {"gmf": str(spec), "trivial_character": spec.is_trivial_character})


# ---------------------------------------------------------------------------
# randomized sweeps


def sweep_lemma1(trials: int, rng: np.random.Generator, *, dims=(2, 3), ms=(1, 2, 3, 4),
                 modes=tuple(DotMode), tol: float = REL_TOL, chunk: int = 20000) -> SweepSummary:
    """Every trial is one random triple checked for all modes, all m and all k."""
    summary = SweepSummary("lemma1")
    done = 0
    while done < trials:
        count = min(chunk, trials - done)
        n = np.array(dims)[rng.integers(0, len(dims), count)]
        for d in dims:
            idx = np.flatnonzero(n == d)
            if idx.size == 0:
                continue
            a, b, c = (random_matrices(rng, idx.size, d) for _ in range(3))
            sa, sb, sc = singular_values(a), singular_values(b), singular_values(c)
            ok_all = np.ones(idx.size, dtype=bool)
            worst = np.full(idx.size, np.inf)
            for mode in modes:
                sp = singular_values(dot3(a, b, c, mode))
                for m in ms:
                    lhs = np.cumsum(sp ** m, axis=-1)
                    rhs = np.cumsum((sa * sb * sc) ** m, axis=-1)
                    margin = rhs - lhs
                    ok = np.all(margin >= -_scaled_tol(rhs, tol), axis=-1)
                    if not ok.all():
                        for i in np.flatnonzero(~ok):
                            summary._push({"dim": d, "mode": mode.value, "m": m,
                                           "margin": float(margin[i].min())})
                    ok_all &= ok
                    worst = np.minimum(worst, margin.min(axis=-1))
            summary.add(worst, ok_all)
        done += count
    summary.extra["checks_per_trial"] = len(modes) * len(ms)
    return summary


def _dominated_triple(rng, count, n):
    """``(A, B, C)`` with s(A) <= sqrt(s(B) s(C)) entrywise, so Ky Fan dominance holds."""
    b = random_matrices(rng, count, n)
    same = rng.random(count) < 0.5
    c = np.where(same[:, None, None], b, random_matrices(rng, count, n))
    sb, sc = singular_values(b), singular_values(c)
    s = np.sqrt(sb * sc) * rng.random((count, n)) ** rng.choice([0.05, 1.0, 3.0], (count, 1))
    u, v = random_unitary(rng, n, count), random_unitary(rng, n, count)
    a = (u * s[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return a, b, c


def sweep_thmB(trials: int, rng: np.random.Generator, *, dims=(2, 3), tol: float = REL_TOL) -> SweepSummary:
    """Half constructed Ky Fan dominated triples, half unconstrained ones."""
    summary = SweepSummary("thmB")
    dominated_count = 0
    for t in range(trials):
        n = int(dims[t % len(dims)])
        if t % 2 == 0:
            a, b, c = (x[0] for x in _dominated_triple(rng, 1, n))
        else:
            a, b, c = random_matrices(rng, 3, n)
        rep = check_thmB(a, b, c, tol=tol)
        dominated_count += rep.details["ky_fan_dominated"]
        summary.add([rep.margin if rep.details["ky_fan_dominated"] else math.inf],
                    [rep.passed], lambda i, rep=rep: rep.as_dict())
    summary.extra["dominated_trials"] = dominated_count
    return summary


def sweep_thmC(trials: int, rng: np.random.Generator, *, dims=(2, 3), tol: float = REL_TOL) -> SweepSummary:
    summary = SweepSummary("thmC")
    per = max(1, trials // len(dims))
    for d in dims:
        count = per if d != dims[-1] else trials - per * (len(dims) - 1)
        a, b = random_matrices(rng, count, d), random_matrices(rng, count, d)
        sa, sb = singular_values(a), singular_values(b)
        sab = singular_values(a @ np.conj(np.swapaxes(b, -1, -2)))
        se = singular_values(E11(d))
        worst = np.full(count, np.inf)
        ok_all = np.ones(count, dtype=bool)
        for spec in norm_family(d):
            lhs_a, rhs_a = spec.from_singular_values(sab), sa[:, 0] * spec.from_singular_values(sb)
            lhs_b, rhs_b = sa[:, 0] * spec.from_singular_values(se), spec.from_singular_values(sa)
            ma, mb = rhs_a - lhs_a, rhs_b - lhs_b
            ok = (ma >= -_scaled_tol(rhs_a, tol)) & (mb >= -_scaled_tol(rhs_b, tol))
            ok_all &= ok
            worst = np.minimum(worst, np.minimum(ma, mb))
        summary.add(worst, ok_all, lambda i: {"dim": d, "margin": float(worst[i])})
    return summary


def _dominated_vectors(rng, count, length):
    """``(x, y)`` with the ascending tail sums of |x| bounded by those of |y|."""
    y = (rng.standard_normal((count, length)) + 1j * rng.standard_normal((count, length)))
    y *= rng.random((count, length)) ** rng.choice([0.5, 2.0, 6.0], (count, 1))
    my = np.abs(y)
    # doubly stochastic mixture of permutations, then an entrywise shrink
    mix = np.zeros_like(my)
    weights = rng.dirichlet(np.ones(3), count)
    for j in range(3):
        perm = np.argsort(rng.random((count, length)), axis=1)
        mix += weights[:, j:j + 1] * np.take_along_axis(my, perm, axis=1)
    shrink = np.where(rng.random((count, 1)) < 0.3, 1.0, rng.random((count, length)))
    phase = np.exp(2j * np.pi * rng.random((count, length)))
    return mix * shrink * phase, y


def sweep_thmD(trials: int, rng: np.random.Generator, *, lengths=(4, 9), tol: float = REL_TOL) -> SweepSummary:
    summary = SweepSummary("thmD")
    per = max(1, trials // len(lengths))
    for L in lengths:
        count = per if L != lengths[-1] else trials - per * (len(lengths) - 1)
        x, y = _dominated_vectors(rng, count, L)
        dominated = _tail_dominated(x, y, tol)
        worst = np.full(count, np.inf)
        ok_all = np.ones(count, dtype=bool)
        for spec in gauge_family():
            px, py = spec.of_vector(x), spec.of_vector(y)
            m = py - px
            ok_all &= (~dominated) | (m >= -_scaled_tol(py, tol))
            worst = np.minimum(worst, m)
        summary.add(worst, ok_all, lambda i: {"length": L, "margin": float(worst[i])})
        summary.extra.setdefault("not_dominated", 0)
        summary.extra["not_dominated"] += int(np.count_nonzero(~dominated))
    return summary


def sweep_thmE(trials: int, rng: np.random.Generator, *, specs=None, tol: float = REL_TOL) -> SweepSummary:
    """Default characters: (S2, sgn), (S3, sgn), (A3, omega); trivial characters
    are reported separately under ``extra['trivial_character']``."""
    specs = specs or [GmfSpec.symmetric(2, "sign"), GmfSpec.symmetric(3, "sign"), GmfSpec.alternating3(1)]
    summary = SweepSummary("thmE")
    per = max(1, trials // len(specs))
    for j, spec in enumerate(specs):
        count = per if j < len(specs) - 1 else trials - per * (len(specs) - 1)
        a = random_matrices(rng, count, spec.n)
        lhs, rhs = thmE_sides(a, spec)
        m = rhs - lhs
        summary.add(m, m >= -_scaled_tol(rhs, tol), lambda i: {"gmf": str(spec), "margin": float(m[i])})
    return summary
