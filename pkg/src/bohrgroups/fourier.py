"""Fourier analysis on finite groups: transform, inversion, Parseval.

Integrals against the normalized Haar measure are plain averages over the
group, so every identity here is exact up to floating point rounding.

The array-level helpers (``transform_values``/``inverse_values``) accept
arbitrary leading batch axes and are what the verification sweeps use; the
``GroupFunction`` wrappers are the convenient single-function surface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .groups import DualList, GroupTable, Irrep

__all__ = [
    "GroupFunction",
    "FourierCoefficients",
    "GroupMismatchError",
    "fourier_transform",
    "inverse_transform",
    "parseval",
    "conj_transform",
    "transform_values",
    "inverse_values",
    "function_to_json",
    "function_from_json",
]

CONJ_TOL = 1e-10


class GroupMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """Complex scalar (shape ``(|G|,)``) or matrix (``(|G|, vd, vd)``) values on a group."""

    group: GroupTable
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.ndim not in (1, 3) or v.shape[0] != self.group.order:
            raise ValueError(f"values must have shape (|G|,) or (|G|, vd, vd); got {v.shape}")
        if v.ndim == 3 and v.shape[1] != v.shape[2]:
            raise ValueError("matrix values must be square")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def is_scalar(self) -> bool:
        return self.values.ndim == 1

    @property
    def value_dim(self) -> int:
        return 1 if self.is_scalar else self.values.shape[1]

    def conj(self) -> GroupFunction:
        return GroupFunction(self.group, np.conj(self.values))

    def adjoint(self) -> GroupFunction:
        """``x -> f(x)^*`` (complex conjugate for scalar values)."""
        if self.is_scalar:
            return self.conj()
        return GroupFunction(self.group, np.conj(np.swapaxes(self.values, 1, 2)))

    def __add__(self, other):
        return GroupFunction(self.group, self.values + other.values)

    def __mul__(self, c):
        return GroupFunction(self.group, self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    dual: DualList
    coeffs: tuple
    value_dim: int = 1
    matrix: bool = False

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)


def _check_group(group, dual):
    g = dual.group
    if group is not g and (group.label != g.label or group.order != g.order):
        raise GroupMismatchError(f"function lives on {group.label}, dual on {g.label}")


def transform_values(values: np.ndarray, dual: DualList, *, matrix: bool = False) -> list:
    """Fourier coefficients of raw values.

    ``values`` has shape ``(..., |G|)`` for scalar functions, or
    ``(..., |G|, vd, vd)`` with ``matrix=True``.  Returns one array per irrep
    of shape ``(..., d, d)`` or ``(..., vd*d, vd*d)``; the matrix case is the
    block (Kronecker) average ``mean_x f(x) (x) pi(x)^*``.
    """
    values = np.asarray(values)
    order = dual.group.order
    out = []
    for rep in dual:
        adj = np.conj(np.swapaxes(rep.matrices, 1, 2))
        if not matrix:
            out.append(np.einsum("...x,xij->...ij", values, adj) / order)
        else:
            vd, d = values.shape[-1], rep.dim
            blk = np.einsum("...xab,xij->...aibj", values, adj) / order
            out.append(blk.reshape(blk.shape[:-4] + (vd * d, vd * d)))
    return out


def inverse_values(coeffs, dual: DualList, *, matrix: bool = False, value_dim: int = 1) -> np.ndarray:
    """Evaluate ``sum_n d_n tr(F_n pi_n(x))`` at every element ``x``.

    For block coefficients the trace is partial, over the representation
    factor only.  Output shape ``(..., |G|)`` or ``(..., |G|, vd, vd)``.
    """
    total = None
    for rep, c in zip(dual, coeffs):
        c = np.asarray(c)
        if not matrix:
            term = rep.dim * np.einsum("...ij,xji->...x", c, rep.matrices)
        else:
            d, vd = rep.dim, value_dim
            blk = c.reshape(c.shape[:-2] + (vd, d, vd, d))
            term = rep.dim * np.einsum("...aibj,xji->...xab", blk, rep.matrices)
        total = term if total is None else total + term
    return total


def fourier_transform(f: GroupFunction, dual: DualList) -> FourierCoefficients:
    """Fourier transform ``f^(pi_n) = mean_x f(x) pi_n(x)^*`` at every irrep.

    Entrywise this is ``f^(pi)_ij = mean_x f(x) conj(pi(x)_ji)``.

    Raises
    ------
    GroupMismatchError
        If ``f`` and ``dual`` belong to different groups.
    """
    _check_group(f.group, dual)
    coeffs = transform_values(f.values, dual, matrix=not f.is_scalar)
    return FourierCoefficients(dual, tuple(coeffs), f.value_dim, not f.is_scalar)


def inverse_transform(coeffs: FourierCoefficients, x: int | None = None):
    """Inversion formula at element ``x`` (all elements when ``x`` is None)."""
    if len(coeffs.coeffs) != len(coeffs.dual):
        raise ValueError("need exactly one coefficient block per irrep")
    vd = coeffs.value_dim
    for rep, c in zip(coeffs.dual, coeffs.coeffs):
        if np.shape(c)[-2:] != (vd * rep.dim, vd * rep.dim):
            raise ValueError(f"coefficient block for irrep {rep.label} has shape {np.shape(c)}")
    matrix = coeffs.matrix or vd > 1
    vals = inverse_values(coeffs.coeffs, coeffs.dual, matrix=matrix, value_dim=vd)
    if x is None:
        return vals
    return vals[..., x, :, :] if matrix else vals[..., x]


def parseval(f: GroupFunction, dual: DualList) -> tuple[float, float]:
    """Both sides of the Parseval identity for a scalar function.

    Returns ``(mean_x |f(x)|^2, sum_n d_n tr(F_n^* F_n))``.
    """
    if not f.is_scalar:
        raise ValueError("parseval is defined here for scalar-valued functions only")
    _check_group(f.group, dual)
    lhs = float(np.mean(np.abs(f.values) ** 2))
    coeffs = transform_values(f.values, dual)
    rhs = float(sum(rep.dim * np.sum(np.abs(c) ** 2) for rep, c in zip(dual, coeffs)))
    return lhs, rhs


def conj_transform(f: GroupFunction, rep: Irrep, *, tol: float = CONJ_TOL) -> np.ndarray:
    """``conj(f^(conj pi))``, cross-checked against ``(conj f)^(pi)``.

    Raises
    ------
    ArithmeticError
        If the two evaluation paths disagree by more than ``tol``.
    """
    if not f.is_scalar:
        raise ValueError("conj_transform expects a scalar function")
    order = f.group.order
    m = rep.matrices
    # (a): transform at the contragredient, then conjugate
    at_conj = np.einsum("x,xij->ij", f.values, np.swapaxes(m, 1, 2)) / order
    path_a = np.conj(at_conj)
    # (b): transform of the conjugated function at pi itself
    path_b = np.einsum("x,xij->ij", np.conj(f.values), np.conj(np.swapaxes(m, 1, 2))) / order
    err = float(np.max(np.abs(path_a - path_b)))
    if err > tol:
        raise ArithmeticError(f"conjugate transform paths disagree by {err:.3e}")
    return path_a


def function_to_json(f) -> str:
    """Serialize values as ``[re, im]`` pairs (nested per matrix entry)."""
    v = f.values if isinstance(f, GroupFunction) else np.asarray(f, dtype=complex)
    pairs = np.stack([v.real, v.imag], axis=-1)
    return json.dumps(pairs.tolist())


def function_from_json(text: str, group: GroupTable) -> GroupFunction:
    arr = np.asarray(json.loads(text), dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("expected [re, im] pairs")
    return GroupFunction(group, arr[..., 0] + 1j * arr[..., 1])
