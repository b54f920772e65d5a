"""Fourier analysis and Bohr-type inequalities on compact groups, checked numerically."""

from .groups import DualList, GroupTable, Irrep, build_group, dual, verify_dual
from .fourier import GroupFunction, fourier_transform, inverse_transform, parseval

__version__ = "0.1.0"

__all__ = [
    "DualList", "GroupTable", "Irrep", "build_group", "dual", "verify_dual",
    "GroupFunction", "fourier_transform", "inverse_transform", "parseval",
]
