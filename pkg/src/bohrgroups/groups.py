"""Finite groups and complete tables of their irreducible unitary representations.

Groups are stored as index-based multiplication tables with the uniform
(normalized Haar) weight ``1/|G|`` on every element.  Each supported family
ships a hand-written, explicitly tabulated dual:

* ``cyclic:N``      characters ``x -> exp(2 pi i j x / N)`` in order ``j = 0, 1, ..., N-1``
* ``dihedral:N``    trivial, sign, (for even N) the two characters with
                    ``r -> -1``, then the 2-dimensional rotation/reflection
                    representations ``h = 1 .. floor((N-1)/2)``
* ``symmetric:N``   (N <= 4) trivial, sign, (N = 4) the 2-dimensional
                    representation through ``S4 -> S3``, the standard
                    representation, the standard representation twisted by sign
* ``quaternion:8``  trivial, the three sign characters (``i``/``j`` kernels),
                    then the 2-dimensional Pauli-type representation

Position 0 of every dual is the trivial representation; the remaining
positions form the index set used for weighted sums such as ``r**n``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GroupTable",
    "Irrep",
    "DualList",
    "DualReport",
    "GroupSpecError",
    "build_group",
    "dual",
    "contragredient",
    "verify_dual",
    "check_group",
    "parse_group",
]

UNITARY_TOL = 1e-10
DUAL_TOL = 1e-9

_DESCRIPTOR = re.compile(r"^\s*([a-z]+)\s*[:(]?\s*(\d+)?\s*\)?\s*$")


class GroupSpecError(ValueError):
    """Raised for unknown or out-of-range group descriptors."""


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group as a multiplication table on element indices.

    ``mult[x, y]`` is the index of the product ``x * y``.
    """

    order: int
    mult: np.ndarray
    inverse: np.ndarray
    identity: int
    label: str
    element_names: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "mult", _frozen(np.asarray(self.mult, dtype=np.int64)))
        object.__setattr__(self, "inverse", _frozen(np.asarray(self.inverse, dtype=np.int64)))

    @property
    def weight(self) -> float:
        """Haar weight of a single element."""
        return 1.0 / self.order

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def __repr__(self):
        return f"GroupTable({self.label!r}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Irrep:
    """A unitary matrix representation tabulated on every group element.

    ``matrices[x]`` is the ``dim x dim`` unitary matrix attached to element ``x``.
    """

    dim: int
    matrices: np.ndarray
    label: int
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=np.complex128)
        if m.ndim != 3 or m.shape[1:] != (self.dim, self.dim):
            raise ValueError(f"expected (|G|, {self.dim}, {self.dim}) matrices, got {m.shape}")
        object.__setattr__(self, "matrices", _frozen(m))

    def __call__(self, x: int) -> np.ndarray:
        return self.matrices[x]

    def __repr__(self):
        return f"Irrep({self.name or self.label}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class DualList:
    """Complete, ordered list of inequivalent irreducible representations.

    ``irreps[0]`` is the trivial representation; ``irreps[1:]`` is the
    nontrivial part of the dual.  ``conjugate_index[n]`` is the position of
    the representation equivalent to the contragredient of ``irreps[n]``.
    """

    group: GroupTable
    irreps: tuple
    conjugate_index: tuple

    @property
    def dims(self) -> tuple:
        return tuple(p.dim for p in self.irreps)

    @property
    def nontrivial(self) -> range:
        return range(1, len(self.irreps))

    def __len__(self):
        return len(self.irreps)

    def __getitem__(self, n):
        return self.irreps[n]

    def __iter__(self):
        return iter(self.irreps)


@dataclass
class DualReport:
    unitarity_defect: float
    homomorphism_defect: float
    dimension_defect: int
    orthogonality_defect: float
    schur_defect: float
    trivial_first: bool
    tol: float = DUAL_TOL

    @property
    def passed(self) -> bool:
        return (
            self.trivial_first
            and self.dimension_defect == 0
            and max(self.unitarity_defect, self.homomorphism_defect,
                    self.orthogonality_defect, self.schur_defect) <= self.tol
        )

    def as_dict(self) -> dict:
        return {
            "unitarity_defect": self.unitarity_defect,
            "homomorphism_defect": self.homomorphism_defect,
            "dimension_defect": self.dimension_defect,
            "orthogonality_defect": self.orthogonality_defect,
            "schur_defect": self.schur_defect,
            "trivial_first": self.trivial_first,
            "passed": self.passed,
        }


# ---------------------------------------------------------------------------
# group construction


def parse_group(spec) -> tuple[str, int]:
    """Normalize a descriptor such as ``"cyclic:8"`` to ``("cyclic", 8)``."""
    if isinstance(spec, tuple):
        family, n = spec
        return str(family).lower(), int(n)
    if not isinstance(spec, str):
        raise GroupSpecError(f"unsupported group descriptor {spec!r}")
    m = _DESCRIPTOR.match(spec.lower())
    if m is None:
        raise GroupSpecError(f"cannot parse group descriptor {spec!r}")
    family, n = m.group(1), m.group(2)
    aliases = {"quaternion": "quaternion", "q": "quaternion", "z": "cyclic", "c": "cyclic",
               "d": "dihedral", "s": "symmetric", "sym": "symmetric"}
    family = aliases.get(family, family)
    if family == "quaternion":
        return family, int(n) if n else 8
    if n is None:
        raise GroupSpecError(f"group descriptor {spec!r} needs an order, e.g. {family}:4")
    return family, int(n)


def _table_from_elements(elements, op, label, names=None) -> GroupTable:
    index = {e: i for i, e in enumerate(elements)}
    order = len(elements)
    mult = np.empty((order, order), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mult[i, j] = index[op(a, b)]
    identity = int(next(i for i in range(order) if np.array_equal(mult[i], np.arange(order))))
    inverse = np.argmax(mult == identity, axis=1)
    return GroupTable(order, mult, inverse, identity, label,
                      tuple(names) if names is not None else tuple(str(e) for e in elements))


def _cyclic_elements(n):
    return list(range(n)), lambda a, b: (a + b) % n


def _dihedral_elements(n):
    # r^k s^e stored as (k, e); s r s = r^-1
    elements = [(k, e) for e in (0, 1) for k in range(n)]

    def op(a, b):
        k1, e1 = a
        k2, e2 = b
        return ((k1 + (-1) ** e1 * k2) % n, (e1 + e2) % 2)

    return elements, op


def _symmetric_elements(n):
    elements = list(itertools.permutations(range(n)))

    def op(a, b):  # (ab)(i) = a(b(i))
        return tuple(a[b[i]] for i in range(n))

    return elements, op


# unit quaternions as (sign, axis) with axis in 1, i, j, k
_QUAT_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
_QUAT_ELEMENTS = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
# _QUAT_AXIS[a][b] = (sign, axis) of basis product e_a e_b
_QUAT_AXIS = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def _quat_op(a, b):
    s, ax = _QUAT_AXIS[a[1]][b[1]]
    return (a[0] * b[0] * s, ax)


def build_group(spec) -> GroupTable:
    """Build the multiplication table for a supported group descriptor.

    Parameters
    ----------
    spec : str or tuple
        ``"cyclic:N"`` (N >= 1), ``"dihedral:N"`` (N >= 3),
        ``"symmetric:N"`` (1 <= N <= 4) or ``"quaternion:8"``.

    Raises
    ------
    GroupSpecError
        For unknown families or orders outside the supported range.
    """
    family, n = parse_group(spec)
    if family == "cyclic":
        if n < 1:
            raise GroupSpecError("cyclic group needs N >= 1")
        elements, op = _cyclic_elements(n)
        return _table_from_elements(elements, op, f"cyclic-{n}")
    if family == "dihedral":
        if n < 3:
            raise GroupSpecError("dihedral group needs N >= 3")
        elements, op = _dihedral_elements(n)
        names = [("r%d" % k) + ("s" if e else "") for k, e in elements]
        return _table_from_elements(elements, op, f"dihedral-{n}", names)
    if family == "symmetric":
        if not 1 <= n <= 4:
            raise GroupSpecError("symmetric group supported for 1 <= N <= 4")
        elements, op = _symmetric_elements(n)
        return _table_from_elements(elements, op, f"symmetric-{n}")
    if family == "quaternion":
        if n != 8:
            raise GroupSpecError("only the quaternion group of order 8 is supported")
        return _table_from_elements(_QUAT_ELEMENTS, _quat_op, "quaternion-8", _QUAT_NAMES)
    raise GroupSpecError(f"unknown group family {family!r}")


def check_group(group: GroupTable) -> dict:
    """Exhaustively check the group axioms of a table (feasible for |G| <= 64)."""
    m = group.mult
    idx = np.arange(group.order)
    assoc = bool(np.array_equal(m[m[:, :, None], idx[None, None, :]],
                                m[idx[:, None, None], m[None, :, :]]))
    ident = bool(np.array_equal(m[group.identity], idx) and np.array_equal(m[:, group.identity], idx))
    inv = bool(np.all(m[idx, group.inverse] == group.identity)
               and np.all(m[group.inverse, idx] == group.identity))
    return {"associative": assoc, "identity": ident, "inverses": inv,
            "passed": assoc and ident and inv}


# ---------------------------------------------------------------------------
# irreducible representations


def _one_dim(values, label, name):
    v = np.asarray(values, dtype=np.complex128)
    return Irrep(1, v.reshape(-1, 1, 1), label, name)


def _cyclic_dual(n):
    x = np.arange(n)
    reps = []
    for j in range(n):
        # exact residues keep e.g. i**k free of drift
        k = (j * x) % n
        reps.append(_one_dim(np.exp(2j * np.pi * k / n), j, f"chi{j}"))
    return reps


def _rot(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _dihedral_dual(n):
    elements, _ = _dihedral_elements(n)
    k = np.array([e[0] for e in elements])
    e = np.array([e[1] for e in elements])
    reps = [_one_dim(np.ones(2 * n), 0, "trivial"), _one_dim((-1.0) ** e, 0, "sign")]
    if n % 2 == 0:
        reps.append(_one_dim((-1.0) ** k, 0, "alt"))
        reps.append(_one_dim((-1.0) ** (k + e), 0, "alt-sign"))
    refl = np.array([[1.0, 0.0], [0.0, -1.0]])
    for h in range(1, (n - 1) // 2 + 1):
        mats = np.array([_rot(2 * np.pi * h * kk / n) @ np.linalg.matrix_power(refl, ee)
                         for kk, ee in zip(k, e)])
        reps.append(Irrep(2, mats, 0, f"rho{h}"))
    return reps


def _perm_matrix(p):
    n = len(p)
    m = np.zeros((n, n))
    m[list(p), range(n)] = 1.0  # e_i -> e_{p(i)}
    return m


def _helmert(n):
    """Orthonormal basis (columns) of the sum-zero subspace of R^n."""
    q = np.zeros((n, n - 1))
    for j in range(1, n):
        q[:j, j - 1] = 1.0
        q[j, j - 1] = -j
        q[:, j - 1] /= np.sqrt(j * (j + 1))
    return q


def _sign(p):
    inversions = sum(1 for a, b in itertools.combinations(range(len(p)), 2) if p[a] > p[b])
    return -1.0 if inversions % 2 else 1.0


def _standard_rep(perms, n):
    q = _helmert(n)
    return np.array([q.T @ _perm_matrix(p) @ q for p in perms])


def _symmetric_dual(n):
    perms, _ = _symmetric_elements(n)
    sign = np.array([_sign(p) for p in perms])
    reps = [_one_dim(np.ones(len(perms)), 0, "trivial")]
    if n == 1:
        return reps
    reps.append(_one_dim(sign, 0, "sign"))
    if n == 2:
        return reps
    if n == 4:
        # S4 acts on the three pairings of {0,1,2,3}; compose with standard rep of S3
        pairings = [frozenset({frozenset({0, 1}), frozenset({2, 3})}),
                    frozenset({frozenset({0, 2}), frozenset({1, 3})}),
                    frozenset({frozenset({0, 3}), frozenset({1, 2})})]
        images = []
        for p in perms:
            img = []
            for pr in pairings:
                moved = frozenset(frozenset(p[i] for i in pair) for pair in pr)
                img.append(pairings.index(moved))
            images.append(tuple(img))
        reps.append(Irrep(2, _standard_rep(images, 3), 0, "pairings"))
    std = _standard_rep(perms, n)
    reps.append(Irrep(n - 1, std, 0, "standard"))
    if n == 4:
        reps.append(Irrep(3, std * sign[:, None, None], 0, "standard-sign"))
    return reps


def _quaternion_dual():
    # columns follow _QUAT_ELEMENTS: 1, -1, i, -i, j, -j, k, -k
    one = np.ones(8)
    chi_i = np.array([1, 1, 1, 1, -1, -1, -1, -1])   # i -> 1,  j -> -1
    chi_j = np.array([1, 1, -1, -1, 1, 1, -1, -1])   # i -> -1, j -> 1
    chi_k = np.array([1, 1, -1, -1, -1, -1, 1, 1])   # i -> -1, j -> -1
    eye = np.eye(2, dtype=complex)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    mats = np.array([eye, -eye, qi, -qi, qj, -qj, qk, -qk])
    return [
        _one_dim(one, 0, "trivial"),
        _one_dim(chi_i, 0, "ker-i"),
        _one_dim(chi_j, 0, "ker-j"),
        _one_dim(chi_k, 0, "ker-k"),
        Irrep(2, mats, 0, "pauli"),
    ]


def _character(rep):
    return np.trace(rep.matrices, axis1=1, axis2=2)


def _conjugate_positions(reps, order):
    chars = np.array([_character(p) for p in reps])
    out = []
    for c in chars:
        # characters of inequivalent irreps are orthonormal, so the match is unique
        overlaps = np.abs(chars @ c / order)
        out.append(int(np.argmax(overlaps)))
    return tuple(out)


def dual(group: GroupTable) -> DualList:
    """Return the complete dual of a built-in group, trivial representation first.

    For abelian groups every irrep is one-dimensional.
    """
    family, _, n = group.label.partition("-")
    n = int(n)
    if family == "cyclic":
        reps = _cyclic_dual(n)
    elif family == "dihedral":
        reps = _dihedral_dual(n)
    elif family == "symmetric":
        reps = _symmetric_dual(n)
    elif family == "quaternion":
        reps = _quaternion_dual()
    else:
        raise GroupSpecError(f"no dual table for {group.label!r}")
    reps = [Irrep(p.dim, p.matrices, i, p.name) for i, p in enumerate(reps)]
    return DualList(group, tuple(reps), _conjugate_positions(reps, group.order))


def contragredient(rep: Irrep) -> Irrep:
    """Entrywise complex conjugate representation."""
    return Irrep(rep.dim, np.conj(rep.matrices), rep.label, rep.name + "*" if rep.name else "")


def _schur_defect(rep, rng):
    d = rep.dim
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = rep.matrices
    avg = np.einsum("xij,jk,xlk->il", m, a, m.conj()) / m.shape[0]
    return float(np.max(np.abs(avg - np.trace(avg) / d * np.eye(d))))


def verify_dual(dual_list: DualList, group: GroupTable | None = None, *, tol: float = DUAL_TOL,
                seed: int = 0) -> DualReport:
    """Check unitarity, the homomorphism property, completeness and orthogonality.

    The orthogonality defect compares the Gram matrix of all matrix
    coefficient functions under the uniform inner product with its
    predicted value ``diag(1/d_n)``; it therefore also detects reducible or
    mutually equivalent entries.
    """
    group = dual_list.group if group is None else group
    rng = np.random.default_rng(seed)
    unit = hom = schur = 0.0
    coeff_rows, expected = [], []
    for rep in dual_list:
        m = rep.matrices
        eye = np.eye(rep.dim)
        unit = max(unit, float(np.max(np.abs(np.einsum("xji,xjk->xik", m.conj(), m) - eye))))
        prod = np.einsum("xij,yjk->xyik", m, m)
        hom = max(hom, float(np.max(np.abs(m[group.mult] - prod))))
        schur = max(schur, _schur_defect(rep, rng))
        coeff_rows.append(m.reshape(group.order, -1).T)
        expected.extend([1.0 / rep.dim] * rep.dim ** 2)
    coeffs = np.vstack(coeff_rows)
    gram = coeffs @ coeffs.conj().T / group.order
    ortho = float(np.max(np.abs(gram - np.diag(expected))))
    triv = dual_list[0]
    trivial_first = triv.dim == 1 and bool(np.allclose(triv.matrices, 1.0, atol=0, rtol=0))
    dim_defect = int(sum(d * d for d in dual_list.dims) - group.order)
    return DualReport(unit, hom, dim_defect, ortho, schur, trivial_first, tol)
