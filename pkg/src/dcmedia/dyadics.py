"""Linear maps between graded spaces, stored as dense matrices with space tags.

A :class:`Dyadic` maps elements of ``domain`` to ``codomain``; the matrix has
shape ``(dim codomain, dim domain)`` in the canonical bases of
:mod:`dcmedia.exterior`.  With this layout the coordinate-free statement
"``e_N ⌊ M`` is symmetric" is literal symmetry of the raw 6x6 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import NamedTuple

import numpy as np

from . import exterior as ex

INVERTIBLE_COND = 1e12


class SpaceTag(NamedTuple):
    family: str  # "vector" or "form"
    grade: int

    @property
    def dim(self):
        return comb(ex.DIM, self.grade)

    def dual(self):
        return SpaceTag(ex.FORM if self.family == ex.VECTOR else ex.VECTOR, self.grade)


E1 = SpaceTag(ex.VECTOR, 1)
E2 = SpaceTag(ex.VECTOR, 2)
F1 = SpaceTag(ex.FORM, 1)
F2 = SpaceTag(ex.FORM, 2)


class TagError(ValueError):
    """Space tags of the operands do not fit together."""


@dataclass(frozen=True)
class Dyadic:
    domain: SpaceTag
    codomain: SpaceTag
    matrix: np.ndarray

    def __post_init__(self):
        for tag in (self.domain, self.codomain):
            if tag.family not in (ex.VECTOR, ex.FORM) or not 0 <= tag.grade <= ex.DIM:
                raise TagError(f"bad space tag {tag}")
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise TagError(
                f"matrix shape {m.shape} does not fit {self.domain} -> {self.codomain}")
        if not np.all(np.isfinite(m)):
            raise ValueError("dyadic entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, tag):
        return cls(tag, tag, np.eye(tag.dim))

    @classmethod
    def zero(cls, domain, codomain):
        return cls(domain, codomain, np.zeros((codomain.dim, domain.dim)))

    def apply(self, x):
        if (x.family, x.grade) != tuple(self.domain):
            raise TagError(f"dyadic acts on {self.domain}, got {x.family} grade {x.grade}")
        cls = ex.KVector if self.codomain.family == ex.VECTOR else ex.KForm
        return cls(self.codomain.grade, self.matrix @ x.coords)

    def __call__(self, x):
        return self.apply(x)

    @property
    def T(self):
        return transpose(self)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, s):
        return scale(self, s)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return compose(self, other)

    def trace(self):
        if self.domain.grade != self.codomain.grade:
            raise TagError("trace needs equal grades")
        return complex(np.trace(self.matrix))

    def is_invertible(self, cond_limit=INVERTIBLE_COND):
        return is_invertible_matrix(self.matrix, cond_limit)

    def inverse(self):
        return Dyadic(self.codomain, self.domain, np.linalg.inv(self.matrix))


def is_invertible_matrix(m, cond_limit=INVERTIBLE_COND):
    m = np.asarray(m)
    if m.shape[0] != m.shape[1] or not np.any(m):
        return False
    return bool(np.linalg.cond(m) < cond_limit)


def transpose(d):
    """``d^T`` acts between the dual spaces: ``pair(a, d|x) == pair(d^T|a, x)``."""
    return Dyadic(d.codomain.dual(), d.domain.dual(), d.matrix.T)


def compose(a, b):
    """``a | b``: apply ``b`` first, then ``a``."""
    if b.codomain != a.domain:
        raise TagError(f"cannot compose {a.domain}<-... with ...->{b.codomain}")
    return Dyadic(b.domain, a.codomain, a.matrix @ b.matrix)


def add(a, b):
    if (a.domain, a.codomain) != (b.domain, b.codomain):
        raise TagError("cannot add dyadics with different space tags")
    return Dyadic(a.domain, a.codomain, a.matrix + b.matrix)


def scale(d, s):
    return Dyadic(d.domain, d.codomain, d.matrix * complex(s))


def dyad(x, y):
    """The dyad ``x y`` acting as ``(x y) | z = x (y | z)``."""
    dom = SpaceTag(ex.FORM if y.family == ex.VECTOR else ex.VECTOR, y.grade)
    return Dyadic(dom, SpaceTag(x.family, x.grade), np.outer(x.coords, y.coords))


def lift_dyadic(tag=F2):
    """``e_N ⌊`` (or ``eps_N ⌊``) on grade-2 elements as a dyadic."""
    if tag.grade != 2:
        raise TagError("lift_dyadic is defined on grade 2")
    return Dyadic(tag, tag.dual(), ex.G)


# -- compounds --------------------------------------------------------------

def compound_matrix(m, k):
    """k-th compound: the matrix of k x k minors in lexicographic tuple order."""
    m = np.asarray(m)
    n = m.shape[-1]
    if not 0 <= k <= n:
        raise ValueError(f"compound order {k} outside 0..{n}")
    idx = list(combinations(range(n), k))
    if k == 0:
        return np.ones(m.shape[:-2] + (1, 1), dtype=m.dtype)
    rows = np.array(idx)
    # gather all k x k submatrices at once: shape (..., N, N, k, k)
    sub = m[..., rows[:, None, :, None], rows[None, :, None, :]]
    return np.linalg.det(sub)


def compound(d, k):
    """``d^(k)``: the k-th compound of a dyadic between grade-1 spaces."""
    if d.domain.grade != 1 or d.codomain.grade != 1:
        raise TagError("compound needs a dyadic between grade-1 spaces")
    if k not in (1, 2, 3, 4):
        raise ValueError(f"compound order must be 1..4, got {k}")
    return Dyadic(SpaceTag(d.domain.family, k), SpaceTag(d.codomain.family, k),
                  compound_matrix(d.matrix, k))


def double_wedge_matrix(a, b):
    """Matrix of ``a ^^ b`` on grade 2, with ``(a^^b)|(x^y) = ax^by + bx^ay``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    pairs = ex.basis(2)
    out = np.zeros((6, 6), dtype=complex)
    for r, (i, j) in enumerate(pairs):
        for c, (k, l) in enumerate(pairs):
            out[r, c] = (a[i, k] * b[j, l] - a[i, l] * b[j, k]
                         + b[i, k] * a[j, l] - b[i, l] * a[j, k])
    return out


def double_wedge(a, b):
    if (a.domain, a.codomain) != (b.domain, b.codomain) or a.domain.grade != 1:
        raise TagError("double wedge needs two grade-1 dyadics with equal tags")
    return Dyadic(SpaceTag(a.domain.family, 2), SpaceTag(a.codomain.family, 2),
                  double_wedge_matrix(a.matrix, b.matrix))


# -- antisymmetric dyadics and the Hehl-Obukhov split -------------------------

def _check_traceless(m, atol):
    tr = np.trace(m)
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(tr) > atol * scale:
        raise ValueError(f"dyadic must be trace-free, trace = {tr:.6g}")


def antisym_from_traceless_matrix(bo, atol=1e-10):
    bo = np.asarray(bo, dtype=complex)
    _check_traceless(bo, atol)
    K = double_wedge_matrix(np.eye(4), bo)
    return ex.G @ K.T


def antisym_from_traceless(bo, atol=1e-10):
    """``e_N ⌊ (I ^^ Bo)^T`` for a trace-free ``Bo`` (vectors to vectors).

    The result maps two-forms to bivectors and its matrix is antisymmetric.
    """
    m = bo.matrix if isinstance(bo, Dyadic) else bo
    return Dyadic(F2, E2, antisym_from_traceless_matrix(m, atol))


def traceless_from_antisym_matrix(a):
    """Inverse of :func:`antisym_from_traceless_matrix` (least squares on 15 unknowns)."""
    basis_mats = []
    for i in range(4):
        for j in range(4):
            if i == j == 3:
                continue
            e = np.zeros((4, 4))
            e[i, j] = 1.0
            if i == j:
                e[3, 3] = -1.0
            basis_mats.append(e)
    cols = np.stack([antisym_from_traceless_matrix(e).ravel() for e in basis_mats], axis=1)
    coef, *_ = np.linalg.lstsq(cols, np.asarray(a, dtype=complex).ravel(), rcond=None)
    return np.einsum("n,nij->ij", coef, np.array(basis_mats))


@dataclass(frozen=True)
class HOParts:
    principal: Dyadic
    skewon: Dyadic
    axion_scalar: complex

    def reconstruct(self):
        ax = Dyadic.identity(self.principal.domain) * self.axion_scalar
        return self.principal + self.skewon + ax


def ho_decompose(M):
    """Split a medium dyadic (two-forms to two-forms) into principal, skewon and axion parts."""
    m = M.matrix if isinstance(M, Dyadic) else np.asarray(M, dtype=complex)
    if m.shape != (6, 6):
        raise TagError("ho_decompose needs a 6x6 medium dyadic")
    axion = np.trace(m) / 6
    mg = ex.G @ m
    skew_g = 0.5 * (mg - mg.T)
    skewon = ex.G @ skew_g
    principal = m - skewon - axion * np.eye(6)
    return HOParts(Dyadic(F2, F2, principal), Dyadic(F2, F2, skewon), complex(axion))


# -- dispersion dyadic --------------------------------------------------------

def double_contract_nu_matrix(mg, nu):
    """``D(nu)`` for one or many one-forms ``nu`` (shape (..., 4)).

    ``D(nu) | phi = nu ⌋ (Mg | (nu ^ phi))``.
    """
    T = ex.wedge_one_matrix()
    C = ex.contract_one_matrix()
    nu = np.asarray(nu, dtype=complex)
    wed = np.einsum("Iij,...i->...Ij", T, nu)        # (nu ^ .) as 6x4
    con = np.einsum("jIi,...i->...jI", C, nu)         # (nu ⌋ .) as 4x6
    return con @ np.asarray(mg) @ wed


def double_contract_nu(Mg, nu):
    m = Mg.matrix if isinstance(Mg, Dyadic) else Mg
    v = nu.coords if isinstance(nu, ex.KForm) else nu
    return Dyadic(F1, E1, double_contract_nu_matrix(m, v))
