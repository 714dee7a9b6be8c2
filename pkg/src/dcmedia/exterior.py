"""Fixed-basis exterior algebra over a four-dimensional space.

Vectors live on the ``e`` side (basis e1..e4), forms on the dual side
(basis eps1..eps4) with ``eps_i | e_j = delta_ij``.  Grade-k coordinates are
indexed by strictly increasing index tuples in lexicographic order, so the
grade-2 basis is (12), (13), (14), (23), (24), (34).

Everything here is plain numpy on complex coordinate arrays; the
:class:`KVector` and :class:`KForm` wrappers only add family/grade checks.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

DIM = 4
RTOL = 1e-10
ATOL = 1e-12

VECTOR = "vector"
FORM = "form"


def basis(grade):
    """Index tuples (0-based) of the grade-k basis, in canonical order."""
    if not 0 <= grade <= DIM:
        raise ValueError(f"grade {grade} outside 0..{DIM}")
    return tuple(combinations(range(DIM), grade))


def basis_labels(grade):
    """Human-readable 1-based labels, e.g. ``'12'`` for e1^e2."""
    return ["".join(str(i + 1) for i in idx) for idx in basis(grade)]


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


@lru_cache(maxsize=None)
def wedge_tensor(j, k):
    """Structure constants ``W[K, I, J]`` with ``(x ^ y)_K = W[K, I, J] x_I y_J``."""
    if j + k > DIM:
        raise ValueError(f"wedge of grades {j} and {k} exceeds dimension {DIM}")
    out_basis = {idx: n for n, idx in enumerate(basis(j + k))}
    W = np.zeros((comb(DIM, j + k), comb(DIM, j), comb(DIM, k)))
    for a, I in enumerate(basis(j)):
        for b, J in enumerate(basis(k)):
            s = _perm_sign(I + J)
            if s:
                W[out_basis[tuple(sorted(I + J))], a, b] = s
    W.setflags(write=False)
    return W


@lru_cache(maxsize=None)
def complement_matrix(grade):
    """Matrix of ``x -> e_N ⌊ x`` taking grade-k coordinates to grade 4-k.

    Defined by ``b | (e_N ⌊ a) = (b ^ a) | e_N``; the same table serves the
    vector side (``eps_N ⌊ x``).
    """
    W = wedge_tensor(DIM - grade, grade)
    L = W[0].copy()
    L.setflags(write=False)
    return L


# Grade-2 complement table; symmetric, squares to the identity.
G = complement_matrix(2)


def _as_coords(values, grade):
    arr = np.asarray(values, dtype=complex)
    if arr.shape != (comb(DIM, grade),):
        raise ValueError(
            f"grade {grade} needs {comb(DIM, grade)} coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


class _Graded:
    family = None

    __slots__ = ("grade", "coords")

    def __init__(self, grade, coords):
        grade = int(grade)
        if not 0 <= grade <= DIM:
            raise ValueError(f"grade {grade} outside 0..{DIM}")
        arr = _as_coords(coords, grade).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "grade", grade)
        object.__setattr__(self, "coords", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, grade):
        return cls(grade, np.zeros(comb(DIM, grade)))

    @classmethod
    def unit(cls, *indices):
        """Basis element from 1-based indices, e.g. ``KVector.unit(1, 2)``."""
        idx = [i - 1 for i in indices]
        grade = len(idx)
        out = np.zeros(comb(DIM, grade), dtype=complex)
        s = _perm_sign(idx)
        if s:
            out[basis(grade).index(tuple(sorted(idx)))] = s
        return cls(grade, out)

    def _check_same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.grade != self.grade:
            raise ValueError(f"grade mismatch: {self.grade} vs {other.grade}")

    def __add__(self, other):
        self._check_same(other)
        return type(self)(self.grade, self.coords + other.coords)

    def __sub__(self, other):
        self._check_same(other)
        return type(self)(self.grade, self.coords - other.coords)

    def __neg__(self):
        return type(self)(self.grade, -self.coords)

    def __mul__(self, scalar):
        return type(self)(self.grade, self.coords * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return type(self)(self.grade, self.coords / complex(scalar))

    def __xor__(self, other):
        return wedge(self, other)

    def norm(self):
        return float(np.linalg.norm(self.coords))

    def allclose(self, other, rtol=RTOL, atol=ATOL):
        self._check_same(other)
        scale = max(self.norm(), other.norm())
        return bool(np.max(np.abs(self.coords - other.coords), initial=0.0) <= atol + rtol * scale)

    def __repr__(self):
        terms = ", ".join(
            f"{lab}: {c:.6g}" for lab, c in zip(basis_labels(self.grade), self.coords) if c != 0)
        return f"{type(self).__name__}(grade={self.grade}, {{{terms}}})"


class KVector(_Graded):
    """Multivector of a single grade (vector side)."""

    family = VECTOR
    __slots__ = ()


class KForm(_Graded):
    """Differential form of a single grade (dual side)."""

    family = FORM
    __slots__ = ()


def vector(*coords):
    return KVector(1, coords)


def one_form(*coords):
    return KForm(1, coords)


def bivector(coords):
    return KVector(2, coords)


def two_form(coords):
    return KForm(2, coords)


def _family_class(family):
    return KVector if family == VECTOR else KForm


# -- array-level kernels ---------------------------------------------------

def wedge_coords(x, y, j, k):
    """Coordinates of ``x ^ y``; leading axes of ``x`` and ``y`` broadcast."""
    return np.einsum("kij,...i,...j->...k", wedge_tensor(j, k), x, y)


def contract_coords(a, x, j, k, side="left"):
    """Interior product of a grade-j element into a grade-k element of the dual family.

    ``side='left'`` gives ``a ⌋ x`` with ``b | (a ⌋ x) = (a ^ b) | x``;
    ``side='right'`` gives ``x ⌊ a`` with ``b | (x ⌊ a) = (b ^ a) | x``.
    """
    if j > k:
        raise ValueError(f"cannot contract grade {j} into grade {k}")
    if side == "left":
        return np.einsum("kil,...i,...k->...l", wedge_tensor(j, k - j), a, x)
    if side == "right":
        return np.einsum("kli,...i,...k->...l", wedge_tensor(k - j, j), a, x)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


@lru_cache(maxsize=None)
def wedge_one_matrix():
    """``T[I, i, j]`` with ``(nu ^ phi)_I = T[I, i, j] nu_i phi_j`` for one-forms."""
    return wedge_tensor(1, 1)


@lru_cache(maxsize=None)
def contract_one_matrix():
    """``C[j, I, i]`` with ``(nu ⌋ X)_j = C[j, I, i] nu_i X_I`` for bivector X."""
    W = wedge_tensor(1, 1)
    C = np.einsum("Iij->jIi", W).copy()
    C.setflags(write=False)
    return C


def antisym_matrix(x):
    """4x4 antisymmetric matrix ``X[i, j]`` of grade-2 coordinates."""
    x = np.asarray(x)
    X = np.zeros(x.shape[:-1] + (DIM, DIM), dtype=complex)
    for n, (i, j) in enumerate(basis(2)):
        X[..., i, j] = x[..., n]
        X[..., j, i] = -x[..., n]
    return X


def pair_coords(a, x):
    return np.einsum("...i,...i->...", a, x)


def dot_coords(x, y):
    return np.einsum("...i,ij,...j->...", x, G, y)


# -- object-level operations -----------------------------------------------

def wedge(x, y):
    """Exterior product of two elements of the same family."""
    if type(x) is not type(y):
        raise TypeError("wedge needs two vectors or two forms, not a mix")
    if x.grade + y.grade > DIM:
        raise ValueError(f"grade overflow: {x.grade} + {y.grade} > {DIM}")
    return type(x)(x.grade + y.grade, wedge_coords(x.coords, y.coords, x.grade, y.grade))


def pair(a, x):
    """Duality product ``a | x`` of a k-form with a k-vector (either order)."""
    if isinstance(a, KVector) and isinstance(x, KForm):
        a, x = x, a
    if not (isinstance(a, KForm) and isinstance(x, KVector)):
        raise TypeError("pair needs one form and one vector")
    if a.grade != x.grade:
        raise ValueError(f"grade mismatch in pairing: {a.grade} vs {x.grade}")
    return complex(pair_coords(a.coords, x.coords))


def contract(a, x, side="left"):
    """Interior product of ``a`` into ``x``; families must differ.

    The result belongs to ``x``'s family with grade ``x.grade - a.grade``.
    Convention anchor: ``nu ⌋ (a ^ b) = (nu|a) b - (nu|b) a``.
    """
    if type(a) is type(x) or not isinstance(a, _Graded) or not isinstance(x, _Graded):
        raise TypeError("contract needs one form and one vector")
    if a.grade > x.grade:
        raise ValueError(f"cannot contract grade {a.grade} into grade {x.grade}")
    out = contract_coords(a.coords, x.coords, a.grade, x.grade, side)
    return type(x)(x.grade - a.grade, out)


def lift_eN(phi):
    """``e_N ⌊ phi``: a k-form to its complementary (4-k)-vector."""
    if not isinstance(phi, KForm):
        raise TypeError("lift_eN takes a form")
    return KVector(DIM - phi.grade, complement_matrix(phi.grade) @ phi.coords)


def unlift(x):
    """``eps_N ⌊ x``: a k-vector to its complementary (4-k)-form; inverse of lift_eN."""
    if not isinstance(x, KVector):
        raise TypeError("unlift takes a multivector")
    return KForm(DIM - x.grade, complement_matrix(x.grade) @ x.coords)


def dot(x, y):
    """Neutral dot product of two two-forms (or two bivectors).

    ``Phi . Psi = Phi | (e_N ⌊ Psi)``; symmetric with signature (3, 3).
    """
    if type(x) is not type(y) or x.grade != 2 or y.grade != 2:
        raise TypeError("dot takes two two-forms or two bivectors")
    return complex(dot_coords(x.coords, y.coords))


def is_simple(x, rtol=1e-9):
    """True when a grade-2 element satisfies ``x . x = 0`` to tolerance."""
    return abs(dot_coords(x.coords, x.coords)) <= rtol * max(x.norm(), ATOL) ** 2


def factor_simple(x):
    """Return one-grade factors ``(u, v)`` with ``u ^ v == x`` for a simple x.

    Raises ``ValueError`` when ``x`` is zero or not simple.
    """
    if x.grade != 2:
        raise ValueError("factor_simple takes a grade-2 element")
    if x.norm() == 0:
        raise ValueError("zero element has no factorization")
    if not is_simple(x):
        raise ValueError("element is not simple (x . x != 0)")
    cls = type(x)
    X = antisym_matrix(x.coords)
    i, j = np.unravel_index(np.argmax(np.abs(X)), X.shape)
    # X = u v^T - v u^T; column j and row i of X span {u, v} when X[i, j] != 0.
    u_el = cls(1, X[:, j] / X[i, j])
    v_el = cls(1, X[i, :])
    w = wedge(u_el, v_el)
    ratio = np.vdot(w.coords, x.coords) / np.vdot(w.coords, w.coords)
    return u_el, v_el * ratio
