"""Medium dyadics and constructors for the decomposable classes.

A medium is stored through its dyadic ``M`` (two-forms to two-forms); the
modified dyadic ``Mg = e_N ⌊ M`` (two-forms to bivectors) is kept alongside.
Constructors record what they were built from in :class:`Provenance` so
that later stages (bivector recovery, predicted dispersion factors) can use
the construction parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import exterior as ex
from ..dyadics import (E2, F2, INVERTIBLE_COND, Dyadic, antisym_from_traceless_matrix,
                       compound_matrix)
from ..errors import SingularError

G = ex.G

KINDS = ("QDCM", "PDCM", "SDCM", "Q", "P", "axion", "raw")


@dataclass(frozen=True)
class Provenance:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown medium class {self.kind!r}")


@dataclass(frozen=True, eq=False)
class Medium:
    """Linear medium ``Psi = M | Phi`` together with ``Mg = e_N ⌊ M``."""

    M: Dyadic
    provenance: Provenance | None = None
    Mg: Dyadic = field(init=False, repr=False)

    def __post_init__(self):
        if (self.M.domain, self.M.codomain) != (F2, F2):
            raise ValueError("medium dyadic must map two-forms to two-forms")
        object.__setattr__(self, "Mg", Dyadic(F2, E2, G @ self.M.matrix))

    @classmethod
    def from_matrix(cls, m, provenance=None):
        return cls(Dyadic(F2, F2, m), provenance)

    @classmethod
    def from_mg(cls, mg, provenance=None):
        return cls(Dyadic(F2, F2, G @ np.asarray(mg, dtype=complex)), provenance)

    @property
    def kind(self):
        return self.provenance.kind if self.provenance else "raw"

    def with_axion(self, alpha):
        """Same medium plus ``alpha`` times the identity; provenance is dropped."""
        return Medium.from_matrix(self.M.matrix + alpha * np.eye(6))


def as_matrix(x, shape=None):
    if isinstance(x, Dyadic):
        m = x.matrix
    else:
        m = np.asarray(x, dtype=complex)
    if shape is not None and m.shape != shape:
        raise ValueError(f"expected shape {shape}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("entries must be finite")
    return m


def as_bivector(x):
    if isinstance(x, ex.KForm):
        raise TypeError("expected a bivector, got a form")
    if isinstance(x, ex.KVector):
        if x.grade != 2:
            raise ValueError("expected a bivector")
        return np.array(x.coords)
    return as_matrix(x, (6,))


def _scalar(x):
    z = complex(x)
    if not np.isfinite(z):
        raise ValueError("scalar must be finite")
    return z


def axion_medium(alpha):
    alpha = _scalar(alpha)
    return Medium.from_matrix(alpha * np.eye(6), Provenance("axion", {"alpha": alpha}))


def raw_medium(m):
    return Medium.from_matrix(as_matrix(m, (6, 6)), Provenance("raw", {}))


def construct_qdcm(alpha, M, Q, D, C):
    """``Mg = alpha e_N⌊I^(2)T + M Q^(2) + D C``."""
    alpha, M = _scalar(alpha), _scalar(M)
    Q = as_matrix(Q, (4, 4))
    D, C = as_bivector(D), as_bivector(C)
    mg = alpha * G + M * compound_matrix(Q, 2) + np.outer(D, C)
    params = {"alpha": alpha, "M": M, "Q": Q, "D": D, "C": C,
              "Q_invertible": bool(np.linalg.cond(Q) < INVERTIBLE_COND)}
    return Medium.from_mg(mg, Provenance("QDCM", params))


def construct_pdcm(alpha, M, P, D, C):
    """``Mg = alpha e_N⌊I^(2)T + M e_N⌊P^(2) + D C``."""
    alpha, M = _scalar(alpha), _scalar(M)
    P = as_matrix(P, (4, 4))
    D, C = as_bivector(D), as_bivector(C)
    mg = alpha * G + M * (G @ compound_matrix(P, 2)) + np.outer(D, C)
    params = {"alpha": alpha, "M": M, "P": P, "D": D, "C": C,
              "P_invertible": bool(np.linalg.cond(P) < INVERTIBLE_COND)}
    return Medium.from_mg(mg, Provenance("PDCM", params))


def construct_sdcm(alpha, Bo, A, B):
    """``Mg = alpha e_N⌊I^(2)T + e_N⌊(I^^Bo)^T + A B + B A`` with trace-free ``Bo``."""
    alpha = _scalar(alpha)
    Bo = as_matrix(Bo, (4, 4))
    A, B = as_bivector(A), as_bivector(B)
    mg = alpha * G + antisym_from_traceless_matrix(Bo) + np.outer(A, B) + np.outer(B, A)
    return Medium.from_mg(mg, Provenance("SDCM", {"alpha": alpha, "Bo": Bo, "A": A, "B": B}))


def q_medium(M, Q):
    """Plain Q-medium ``Mg = M Q^(2)``."""
    med = construct_qdcm(0, M, Q, np.zeros(6), np.zeros(6))
    return Medium(med.M, Provenance("Q", med.provenance.params))


def p_medium(M, P):
    """Plain P-medium ``M = M P^(2)``."""
    med = construct_pdcm(0, M, P, np.zeros(6), np.zeros(6))
    return Medium(med.M, Provenance("P", med.provenance.params))


def _class_params(medium, kinds):
    prov = medium.provenance
    if prov is None or prov.kind not in kinds:
        found = prov.kind if prov else None
        raise ValueError(f"medium provenance must be one of {kinds}, got {found!r}")
    return prov.params


def bivector_map(kind, M, X):
    """The linear part ``L`` of ``B = L D + (D.D)/2 C``.

    QDCM: ``L = M Q^(2)T . (= M Q^(2)T e_N-lift)``; PDCM: ``L D = M D | P^(2)``.
    """
    X = as_matrix(X, (4, 4))
    if kind in ("QDCM", "Q"):
        return M * compound_matrix(X, 2).T @ G
    if kind in ("PDCM", "P"):
        return M * compound_matrix(X, 2).T
    raise ValueError(f"no bivector map for class {kind!r}")


def bivectors_ab(medium):
    """Recover ``(A, B)`` of a QDCM or PDCM from its construction parameters.

    ``A = C`` and ``B = L D + (D.D)/2 C`` with ``L`` from :func:`bivector_map`.
    """
    p = _class_params(medium, ("QDCM", "PDCM", "Q", "P"))
    X = p["Q"] if "Q" in p else p["P"]
    D, C = p["D"], p["C"]
    L = bivector_map(medium.provenance.kind, p["M"], X)
    B = L @ D + 0.5 * ex.dot_coords(D, D) * C
    return ex.KVector(2, C), ex.KVector(2, B)


def solve_d_from_ab(kind, M, X, A, B, cond_limit=INVERTIBLE_COND):
    """All bivectors ``D`` with ``B = L D + (D.D)/2 A`` (QDCM/PDCM).

    Writing ``t = (D.D)/2`` gives ``D = L^-1 (B - t A)`` and a scalar
    quadratic for ``t``; every root is returned (complex roots included).
    """
    M = _scalar(M)
    A, B = as_bivector(A), as_bivector(B)
    L = bivector_map(kind, M, X)
    if np.linalg.cond(L) >= cond_limit:
        raise SingularError("bivector map L is singular; D cannot be solved for")
    u = np.linalg.solve(L, B)
    v = np.linalg.solve(L, A)
    uu, uv, vv = (ex.dot_coords(u, u), ex.dot_coords(u, v), ex.dot_coords(v, v))
    # (vv/2) t^2 - (uv + 1) t + uu/2 = 0
    a2, a1, a0 = 0.5 * vv, -(uv + 1.0), 0.5 * uu
    scale = max(abs(a2), abs(a1), abs(a0), 1e-300)
    if abs(a2) <= 1e-14 * scale:
        if abs(a1) <= 1e-14 * scale:
            raise SingularError("degenerate quadratic for D.D")
        ts = [-a0 / a1]
    else:
        disc = np.sqrt(complex(a1 * a1 - 4 * a2 * a0))
        q = -0.5 * (a1 + (disc if (np.conj(a1) * disc).real >= 0 else -disc))
        ts = [q / a2, a0 / q] if q != 0 else [0j, 0j]
    return [ex.KVector(2, u - t * v) for t in ts]
