"""Solving the quadratic medium equation ``M^T . M = alpha e_N⌊I^(2)T``.

Every solution with ``alpha != 0`` is either a P-medium ``M = M0 P^(2)`` or a
Q-medium ``Mg = M0 Q^(2)``.  The 3D blocks decide which: in each of the
pairs ``(alpha_d, mu_inv)`` and ``(eps_prime, beta_d)`` exactly one block is
invertible.  Invertible ``alpha_d, beta_d`` leads to a P-medium, invertible
``eps_prime, mu_inv`` to a Q-medium; the two mixed combinations are
inconsistent with the equation.

In both cases an auxiliary 3x3 dyadic ``X`` has the uniaxial form
``X = A I + w a^T / A`` (a double eigenvalue ``A``), and the recovered
4x4 dyadic is assembled from ``X``, ``a``, ``w`` and one block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .. import exterior as ex
from ..dyadics import E1, F1, INVERTIBLE_COND, Dyadic, compound_matrix
from ..errors import ClassificationError
from .medium import Medium, as_matrix
from .threed import J, split_3d

log = logging.getLogger(__name__)

G = ex.G

# condition numbers closer than this to the cutoff are reported as borderline
_WARN_INVERTIBLE = 1e8
_WARN_SINGULAR = 1e14


@dataclass(frozen=True)
class QuadraticClassification:
    kind: str                 # "P-medium" or "Q-medium"
    recovered: Dyadic         # P (one-forms -> one-forms) or Q (one-forms -> vectors)
    scale: complex            # M0
    invertible_pair: dict     # block name -> bool
    residual: float           # relative reconstruction error
    A: complex = 0j           # double eigenvalue of X
    X: np.ndarray | None = field(default=None, repr=False)
    conditions: dict = field(default_factory=dict)
    warnings: tuple = ()

    def reconstruct(self):
        """The medium dyadic ``M`` (two-forms to two-forms)."""
        m = self.scale * compound_matrix(self.recovered.matrix, 2)
        return m if self.kind == "P-medium" else G @ m


def _vex(K):
    """Axial vector of an antisymmetric 3x3 matrix."""
    return np.array([K[2, 1], K[0, 2], K[1, 0]])


def _double_eigenvalue(X):
    """The ``A`` for which ``X - A I`` has rank one."""
    ev = np.linalg.eigvals(X)
    cands = list(ev) + [(ev[i] + ev[j]) / 2 for i in range(3) for j in range(i + 1, 3)]

    def defect(A):
        s = np.linalg.svd(X - A * np.eye(3), compute_uv=False)
        return s[1] / max(s[0], abs(A), 1e-300)

    return complex(min(cands, key=defect))


def _normalize(m):
    """Scale so that the first entry of non-negligible size is +1; returns (m, c)."""
    flat = m.ravel()
    big = np.max(np.abs(flat))
    k = int(np.argmax(np.abs(flat) > 1e-8 * big))
    c = flat[k]
    return m / c, c


def quadratic_residual(M, alpha):
    """Relative defect of ``M^T . M = alpha e_N⌊I^(2)T`` (with ``M^T . M = M^T G M``)."""
    m = M.M.matrix if isinstance(M, Medium) else as_matrix(M, (6, 6))
    lhs = m.T @ G @ m
    return float(np.linalg.norm(lhs - alpha * G) / max(np.linalg.norm(lhs), abs(alpha), 1e-300))


def classify_quadratic_medium(M, alpha, tol=1e-8, cond_limit=INVERTIBLE_COND):
    """Classify a solution of the quadratic medium equation as a P- or Q-medium.

    Raises ``ValueError`` when the input does not satisfy the equation and
    :class:`ClassificationError` for the degenerate axion-only solution and
    for inconsistent block-invertibility patterns.
    """
    m = M.M.matrix if isinstance(M, Medium) else as_matrix(M, (6, 6))
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    res = quadratic_residual(m, alpha)
    if res > tol:
        raise ValueError(f"medium does not satisfy the quadratic equation (residual {res:.3g})")

    a0 = np.trace(m) / 6
    if np.linalg.norm(m - a0 * np.eye(6)) <= tol * np.linalg.norm(m):
        raise ClassificationError(
            "degenerate: axion-only medium; both reconstructions trivial (P = I, scale = axion)")

    sp = split_3d(m)
    conds = {name: float(np.linalg.cond(b)) for name, b in
             zip(("alpha_d", "eps_prime", "mu_inv", "beta_d"), sp.blocks())}
    inv = {k: c < cond_limit for k, c in conds.items()}
    warnings = [f"ill-conditioned classification: cond({k}) = {c:.3g}"
                for k, c in conds.items()
                if (inv[k] and c > _WARN_INVERTIBLE) or (not inv[k] and c < _WARN_SINGULAR)]
    for w in warnings:
        log.warning(w)

    pair1 = (inv["alpha_d"], inv["mu_inv"])
    pair2 = (inv["eps_prime"], inv["beta_d"])
    if pair1[0] == pair1[1] or pair2[0] == pair2[1]:
        raise ClassificationError(
            f"impasse: exactly one block of each pair must be invertible, got {inv}")

    al, ep, mi, be = sp.blocks()
    a = J @ _vex(al.T @ J @ mi)
    w = _vex(be.T @ J @ ep)

    if inv["alpha_d"] and inv["beta_d"]:
        kind = "P-medium"
        X = J @ al.T @ J @ be
        A = _double_eigenvalue(X)
        dX, dB = np.linalg.det(X), np.linalg.det(be)
        f = np.append(be @ w, dB)
        v = np.append(a, A)
        R = dX * np.pad(be, ((0, 1), (0, 1))) - A * np.outer(f, v)
        scale = 1 / (A ** 2 * dX * dB)
        tags = (F1, F1)
    elif inv["eps_prime"] and inv["mu_inv"]:
        kind = "Q-medium"
        X = J @ mi.T @ J @ ep
        A = _double_eigenvalue(X)
        Y = J @ np.linalg.inv(mi)
        dY = np.linalg.det(Y)
        f = np.append(Y.T @ w, -A ** 2 * dY)
        v = np.append(a, -A)
        R = np.pad(Y.T @ X, ((0, 1), (0, 1))) - np.outer(f, v) / A
        scale = -1 / (A ** 2 * dY)
        tags = (F1, E1)
    else:
        raise ClassificationError(f"impasse: mixed invertibility pattern {inv}")

    R, c = _normalize(R)
    scale = scale * c ** 2
    out = QuadraticClassification(kind, Dyadic(*tags, R), complex(scale), inv, 0.0,
                                  A, X, conds, tuple(warnings))
    err = np.linalg.norm(out.reconstruct() - m)
    object.__setattr__(out, "residual", float(err / np.linalg.norm(m)))
    return out
