"""Three-dimensional views of a medium dyadic.

Two-form coordinates split into a spatial triple (12), (13), (23) and a
temporal triple (14), (24), (34).  With ``Phi = B + E ^ eps4`` and
``Psi = D - H ^ eps4`` the medium equation reads

    D = alpha | B + eps' | E,      H = mu^-1 | B + beta | E.

Gibbsian vectors use the spatial complement ``J`` (``e123 ⌊``), which maps
two-form coordinates to vector coordinates and back (``J @ J = I``):

    e123⌊D = eps_g E + xi_g H,     e123⌊B = zeta_g E + mu_g H.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dyadics import INVERTIBLE_COND, compound_matrix
from ..errors import SingularError
from .medium import Medium, as_matrix, construct_sdcm

SPATIAL = [0, 1, 3]
TEMPORAL = [2, 4, 5]

J = np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])
J.setflags(write=False)

_PAIRS3 = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class ThreeDSplit:
    alpha_d: np.ndarray   # two-forms -> two-forms
    eps_prime: np.ndarray  # one-forms -> two-forms
    mu_inv: np.ndarray    # two-forms -> one-forms
    beta_d: np.ndarray    # one-forms -> one-forms

    def __post_init__(self):
        for name in ("alpha_d", "eps_prime", "mu_inv", "beta_d"):
            m = as_matrix(getattr(self, name), (3, 3)).copy()
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    def blocks(self):
        return self.alpha_d, self.eps_prime, self.mu_inv, self.beta_d


@dataclass(frozen=True)
class GibbsianMedium:
    eps: np.ndarray
    xi: np.ndarray
    zeta: np.ndarray
    mu: np.ndarray
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("eps", "xi", "zeta", "mu"):
            m = as_matrix(getattr(self, name), (3, 3)).copy()
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    def matrix(self):
        return np.block([[self.eps, self.xi], [self.zeta, self.mu]])


# -- small 3D helpers ---------------------------------------------------------

def wedge3(g):
    """Matrix of the one-form map ``E -> g ^ E`` into spatial two-form coordinates."""
    g = np.asarray(g, dtype=complex)
    W = np.zeros((3, 3), dtype=complex)
    for r, (i, j) in enumerate(_PAIRS3):
        W[r, j] += g[i]
        W[r, i] -= g[j]
    return W


def contract3(c):
    """Matrix of ``B -> c ⌋ B`` (vector into spatial two-form, giving a one-form)."""
    c = np.asarray(c, dtype=complex)
    K = np.zeros((3, 3), dtype=complex)
    for r, (i, j) in enumerate(_PAIRS3):
        K[j, r] += c[i]
        K[i, r] -= c[j]
    return K


def derivation3(C):
    """Matrix of ``I ^^ C`` on spatial bivectors: ``x^y -> Cx^y + x^Cy``."""
    C = np.asarray(C, dtype=complex)
    out = np.zeros((3, 3), dtype=complex)
    for r, (i, j) in enumerate(_PAIRS3):
        for c, (k, l) in enumerate(_PAIRS3):
            out[r, c] = ((C[i, k] if j == l else 0) - (C[i, l] if j == k else 0)
                         + (C[j, l] if i == k else 0) - (C[j, k] if i == l else 0))
    return out


def _m(x):
    return x.M.matrix if isinstance(x, Medium) else as_matrix(x, (6, 6))


# -- split / join ---------------------------------------------------------------

def split_3d(M):
    m = _m(M)
    s, t = np.ix_(SPATIAL, SPATIAL), np.ix_(SPATIAL, TEMPORAL)
    ts, tt = np.ix_(TEMPORAL, SPATIAL), np.ix_(TEMPORAL, TEMPORAL)
    return ThreeDSplit(m[s], m[t], -m[ts], -m[tt])


def join_3d(split, provenance=None):
    m = np.zeros((6, 6), dtype=complex)
    m[np.ix_(SPATIAL, SPATIAL)] = split.alpha_d
    m[np.ix_(SPATIAL, TEMPORAL)] = split.eps_prime
    m[np.ix_(TEMPORAL, SPATIAL)] = -split.mu_inv
    m[np.ix_(TEMPORAL, TEMPORAL)] = -split.beta_d
    return Medium.from_matrix(m, provenance)


# -- Gibbsian conversions -----------------------------------------------------

def _inv(m, name):
    if np.linalg.cond(m) >= INVERTIBLE_COND:
        raise SingularError(f"{name} is not invertible")
    return np.linalg.inv(m)


def gibbsian_from_4d(M):
    sp = split_3d(M)
    mu_g_inv = sp.mu_inv @ J
    mu_g = _inv(mu_g_inv, "mu_inv block")
    zeta = -mu_g @ sp.beta_d
    xi = J @ sp.alpha_d @ J @ mu_g
    eps = J @ sp.eps_prime + xi @ mu_g_inv @ zeta
    return GibbsianMedium(eps, xi, zeta, mu_g)


def fourd_from_gibbsian(g, provenance=None):
    mgi = _inv(g.mu, "mu_g")
    sp = ThreeDSplit(
        alpha_d=J @ g.xi @ mgi @ J,
        eps_prime=J @ (g.eps - g.xi @ mgi @ g.zeta),
        mu_inv=mgi @ J,
        beta_d=-mgi @ g.zeta,
    )
    return join_3d(sp, provenance)


def uniaxial_gibbsian(eps_t, eps_z, mu_t, mu_z):
    """Uniaxial medium with axis ``u_z`` and no magnetoelectric coupling.

    ``provenance['te_tm_unique']`` is False when ``eps_t mu_z == mu_t eps_z``;
    the TE/TM split then still exists but is not unique.
    """
    det = complex(eps_t) * mu_z - complex(mu_t) * eps_z
    scale = max(abs(eps_t * mu_z), abs(mu_t * eps_z), 1e-300)
    prov = {"class": "uniaxial", "params": [eps_t, eps_z, mu_t, mu_z],
            "te_tm_determinant": det, "te_tm_unique": bool(abs(det) > 1e-12 * scale)}
    z = np.zeros((3, 3))
    return GibbsianMedium(np.diag([eps_t, eps_t, eps_z]), z, z,
                          np.diag([mu_t, mu_t, mu_z]), prov)


# -- closed-form 3D components -------------------------------------------------

def pdcm_3d_components(alpha, M, P, D, C):
    """The four 3D blocks of a PDCM in closed form.

    ``P = [[Ps, pi], [p^T, p0]]`` acting on one-form coordinates; bivectors
    split as ``D = Ds + d3 ^ e4`` (spatial coordinates, temporal vector).
    """
    P = as_matrix(P, (4, 4))
    D, C = as_matrix(D, (6,)), as_matrix(C, (6,))
    Ps, pi, p, p0 = P[:3, :3], P[:3, 3], P[3, :3], P[3, 3]
    Ds, d3 = D[SPATIAL], D[TEMPORAL]
    Cs, c3 = C[SPATIAL], C[TEMPORAL]
    I = np.eye(3)
    return ThreeDSplit(
        alpha_d=alpha * I + M * compound_matrix(Ps, 2) + np.outer(J @ d3, Cs),
        eps_prime=-M * wedge3(pi) @ Ps + np.outer(J @ d3, c3),
        mu_inv=M * Ps @ contract3(p) - np.outer(J @ Ds, Cs),
        beta_d=-alpha * I - M * p0 * Ps + M * np.outer(pi, p) - np.outer(J @ Ds, c3),
    )


def sdcm_4d_params(Cs, gamma_s, c_s, a_s, b_s, alpha_s, beta_s):
    """``(Bo, A, B)`` assembled from their spatial/temporal pieces.

    ``Bo = Cs + e4 gamma_s + c_s eps4 - e4 eps4 tr(Cs)`` and
    ``A = e123⌊alpha_s + a_s ^ e4`` (likewise ``B``).
    """
    Cs = as_matrix(Cs, (3, 3))
    Bo = np.zeros((4, 4), dtype=complex)
    Bo[:3, :3] = Cs
    Bo[3, :3] = gamma_s
    Bo[:3, 3] = c_s
    Bo[3, 3] = -np.trace(Cs)
    A = np.zeros(6, dtype=complex)
    B = np.zeros(6, dtype=complex)
    A[SPATIAL], A[TEMPORAL] = J @ np.asarray(alpha_s), a_s
    B[SPATIAL], B[TEMPORAL] = J @ np.asarray(beta_s), b_s
    return Bo, A, B


def sdcm_from_3d(alpha, Cs, gamma_s, c_s, a_s, b_s, alpha_s, beta_s):
    return construct_sdcm(alpha, *sdcm_4d_params(Cs, gamma_s, c_s, a_s, b_s, alpha_s, beta_s))


def sdcm_3d_components(alpha, Cs, gamma_s, c_s, a_s, b_s, alpha_s, beta_s):
    """The four 3D blocks of an SDCM directly from its spatial parameters."""
    Cs = as_matrix(Cs, (3, 3))
    a, b = np.asarray(a_s, complex), np.asarray(b_s, complex)
    al, be = np.asarray(alpha_s, complex), np.asarray(beta_s, complex)
    I = np.eye(3)
    return ThreeDSplit(
        alpha_d=alpha * I + derivation3(Cs).T + J @ (np.outer(a, be) + np.outer(b, al)) @ J,
        eps_prime=-wedge3(gamma_s) + J @ (np.outer(a, b) + np.outer(b, a)),
        mu_inv=contract3(c_s) - (np.outer(al, be) + np.outer(be, al)) @ J,
        beta_d=-alpha * I - (Cs - np.trace(Cs) * I).T - (np.outer(al, b) + np.outer(be, a)),
    )


def sdcm_gyrotropic_example(lam, a_s, alpha_s, gamma_s, c_s):
    """Gibbsian dyadics of the SDCM with vanishing magnetoelectric parameters.

    Here ``alpha = 0``, ``Cs = 0``, ``b_s = lam a_s`` and
    ``beta_s = -lam alpha_s``; ``xi_g = zeta_g = 0``.
    """
    a, al = np.asarray(a_s, complex), np.asarray(alpha_s, complex)
    c = np.asarray(c_s, complex)
    ca = c @ al
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if abs(ca) <= 1e-14 * max(np.linalg.norm(c) * np.linalg.norm(al), 1e-300):
        raise SingularError("c_s|alpha_s = 0 makes mu_g singular")
    mu = (np.outer(c, c) + 2 * lam * ca * J @ wedge3(al)) / (2 * lam * ca ** 2)
    eps = 2 * lam * np.outer(a, a) - J @ wedge3(gamma_s)
    z = np.zeros((3, 3))
    prov = {"class": "SDCM-gyrotropic", "params": {"lam": lam}}
    return GibbsianMedium(eps, z, z, mu, prov)


def gyrotropic_sdcm_medium(lam, a_s, alpha_s, gamma_s, c_s):
    """4D SDCM whose Gibbsian form is :func:`sdcm_gyrotropic_example`."""
    a, al = np.asarray(a_s, complex), np.asarray(alpha_s, complex)
    return sdcm_from_3d(0, np.zeros((3, 3)), gamma_s, c_s, a, lam * a, al, -lam * al)


def gibbsian_fields(Phi, Psi):
    """Gibbsian field vectors ``(E, B, D, H)``.

    Split from ``Phi = B + E ^ eps4`` and ``Psi = D - H ^ eps4``.
    """
    P = np.asarray(getattr(Phi, "coords", Phi), dtype=complex)
    S = np.asarray(getattr(Psi, "coords", Psi), dtype=complex)
    return P[TEMPORAL], J @ P[SPATIAL], J @ S[SPATIAL], -S[TEMPORAL]
