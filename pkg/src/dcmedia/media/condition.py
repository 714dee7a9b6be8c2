"""The decomposability condition and its numerical inverse problem.

A medium is decomposable with respect to bivectors ``A``, ``B`` when

    alpha e_N⌊I^(2)T + beta (Mg + Mg^T) + gamma Mg^T . Mg = A B + B A

for scalars ``alpha, beta, gamma`` (``gamma`` normalized to 0 or 1).  The
condition is sufficient for every plane wave to satisfy ``A|Phi = 0`` or
``B|Phi = 0``; whether it is also necessary is not settled, so a failed
search is reported as "no witness found", never as a proof.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .. import exterior as ex
from .medium import Medium, _class_params, as_matrix, bivectors_ab

log = logging.getLogger(__name__)

G = ex.G


@dataclass(frozen=True)
class Dc1Witness:
    alpha: complex
    beta: complex
    gamma: int
    A: ex.KVector
    B: ex.KVector
    residual: float = 0.0

    def with_residual(self, mg):
        return Dc1Witness(self.alpha, self.beta, self.gamma, self.A, self.B,
                          dc1_residual(mg, self))


def _mg_matrix(mg):
    if isinstance(mg, Medium):
        return mg.Mg.matrix
    return as_matrix(mg, (6, 6))


def gram(mg):
    """``Mg^T . Mg = Mg^T | (eps_N ⌊ Mg)``."""
    return mg.T @ G @ mg


def condition_matrix(mg, alpha, beta, gamma):
    """Left-hand side of the decomposability condition."""
    return alpha * G + beta * (mg + mg.T) + gamma * gram(mg)


def dc1_residual(mg, witness):
    """Frobenius norm of the defect of the condition for ``witness``."""
    mg = _mg_matrix(mg)
    A, B = witness.A.coords, witness.B.coords
    S = condition_matrix(mg, witness.alpha, witness.beta, witness.gamma)
    return float(np.linalg.norm(S - np.outer(A, B) - np.outer(B, A)))


def witness_from_construction(medium):
    """Witness implied by the construction parameters of a DCM/SDCM medium."""
    kind = medium.kind
    mg = medium.Mg.matrix
    if kind in ("QDCM", "PDCM", "Q", "P"):
        p = _class_params(medium, ("QDCM", "PDCM", "Q", "P"))
        X = p["Q"] if "Q" in p else p["P"]
        det = np.linalg.det(X)
        # Mg' = Mg - alpha G - D C satisfies Mg'^T . Mg' = M^2 det(X) e_N⌊I^(2)T
        beta = -p["alpha"]
        alpha = beta * beta - p["M"] ** 2 * det
        A, B = bivectors_ab(medium)
        w = Dc1Witness(complex(alpha), complex(beta), 1, A, B)
    elif kind == "SDCM":
        p = _class_params(medium, ("SDCM",))
        r2 = np.sqrt(2.0)
        w = Dc1Witness(complex(-2 * p["alpha"]), 1 + 0j, 0,
                       ex.KVector(2, r2 * p["A"]), ex.KVector(2, r2 * p["B"]))
    elif kind == "axion":
        a0 = medium.provenance.params["alpha"]
        zero = ex.KVector.zero(2)
        w = Dc1Witness(complex(-2 * a0), 1 + 0j, 0, zero, zero)
    else:
        raise ValueError(f"no construction witness for class {kind!r}")
    return w.with_residual(mg)


# -- rank-2 symmetric factorization ------------------------------------------

def factor_symmetric_rank2(S):
    """Split a symmetric matrix of rank <= 2 as ``a b^T + b a^T``.

    The split is unique only up to ``(a, b) -> (c a, b / c)`` and swapping;
    the returned pair is balanced to equal norms.  Same-sign eigenvalue pairs
    of a real matrix give complex factors.
    """
    S = np.asarray(S, dtype=complex)
    S = 0.5 * (S + S.T)
    U, s, _ = np.linalg.svd(S)
    n = S.shape[0]
    if s[0] == 0:
        return np.zeros(n, complex), np.zeros(n, complex)
    W = U[:, :2]
    Cm = W.conj().T @ S @ W.conj()
    c11, c12, c22 = Cm[0, 0], 0.5 * (Cm[0, 1] + Cm[1, 0]), Cm[1, 1]
    if max(abs(c11), abs(c22)) <= 1e-14 * s[0]:
        a, b = np.array([1, 0], complex), np.array([0, c12], complex)
    else:
        swap = abs(c22) > abs(c11)
        if swap:
            c11, c22 = c22, c11
        # a = (1, t), b = (c11/2, c12 - t c11/2) with -c11 t^2 + 2 c12 t - c22 = 0
        disc = np.sqrt(complex(c12 * c12 - c11 * c22))
        t = (c12 + disc) / c11
        a = np.array([1, t], complex)
        b = np.array([c11 / 2, c12 - t * c11 / 2], complex)
        if swap:
            a, b = a[::-1], b[::-1]
    A, B = W @ a, W @ b
    na, nb = np.linalg.norm(A), np.linalg.norm(B)
    if na > 0 and nb > 0:
        r = np.sqrt(nb / na)
        A, B = A * r, B / r
    return A, B


# -- detection -----------------------------------------------------------------

def _tail_defect(S, rank=2):
    s = np.linalg.svd(S, compute_uv=False)
    return float(np.sqrt(np.sum(s[rank:] ** 2)))


def _polish(terms, const, p0, iters=40):
    """Gauss-Newton on the trailing 4x4 singular block of ``sum p_i T_i + const``."""
    p = np.array(p0, dtype=complex)
    for _ in range(iters):
        S = const + sum(pi * Ti for pi, Ti in zip(p, terms))
        U, _, Vh = np.linalg.svd(S)
        U4, V4 = U[:, 2:], Vh[2:].conj().T
        cols = np.stack([(U4.conj().T @ T @ V4).ravel() for T in terms], axis=1)
        rhs = -(U4.conj().T @ const @ V4).ravel()
        p_new, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
        step = np.max(np.abs(p_new - p))
        p = p_new
        if step <= 1e-15 * max(1.0, np.max(np.abs(p))):
            break
    return p


def _cluster4(eigs):
    """Tightest group of 4 eigenvalues: (spread, mean)."""
    d = np.abs(eigs[:, None] - eigs[None, :])
    order = np.argsort(d, axis=1)[:, :4]
    spread = np.take_along_axis(d, order, axis=1)[:, 3]
    i = int(np.argmin(spread))
    return float(spread[i]), complex(np.mean(eigs[order[i]]))


def _scan_gamma1(H, K, scale, grid):
    """Candidate ``beta`` values where ``G (beta H + K)`` has a 4-fold eigenvalue."""
    GH, GK = G @ H, G @ K

    def spread(beta):
        ev = np.linalg.eigvals(beta * GH + GK)
        return _cluster4(ev)[0]

    R = 3.0 * scale
    betas = np.linspace(-R, R, grid)
    ev = np.linalg.eigvals(betas[:, None, None] * GH + GK)
    d = np.abs(ev[:, :, None] - ev[:, None, :])
    sp = np.min(np.sort(d, axis=2)[:, :, 3], axis=1)
    # local minima of the spread along the grid
    idx = [i for i in range(1, grid - 1) if sp[i] <= sp[i - 1] and sp[i] <= sp[i + 1]]
    idx = sorted(idx, key=lambda i: sp[i])[:8]
    out = []
    h = betas[1] - betas[0]
    for i in idx:
        res = minimize_scalar(spread, bracket=None, bounds=(betas[i] - h, betas[i] + h),
                              method="bounded", options={"xatol": 1e-14 * scale})
        beta = float(res.x)
        out.append((beta, _cluster4(np.linalg.eigvals(beta * GH + GK))[1]))
    return out


def _scan_gamma1_complex(H, K, scale, grid):
    GH, GK = G @ H, G @ K

    def spread(x):
        return _cluster4(np.linalg.eigvals((x[0] + 1j * x[1]) * GH + GK))[0]

    R = 3.0 * scale
    xs = np.linspace(-R, R, grid)
    betas = (xs[:, None] + 1j * xs[None, :]).ravel()
    ev = np.linalg.eigvals(betas[:, None, None] * GH + GK)
    d = np.abs(ev[:, :, None] - ev[:, None, :])
    sp = np.min(np.sort(d, axis=2)[:, :, 3], axis=1)
    out = []
    for i in np.argsort(sp)[:8]:
        res = minimize(spread, [betas[i].real, betas[i].imag], method="Nelder-Mead",
                       options={"xatol": 1e-13 * scale, "fatol": 1e-15 * scale})
        beta = res.x[0] + 1j * res.x[1]
        out.append((beta, _cluster4(np.linalg.eigvals(beta * GH + GK))[1]))
    return out


def detect_dcm(mg, accept=1e-8, grid=801, gammas=(1, 0)):
    """Search for witnesses of the decomposability condition.

    For ``gamma = 1`` the pair ``(alpha, beta)`` is found where
    ``S = alpha G + beta (Mg + Mg^T) + Mg^T . Mg`` drops to rank 2: a grid
    scan in ``beta`` for a 4-fold eigenvalue of ``G (beta H + K)``, bounded
    refinement, then Gauss-Newton on the trailing singular block.  For
    ``gamma = 0`` the 4-fold eigenvalue of ``G (Mg + Mg^T)`` gives ``alpha``
    directly.  A candidate is accepted when
    ``sigma_3^2 + ... + sigma_6^2 <= accept * ||S||_F^2``.

    ``gamma = 1`` candidates whose ``beta`` runs far outside the scan box are
    dropped: they approximate the ``gamma = 0`` witness at infinity.

    Returns all accepted witnesses (possibly none), best relative residual first.
    """
    mg = _mg_matrix(mg)
    H = mg + mg.T
    K = gram(mg)
    scale = max(np.linalg.norm(mg, 2), 1e-300)
    is_real = np.max(np.abs(mg.imag), initial=0.0) <= 1e-14 * scale
    found = []

    def consider(alpha, beta, gamma):
        if gamma == 1 and abs(beta) > 100 * scale:
            # polish ran off to infinity: gamma/beta -> 0 is the gamma = 0 family
            return
        S = condition_matrix(mg, alpha, beta, gamma)
        nS = np.linalg.norm(S)
        tail = _tail_defect(S)
        if tail ** 2 > accept * max(nS ** 2, 1e-300) and tail > 1e-12 * scale ** 2:
            return
        if is_real:
            alpha, beta = complex(alpha.real), complex(beta.real)
            S = condition_matrix(mg, alpha, beta, gamma)
        for w in found:
            if (w.gamma == gamma and abs(w.alpha - alpha) <= 1e-7 * (1 + abs(alpha))
                    and abs(w.beta - beta) <= 1e-7 * (1 + abs(beta))):
                return
        A, B = factor_symmetric_rank2(S)
        w = Dc1Witness(complex(alpha), complex(beta), gamma, ex.KVector(2, A), ex.KVector(2, B))
        found.append(w.with_residual(mg))

    if 1 in gammas:
        if is_real:
            cands = _scan_gamma1(H, K, scale, grid)
        else:
            cands = _scan_gamma1_complex(H, K, scale, max(41, int(np.sqrt(grid)) * 2))
        for beta, lam in cands:
            alpha, beta = _polish([G, H], K, [-lam, beta])
            consider(alpha, beta, 1)
    if 0 in gammas:
        _, lam = _cluster4(np.linalg.eigvals(G @ H))
        (alpha,) = _polish([G], H, [-lam])
        consider(alpha, 1 + 0j, 0)
    if not found:
        log.info("no witness found under this search (not a proof of non-decomposability)")
    return sorted(found, key=lambda w: w.residual / max(
        np.linalg.norm(condition_matrix(mg, w.alpha, w.beta, w.gamma)), 1e-300))
