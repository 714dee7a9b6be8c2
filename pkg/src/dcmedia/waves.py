"""Plane waves: dispersion dyadic, the quartic dispersion scalar and its factors.

For a plane wave with wave one-form ``nu`` the field two-form is
``Phi = nu ^ phi`` and the potential satisfies ``D(nu) | phi = 0`` with the
dispersion dyadic ``D(nu) = nu nu ⌋⌋ Mg``.  Nontrivial ``phi`` requires the
third compound of ``D(nu)`` to vanish; that compound is a multiple of the
dyad ``(e_N⌊nu)(e_N⌊nu)``, and the multiplier is the scalar quartic
``Delta(nu)`` computed here.

For decomposable media ``Delta`` splits into two quadratic forms, and waves
on the zero set of the first (second) satisfy ``A|Phi = 0`` (``B|Phi = 0``).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import exterior as ex
from .dyadics import E1, F1, INVERTIBLE_COND, Dyadic, compound_matrix, double_contract_nu_matrix
from .errors import DegenerateWaveError, DispersionError, InconsistencyError, SingularError
from .media.medium import Medium, _class_params, as_matrix

log = logging.getLogger(__name__)

G = ex.G

# default thresholds (construction 1e-9, classification 1e-8, separation 1e-3)
CLASSIFY_TOL = 1e-8
SEPARATION = 1e-3
FIT_TOL = 1e-8
DISPERSION_TOL = 1e-6


@lru_cache(maxsize=None)
def monomials():
    """Exponent tuples ``(a, b, c, d)`` with ``a+b+c+d = 4``, in lexicographic order."""
    return tuple(m for m in itertools.product(range(5), repeat=4) if sum(m) == 4)


@lru_cache(maxsize=None)
def _lattice():
    pts = np.array([p for p in itertools.product(range(-2, 3), repeat=4) if any(p)], float)
    pts.setflags(write=False)
    return pts


def monomial_matrix(nus):
    nus = np.asarray(nus)
    exps = np.array(monomials())
    return np.prod(nus[:, None, :] ** exps[None, :, :], axis=2)


@dataclass(frozen=True)
class QuadraticForm:
    """``q(nu) = nu | S | nu`` for a symmetric 4x4 ``S``."""

    S: np.ndarray

    def __post_init__(self):
        S = as_matrix(self.S, (4, 4))
        S = 0.5 * (S + S.T)
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    def __call__(self, nu):
        nu = np.asarray(nu, dtype=complex)
        return nu @ self.S @ nu

    def norm(self):
        return float(np.linalg.norm(self.S))

    def coefficients(self):
        """Coefficients on the monomials ``nu_i nu_j`` as a dict keyed by exponent tuple."""
        out = {}
        for i in range(4):
            for j in range(4):
                m = [0] * 4
                m[i] += 1
                m[j] += 1
                out[tuple(m)] = out.get(tuple(m), 0) + self.S[i, j]
        return out


@dataclass(frozen=True)
class QuarticForm:
    """Homogeneous quartic with coefficients on :func:`monomials`."""

    coeffs: np.ndarray
    fit_residual: float = 0.0

    def __post_init__(self):
        c = as_matrix(self.coeffs, (len(monomials()),)).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, nu):
        nu = np.asarray(nu, dtype=complex)
        vals = monomial_matrix(np.atleast_2d(nu)) @ self.coeffs
        return vals if nu.ndim > 1 else complex(vals[0])

    @classmethod
    def product(cls, q1, q2):
        index = {m: k for k, m in enumerate(monomials())}
        out = np.zeros(len(index), dtype=complex)
        for m1, v1 in q1.coefficients().items():
            for m2, v2 in q2.coefficients().items():
                out[index[tuple(np.add(m1, m2))]] += v1 * v2
        return cls(out)

    def along(self, fixed, free=3):
        """Univariate coefficients (highest degree first) in ``nu[free]`` with the rest fixed."""
        fixed = np.asarray(fixed, dtype=complex)
        others = [i for i in range(4) if i != free]
        poly = np.zeros(5, dtype=complex)
        for c, m in zip(self.coeffs, monomials()):
            term = c
            for k, i in enumerate(others):
                term = term * fixed[k] ** m[i]
            poly[4 - m[free]] += term
        return poly


@dataclass(frozen=True)
class FactorCheck:
    scale: complex
    max_rel_err: float


@dataclass(frozen=True)
class PlaneWave:
    nu: ex.KForm
    phi: ex.KForm
    Phi: ex.KForm
    Psi: ex.KForm
    residual: float = 0.0   # smallest/largest singular value of D(nu) off the gauge direction


@dataclass(frozen=True)
class WaveClass:
    tag: str                # "AWave", "BWave", "Both" or "Neither"
    residual_a: float
    residual_b: float


@dataclass
class DispersionReport:
    quartic: QuarticForm
    factors: tuple | None = None
    check: FactorCheck | None = None
    roots: list = field(default_factory=list)
    waves: list = field(default_factory=list)
    classes: list = field(default_factory=list)
    orthogonality: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


# -- dispersion dyadic and scalar ---------------------------------------------

def _mg(medium):
    if isinstance(medium, Medium):
        return medium.Mg.matrix, medium.M.matrix
    mg = as_matrix(medium, (6, 6))
    return mg, G @ mg


def _mg_no_axion(medium):
    mg, m = _mg(medium)
    return mg - (np.trace(m) / 6) * G


def dispersion_dyadic_matrix(medium, nu):
    """``D(nu)`` as a matrix, batched over leading axes of ``nu``."""
    return double_contract_nu_matrix(_mg_no_axion(medium), nu)


def dispersion_dyadic(medium, nu):
    v = nu.coords if isinstance(nu, ex.KForm) else np.asarray(nu, dtype=complex)
    return Dyadic(F1, E1, dispersion_dyadic_matrix(medium, v))


def _scalar_from_d(D, nu, check=False, rtol=1e-9):
    C3 = compound_matrix(D, 3)
    w = np.einsum("ij,...j->...i", ex.complement_matrix(1), nu)
    I = np.argmax(np.abs(w), axis=-1)
    wI = np.take_along_axis(w, I[..., None], axis=-1)[..., 0]
    num = np.take_along_axis(np.take_along_axis(C3, I[..., None, None], axis=-2),
                             I[..., None, None], axis=-1)[..., 0, 0]
    delta = num / wI ** 2
    if check:
        pred = delta[..., None, None] * w[..., :, None] * w[..., None, :]
        scale = np.maximum(np.max(np.abs(C3), axis=(-2, -1)), 1e-300)
        err = np.max(np.abs(C3 - pred), axis=(-2, -1)) / scale
        bad = (err > rtol) & (scale > 1e-300)
        if np.any(bad):
            raise InconsistencyError(
                "third compound of D(nu) is not proportional to the e_N-dyad "
                f"(rel err {np.max(err):.3g})")
    return delta


def dispersion_scalar(medium, nu, check=False):
    """``Delta(nu)`` with ``D(nu)^(3) = Delta(nu) (e_N⌊nu)(e_N⌊nu)``."""
    v = nu.coords if isinstance(nu, ex.KForm) else np.asarray(nu, dtype=complex)
    if not np.any(v):
        raise ValueError("wave one-form must be nonzero")
    D = dispersion_dyadic_matrix(medium, v)
    return complex(_scalar_from_d(D, v, check=check))


def quartic_coefficients(medium, tol=FIT_TOL):
    """Least-squares fit of the 35 quartic coefficients on the lattice ``{-2..2}^4 \\ 0``."""
    pts = _lattice()
    D = dispersion_dyadic_matrix(medium, pts)
    samples = _scalar_from_d(D, pts.astype(complex))
    V = monomial_matrix(pts)
    coef, *_ = np.linalg.lstsq(V, samples, rcond=None)
    top = np.max(np.abs(samples))
    resid = float(np.max(np.abs(V @ coef - samples)) / top) if top > 0 else 0.0
    if resid > tol:
        raise InconsistencyError(f"quartic fit residual {resid:.3g} exceeds {tol:g}")
    # snap coefficients that are pure rounding noise
    coef[np.abs(coef) <= 1e-14 * max(top, 1e-300)] = 0
    return QuarticForm(coef, resid)


# -- predicted factors ----------------------------------------------------------

def _inv(m, what):
    if np.linalg.cond(m) >= INVERTIBLE_COND:
        raise SingularError(f"{what} is not invertible")
    return np.linalg.inv(m)


def predicted_factors(medium):
    """Quadratic factors ``(q_A, q_B)`` of the dispersion quartic of a DCM/SDCM.

    Waves on the zero set of ``q_A`` satisfy ``A|Phi = 0`` and those of
    ``q_B`` satisfy ``B|Phi = 0``, with ``(A, B)`` as in
    :func:`dcmedia.media.bivectors_ab` (QDCM/PDCM) or the construction
    bivectors (SDCM).  In coordinates, with ``[X]`` the antisymmetric 4x4
    matrix of a bivector:

    * QDCM: ``Q`` and ``M Q - [C] Q^-1 [D]``
    * PDCM: ``[C] P^-1`` and ``[D] P``
    * SDCM: ``Bo [A]`` and ``Bo [B]``

    (each symmetrized).
    """
    kind = medium.kind
    A4 = ex.antisym_matrix
    if kind in ("QDCM", "Q"):
        p = _class_params(medium, ("QDCM", "Q"))
        Q, C, D = p["Q"], p["C"], p["D"]
        sb = p["M"] * Q
        if np.any(C) and np.any(D):
            sb = sb - A4(C) @ _inv(Q, "Q") @ A4(D)
        return QuadraticForm(Q), QuadraticForm(sb)
    if kind in ("PDCM", "P"):
        p = _class_params(medium, ("PDCM", "P"))
        P, C, D = p["P"], p["C"], p["D"]
        sa = A4(C) @ _inv(P, "P") if np.any(C) else np.zeros((4, 4))
        return QuadraticForm(sa), QuadraticForm(A4(D) @ P)
    if kind == "SDCM":
        p = _class_params(medium, ("SDCM",))
        return QuadraticForm(p["Bo"] @ A4(p["A"])), QuadraticForm(p["Bo"] @ A4(p["B"]))
    raise ValueError(f"no predicted factors for medium class {kind!r}")


def factor_check(quartic, q1, q2):
    """Best scale ``s`` with ``quartic ~ s q1 q2`` and the max relative coefficient error."""
    prod = QuarticForm.product(q1, q2).coeffs
    c = quartic.coeffs
    top_c = np.max(np.abs(c))
    k = int(np.argmax(np.abs(prod)))
    if abs(prod[k]) == 0:
        if top_c == 0:
            return FactorCheck(0j, 0.0)
        raise InconsistencyError("factor product vanishes but the quartic does not")
    s = c[k] / prod[k]
    ref = max(top_c, abs(s) * np.max(np.abs(prod)))
    return FactorCheck(complex(s), float(np.max(np.abs(c - s * prod)) / ref))


# -- root sampling ----------------------------------------------------------------

def _quadratic_roots(a2, a1, a0):
    disc = np.sqrt(complex(a1 * a1 - 4 * a2 * a0))
    q = -0.5 * (a1 + (disc if (np.conj(a1) * disc).real >= 0 else -disc))
    if q == 0:
        return [0j, 0j]
    return [q / a2, a0 / q]


def _fill(fixed, free, t):
    others = [i for i in range(4) if i != free]
    nu = np.zeros(4, dtype=complex)
    nu[others] = fixed
    nu[free] = t
    return nu


def roots_along_direction(q, nu_spatial, rtol=1e-12):
    """Complete ``nu`` with ``q(nu) = 0`` by solving for one component.

    ``nu_spatial`` fixes three components; the free one is ``nu_4`` unless its
    quadratic coefficient vanishes, then ``nu_3``, then ``nu_2`` (the given
    values fill the remaining slots in order).
    """
    fixed = np.asarray(nu_spatial, dtype=complex)
    if fixed.shape != (3,):
        raise ValueError("expected three fixed components")
    S = q.S
    scale = max(np.max(np.abs(S)), 1e-300)
    for free in (3, 2, 1):
        others = [i for i in range(4) if i != free]
        a2 = S[free, free]
        a1 = 2 * S[free, others] @ fixed
        a0 = fixed @ S[np.ix_(others, others)] @ fixed
        if abs(a2) > rtol * scale:
            return [_fill(fixed, free, t) for t in _quadratic_roots(a2, a1, a0)]
    # no usable quadratic term: linear in nu_4
    free = 3
    others = [0, 1, 2]
    a1 = 2 * S[free, others] @ fixed
    a0 = fixed @ S[np.ix_(others, others)] @ fixed
    if abs(a1) > rtol * scale * max(np.linalg.norm(fixed), 1e-300):
        return [_fill(fixed, free, -a0 / a1)]
    raise DispersionError("degenerate direction: the quadratic vanishes identically along the line")


def quartic_roots_along_direction(medium, nu_spatial, quartic=None, polish=8):
    """Roots of the full dispersion quartic in ``nu_4`` (general media), Newton-polished."""
    quartic = quartic if quartic is not None else quartic_coefficients(medium)
    fixed = np.asarray(nu_spatial, dtype=complex)
    poly = quartic.along(fixed)
    nz = np.flatnonzero(np.abs(poly) > 1e-13 * max(np.max(np.abs(poly)), 1e-300))
    if nz.size == 0:
        raise DispersionError(
            "degenerate direction: the quartic vanishes identically along the line")
    roots = np.roots(poly[nz[0]:])
    real = not np.any(poly.imag) and not np.any(fixed.imag)
    dpoly = np.polyder(poly)
    out = []
    for t in roots:
        for _ in range(polish):
            f = dispersion_scalar(medium, _fill(fixed, 3, t))
            d = np.polyval(dpoly, t)
            if d == 0:
                break
            step = f / d
            t = t - step
            if abs(step) <= 1e-16 * max(1.0, abs(t)):
                break
        if real and abs(t.imag) <= 1e-12 * max(1.0, abs(t)):
            t = complex(t.real)
        out.append(_fill(fixed, 3, t))
    return out


# -- plane-wave fields -----------------------------------------------------------

def _complement_basis(nu):
    """Orthonormal (Hermitian) basis of the coordinate complement of ``nu``."""
    u, _, _ = np.linalg.svd(nu.conj()[:, None])
    return u[:, 1:]


def solve_plane_wave(medium, nu, tol=DISPERSION_TOL):
    """Fields of the plane wave with wave one-form ``nu``.

    The potential is taken from the coordinate complement of ``nu`` (a gauge
    choice; ``Phi`` does not depend on it).
    """
    v = nu.coords if isinstance(nu, ex.KForm) else np.asarray(nu, dtype=complex)
    if not np.any(v):
        raise ValueError("wave one-form must be nonzero")
    mg, m = _mg(medium)
    D = dispersion_dyadic_matrix(medium, v)
    U = _complement_basis(v)
    _, s, Vh = np.linalg.svd(D @ U)
    ref = np.linalg.norm(mg - (np.trace(m) / 6) * G, 2) * np.linalg.norm(v) ** 2
    if s[0] <= 1e-12 * max(ref, 1e-300):
        raise DegenerateWaveError(
            "D(nu) vanishes: every potential solves, the wave field is not unique")
    rel = float(s[-1] / s[0])
    if rel > tol:
        raise DispersionError(
            f"nu does not satisfy the dispersion relation (sigma_min/sigma_max = {rel:.3g})")
    phi = U @ Vh[-1].conj()
    Phi = ex.wedge_coords(v, phi, 1, 1)
    if np.linalg.norm(Phi) <= 1e-12 * np.linalg.norm(v) * np.linalg.norm(phi):
        raise DegenerateWaveError("null space lies along nu; the field two-form vanishes")
    Psi = m @ Phi
    return PlaneWave(ex.KForm(1, v), ex.KForm(1, phi), ex.KForm(2, Phi), ex.KForm(2, Psi), rel)


def orthogonality(wave):
    """Relative ``|Phi.Phi|, |Phi.Psi|, |Psi.Psi|``."""
    P, S = wave.Phi.coords, wave.Psi.coords
    nP, nS = np.linalg.norm(P), max(np.linalg.norm(S), 1e-300)
    return (abs(ex.dot_coords(P, P)) / nP ** 2,
            abs(ex.dot_coords(P, S)) / (nP * nS),
            abs(ex.dot_coords(S, S)) / nS ** 2)


def _residual(X, Phi):
    x = X.coords if isinstance(X, ex.KVector) else np.asarray(X, dtype=complex)
    nx = np.linalg.norm(x)
    if nx == 0:
        return 0.0
    return float(abs(ex.pair_coords(Phi, x)) / (nx * np.linalg.norm(Phi)))


def classify_wave(wave, A, B, tol=CLASSIFY_TOL):
    ra, rb = _residual(A, wave.Phi.coords), _residual(B, wave.Phi.coords)
    tag = {(True, True): "Both", (True, False): "AWave",
           (False, True): "BWave", (False, False): "Neither"}[(ra < tol, rb < tol)]
    return WaveClass(tag, ra, rb)


# -- report ----------------------------------------------------------------------------

def _witness_pair(medium):
    from .media.medium import bivectors_ab
    if medium.kind in ("QDCM", "PDCM", "Q", "P"):
        A, B = bivectors_ab(medium)
        return A.coords, B.coords
    p = medium.provenance.params
    return p["A"], p["B"]


def dispersion_report(medium, n_directions=4, rng=None, tol=CLASSIFY_TOL):
    """Quartic, factors (if the class is known), and waves sampled on random directions."""
    rng = np.random.default_rng(rng)
    quartic = quartic_coefficients(medium)
    rep = DispersionReport(quartic)
    if not np.any(quartic.coeffs):
        rep.warnings.append("no dispersion constraint: the quartic vanishes identically")
        return rep
    factors = None
    if medium.kind in ("QDCM", "PDCM", "SDCM", "Q"):
        try:
            factors = predicted_factors(medium)
            rep.factors = factors
            rep.check = factor_check(quartic, *factors)
        except SingularError as exc:
            rep.warnings.append(f"predicted factors unavailable: {exc}")
            factors = None
    A = B = None
    if factors is not None:
        A, B = _witness_pair(medium)
    for _ in range(n_directions):
        d = rng.standard_normal(3)
        if factors is not None:
            cands = [(k, nu) for k, q in enumerate(factors) if q.norm() > 0
                     for nu in _safe(roots_along_direction, q, d)]
        else:
            cands = [(None, nu) for nu in _safe(quartic_roots_along_direction, medium, d,
                                                 quartic)]
        for k, nu in cands:
            try:
                wave = solve_plane_wave(medium, nu)
            except (DegenerateWaveError, DispersionError) as exc:
                rep.warnings.append(f"root skipped: {exc}")
                continue
            rep.roots.append(nu)
            rep.waves.append((k, wave))
            rep.orthogonality.append(orthogonality(wave))
            if A is not None:
                rep.classes.append(classify_wave(wave, A, B, tol))
    return rep


def _safe(fn, *args):
    try:
        return fn(*args)
    except DispersionError as exc:
        log.info("direction skipped: %s", exc)
        return []
