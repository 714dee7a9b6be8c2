import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcmedia import dyadics as dy
from dcmedia import exterior as ex
from dcmedia import media
from dcmedia.errors import SingularError
from _gen import construction_pair, principal_angle, random_medium

seeds = st.integers(0, 2**32 - 1)
kinds = st.sampled_from(["QDCM", "PDCM", "SDCM"])
Z6 = np.zeros(6)


def test_constructor_examples():
    vac = media.construct_qdcm(0, 1, np.eye(4), Z6, Z6)
    np.testing.assert_allclose(vac.Mg.matrix, np.eye(6))
    ax = media.construct_qdcm(2.5, 0, np.eye(4), Z6, Z6)
    np.testing.assert_allclose(ax.M.matrix, 2.5 * np.eye(6))
    p = media.construct_pdcm(0, 3.0, np.eye(4), Z6, Z6)
    np.testing.assert_allclose(p.M.matrix, 3.0 * np.eye(6))
    s = media.construct_sdcm(1.0, np.zeros((4, 4)), Z6, Z6)
    np.testing.assert_allclose(s.M.matrix, np.eye(6))


def test_pdcm_is_p_compound():
    rng = np.random.default_rng(1)
    P = rng.standard_normal((4, 4))
    m = media.p_medium(1.7, P)
    np.testing.assert_allclose(m.M.matrix, 1.7 * dy.compound_matrix(P, 2), atol=1e-12)
    assert m.kind == "P"


def test_constructor_errors():
    with pytest.raises(ValueError, match="trace-free"):
        media.construct_sdcm(0, np.eye(4), Z6, Z6)
    with pytest.raises(ValueError):
        media.construct_qdcm(0, 1, np.eye(3), Z6, Z6)
    with pytest.raises(ValueError):
        media.construct_qdcm(0, np.nan, np.eye(4), Z6, Z6)
    with pytest.raises(TypeError):
        media.construct_qdcm(0, 1, np.eye(4), ex.KForm.zero(2), Z6)
    with pytest.raises(ValueError):
        media.Medium(dy.Dyadic(dy.F2, dy.E2, np.eye(6)))


def test_singular_q_flagged():
    m = media.construct_qdcm(0, 1, np.diag([1.0, 1.0, 1.0, 0.0]), Z6, Z6)
    assert m.provenance.params["Q_invertible"] is False


@settings(max_examples=60, deadline=None)
@given(seeds, kinds)
def test_construction_witness_residual(seed, kind):
    m = random_medium(np.random.default_rng(seed), kind)
    w = media.witness_from_construction(m)
    assert w.residual < 1e-9 * max(1.0, np.linalg.norm(m.Mg.matrix) ** 2)


def test_witness_for_axion_and_random():
    ax = media.axion_medium(1.5)
    zero = ex.KVector.zero(2)
    w = media.Dc1Witness(-3.0, 1.0, 0, zero, zero)
    assert media.dc1_residual(ax, w) == 0
    rng = np.random.default_rng(3)
    mg = rng.standard_normal((6, 6))
    A, B = (ex.KVector(2, v) for v in rng.standard_normal((2, 6)))
    w = media.Dc1Witness(rng.standard_normal(), rng.standard_normal(), 1, A, B)
    assert media.dc1_residual(mg, w) > 1e-3


def test_bivectors_ab_examples():
    rng = np.random.default_rng(4)
    Q, C = rng.standard_normal((4, 4)), rng.standard_normal(6)
    A, B = media.bivectors_ab(media.construct_qdcm(0.3, 1.1, Q, Z6, C))
    np.testing.assert_allclose(A.coords, C)
    assert B.norm() == 0
    D = rng.standard_normal(6)
    m = media.construct_qdcm(0.3, 1.1, Q, D, Z6)
    A, B = media.bivectors_ab(m)
    np.testing.assert_allclose(B.coords, 1.1 * dy.compound_matrix(Q, 2).T @ ex.G @ D, atol=1e-12)
    assert media.witness_from_construction(m).residual < 1e-9
    with pytest.raises(ValueError):
        media.bivectors_ab(media.axion_medium(1.0))


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["QDCM", "PDCM"]))
def test_solve_d_round_trip(seed, kind):
    rng = np.random.default_rng(seed)
    m = random_medium(rng, kind)
    p = m.provenance.params
    X = p["Q"] if kind == "QDCM" else p["P"]
    A, B = media.bivectors_ab(m)
    sols = media.solve_d_from_ab(kind, p["M"], X, A, B)
    assert 1 <= len(sols) <= 2
    tol = 1e-7 * (1 + np.linalg.norm(p["D"]))
    assert min(np.linalg.norm(s.coords - p["D"]) for s in sols) < tol
    L = media.bivector_map(kind, p["M"], X)
    for s in sols:
        fwd = L @ s.coords + 0.5 * ex.dot_coords(s.coords, s.coords) * A.coords
        np.testing.assert_allclose(fwd, B.coords, atol=1e-7 * (1 + np.linalg.norm(B.coords)))


def test_solve_d_degenerate_cases():
    rng = np.random.default_rng(5)
    Q = rng.standard_normal((4, 4))
    B = rng.standard_normal(6)
    L = media.bivector_map("QDCM", 2.0, Q)
    (d,) = media.solve_d_from_ab("QDCM", 2.0, Q, Z6, B)
    np.testing.assert_allclose(d.coords, np.linalg.solve(L, B), atol=1e-10)
    sols = media.solve_d_from_ab("QDCM", 2.0, Q, rng.standard_normal(6), Z6)
    assert min(s.norm() for s in sols) < 1e-12
    with pytest.raises(SingularError):
        media.solve_d_from_ab("QDCM", 2.0, np.diag([1.0, 1, 1, 0]), B, B)


@settings(max_examples=40, deadline=None)
@given(seeds, st.booleans())
def test_factor_symmetric_rank2(seed, same_sign):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal((2, 6))
    S = np.outer(a, b) + np.outer(b, a)
    if same_sign:
        S = np.outer(a, a) + np.outer(b, b)
    A, B = media.factor_symmetric_rank2(S)
    np.testing.assert_allclose(np.outer(A, B) + np.outer(B, A), S, atol=1e-9 * np.abs(S).max())


def test_detect_sdcm_subspace():
    rng = np.random.default_rng(6)
    m = random_medium(rng, "SDCM")
    found = media.detect_dcm(m)
    w0 = [w for w in found if w.gamma == 0]
    assert w0 and w0[0].residual < 1e-8 * np.linalg.norm(m.Mg.matrix) ** 2
    A, B = construction_pair(m)
    assert principal_angle(np.column_stack([w0[0].A.coords, w0[0].B.coords]),
                           np.column_stack([A, B])) < 1e-6


def test_detect_qdcm_gamma1():
    m = random_medium(np.random.default_rng(7), "QDCM")
    found = media.detect_dcm(m)
    w1 = [w for w in found if w.gamma == 1]
    assert w1
    A, B = construction_pair(m)
    angles = [principal_angle(np.column_stack([w.A.coords, w.B.coords]), np.column_stack([A, B]))
              for w in w1]
    assert min(angles) < 1e-6


def test_detect_uniaxial_selects_axis():
    m = media.fourd_from_gibbsian(media.uniaxial_gibbsian(2, 5, 3, 7))
    found = media.detect_dcm(m)
    assert found
    e34 = ex.KVector.unit(3, 4).coords
    best = min(min(principal_angle(w.A.coords[:, None], e34[:, None]),
                   principal_angle(w.B.coords[:, None], e34[:, None])) for w in found)
    assert best < 1e-6


def test_detect_generic_medium_reports_nothing():
    mg = np.random.default_rng(8).standard_normal((6, 6))
    assert media.detect_dcm(mg) == []
