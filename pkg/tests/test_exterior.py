import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dcmedia import exterior as ex
from _gen import wedge_oracle

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def coords(n):
    return arrays(np.float64, n, elements=finite)


E = ex.KVector.unit
EPS = ex.KForm.unit


def test_basis_order():
    assert ex.basis_labels(2) == ["12", "13", "14", "23", "24", "34"]


def test_wedge_examples():
    np.testing.assert_array_equal((E(1) ^ E(2)).coords, [1, 0, 0, 0, 0, 0])
    nu = ex.one_form(1.0, -2.0, 0.5, 3.0)
    assert (nu ^ nu).norm() == 0
    x = (EPS(1) + EPS(2)) ^ (EPS(3) + EPS(4))
    np.testing.assert_array_equal(x.coords, [0, 1, 1, 1, 1, 0])
    np.testing.assert_allclose(x.coords, wedge_oracle([1, 1, 0, 0], [0, 0, 1, 1], 1, 1))


def test_wedge_errors():
    with pytest.raises(ValueError):
        ex.wedge(ex.KVector.zero(3), ex.KVector.zero(2))
    with pytest.raises(TypeError):
        ex.wedge(E(1), EPS(2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_wedge_matches_tensor_oracle(j, k, data):
    if j + k > 4:
        return
    from math import comb
    x = data.draw(coords(comb(4, j)))
    y = data.draw(coords(comb(4, k)))
    np.testing.assert_allclose(ex.wedge_coords(x, y, j, k), wedge_oracle(x, y, j, k), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_graded_anticommutativity(j, k, data):
    if j + k > 4:
        return
    from math import comb
    x = ex.KForm(j, data.draw(coords(comb(4, j))))
    y = ex.KForm(k, data.draw(coords(comb(4, k))))
    assert (x ^ y).allclose((-1) ** (j * k) * (y ^ x))


def test_pair_examples():
    assert ex.pair(EPS(1, 2), E(1, 2)) == 1
    assert ex.pair(EPS(1, 2), E(3, 4)) == 0
    with pytest.raises(ValueError):
        ex.pair(EPS(1), E(1, 2))


@settings(max_examples=50, deadline=None)
@given(coords(4), coords(4), coords(4), coords(4))
def test_pair_determinant_identity(nu, phi, a, b):
    lhs = ex.pair(ex.one_form(*nu) ^ ex.one_form(*phi), ex.vector(*a) ^ ex.vector(*b))
    rhs = (nu @ a) * (phi @ b) - (nu @ b) * (phi @ a)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


def test_contract_anchors():
    assert ex.contract(EPS(1), E(1, 2)).allclose(E(2))
    assert ex.contract(EPS(3), E(1, 2)).norm() == 0
    with pytest.raises(ValueError):
        ex.contract(EPS(1, 2), E(1))


@settings(max_examples=50, deadline=None)
@given(coords(4), coords(4), coords(4))
def test_contract_anchor_formula(nu, a, b):
    n, av, bv = ex.one_form(*nu), ex.vector(*a), ex.vector(*b)
    lhs = ex.contract(n, av ^ bv)
    rhs = (nu @ a) * bv - (nu @ b) * av
    assert lhs.allclose(rhs, rtol=1e-9, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(coords(4), coords(6), coords(4))
def test_contraction_duality(nu, X, phi):
    n, x, p = ex.one_form(*nu), ex.bivector(X), ex.one_form(*phi)
    assert ex.contract(n, ex.contract(n, x)).norm() <= 1e-9 * (1 + x.norm() * n.norm() ** 2)
    lhs = ex.pair(p, ex.contract(n, x))
    rhs = ex.pair(n ^ p, x)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


def test_lift_table():
    table = {(1, 2): (1, (3, 4)), (1, 3): (-1, (2, 4)), (1, 4): (1, (2, 3)),
             (2, 3): (1, (1, 4)), (2, 4): (-1, (1, 3)), (3, 4): (1, (1, 2))}
    for src, (s, dst) in table.items():
        assert ex.lift_eN(EPS(*src)).allclose(s * E(*dst))


@settings(max_examples=30, deadline=None)
@given(coords(6))
def test_lift_unlift_round_trip(x):
    phi = ex.two_form(x)
    assert ex.unlift(ex.lift_eN(phi)).allclose(phi)


def test_dot_examples():
    assert ex.dot(EPS(1, 2), EPS(3, 4)) == 1
    np.testing.assert_allclose(np.linalg.eigvalsh(ex.G), [-1, -1, -1, 1, 1, 1])
    np.testing.assert_array_equal(ex.G, ex.G.T)


@settings(max_examples=50, deadline=None)
@given(coords(6), coords(4), coords(4))
def test_dot_formula_and_simple(x, nu, phi):
    p = ex.two_form(x)
    expected = 2 * (x[0] * x[5] - x[1] * x[4] + x[2] * x[3])
    assert abs(ex.dot(p, p) - expected) <= 1e-9 * (1 + abs(expected))
    # Phi ^ Phi = (Phi . Phi) eps_1234
    assert abs((p ^ p).coords[0] - expected) <= 1e-9 * (1 + abs(expected))
    s = ex.one_form(*nu) ^ ex.one_form(*phi)
    assert abs(ex.dot(s, s)) <= 1e-9 * (1 + s.norm() ** 2)


@settings(max_examples=50, deadline=None)
@given(coords(4), coords(4))
def test_simple_factorization(u, v):
    x = ex.vector(*u) ^ ex.vector(*v)
    if x.norm() < 1e-3:
        return
    assert ex.is_simple(x)
    a, b = ex.factor_simple(x)
    assert (a ^ b).allclose(x, rtol=1e-8)


def test_not_simple_rejected():
    x = E(1, 2) + E(3, 4)
    assert not ex.is_simple(x)
    with pytest.raises(ValueError):
        ex.factor_simple(x)


def test_immutable_and_finite():
    x = E(1)
    with pytest.raises(AttributeError):
        x.grade = 2
    with pytest.raises(ValueError):
        x.coords[0] = 3
    with pytest.raises(ValueError):
        ex.vector(np.nan, 0, 0, 0)
