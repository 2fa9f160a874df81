import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubkit.linalg import (
    basis_state,
    hermitian_eigen,
    inner,
    is_unitary,
    random_hermitian,
    random_state,
    sym_projector,
    tensor,
    unitary_from_hermitian,
    von_neumann_entropy,
)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_tensor_identity():
    np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_x_on_00():
    out = tensor(SX, np.eye(2)) @ basis_state(4, 0)
    np.testing.assert_array_equal(out, basis_state(4, 2))  # |10>


def test_tensor_hh_on_00():
    # by hand: every row of H (x) H starts with 1/2
    out = tensor(H, H) @ basis_state(4, 0)
    np.testing.assert_allclose(out, np.full(4, 0.5), atol=1e-15)


def test_inner_examples():
    zero, one = basis_state(2, 0), basis_state(2, 1)
    plus = (zero + one) / np.sqrt(2)
    assert inner(zero, zero) == 1
    assert inner(zero, one) == 0
    assert inner(plus, zero) == pytest.approx(1 / np.sqrt(2))


def test_inner_conjugate_linear_first():
    u = np.array([1j, 0])
    v = np.array([1, 0])
    assert inner(u, v) == pytest.approx(-1j)
    assert inner(v, u) == pytest.approx(1j)


def test_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        inner(np.ones(2), np.ones(3))


@pytest.mark.parametrize("a, expected", [(np.eye(3), True), (H, True), (2 * np.eye(2), False)])
def test_is_unitary(a, expected):
    assert is_unitary(a) is expected


def test_is_unitary_rejects_nonsquare():
    assert not is_unitary(np.ones((2, 3)))


def test_eigen_diagonal():
    w, v = hermitian_eigen(np.diag([1.0, 2.0]))
    np.testing.assert_allclose(w, [1, 2])
    np.testing.assert_allclose(v, np.eye(2), atol=1e-15)


def test_eigen_sigma_x():
    w, v = hermitian_eigen(SX)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-14)
    # phase convention: first nonzero component real positive
    np.testing.assert_allclose(v[:, 0], np.array([1, -1]) / np.sqrt(2), atol=1e-14)
    np.testing.assert_allclose(v[:, 1], np.array([1, 1]) / np.sqrt(2), atol=1e-14)


def test_eigen_sigma_z():
    w, v = hermitian_eigen(SZ)
    np.testing.assert_allclose(w, [-1, 1])
    np.testing.assert_allclose(v[:, 0], [0, 1], atol=1e-15)
    np.testing.assert_allclose(v[:, 1], [1, 0], atol=1e-15)


def test_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_eigen_degenerate_order_is_deterministic():
    w, v = hermitian_eigen(np.eye(3))
    np.testing.assert_allclose(w, [1, 1, 1])
    # lexicographic on the (re, im) sequence
    keys = [tuple(np.round(np.stack([c.real, c.imag], -1).ravel(), 10)) for c in v.T]
    assert keys == sorted(keys)


@settings(max_examples=25, deadline=None)
@given(d=st.integers(1, 64), seed=st.integers(0, 2**32 - 1))
def test_eigen_reconstruction(d, seed):
    a = random_hermitian(d, np.random.default_rng(seed))
    w, v = hermitian_eigen(a)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
    assert np.max(np.abs(a - (v * w) @ v.conj().T)) <= 1e-10


@pytest.mark.parametrize("d", [2, 3])
def test_sym_projector_trace_formula(d):
    t = 2
    assert np.trace(sym_projector(d)) == pytest.approx(
        math.factorial(d + t - 1) / (math.factorial(d - 1) * math.factorial(t))
    )
    assert {2: 3, 3: 6}[d] == round(np.trace(sym_projector(d)))


@pytest.mark.parametrize("d", range(1, 9))
def test_sym_projector_is_projector(d):
    p = sym_projector(d)
    assert np.max(np.abs(p @ p - p)) <= 1e-12
    assert abs(np.trace(p) - d * (d + 1) / 2) <= 1e-9


def test_sym_projector_fixes_symmetric_vectors(rng):
    v = random_state(3, rng)
    vv = np.kron(v, v)
    np.testing.assert_allclose(sym_projector(3) @ vv, vv, atol=1e-14)
    anti = np.kron(basis_state(3, 0), basis_state(3, 1)) - np.kron(basis_state(3, 1), basis_state(3, 0))
    np.testing.assert_allclose(sym_projector(3) @ anti, 0, atol=1e-15)


def test_von_neumann_examples(rng):
    psi = random_state(4, rng)
    assert von_neumann_entropy(np.outer(psi, psi.conj())) == pytest.approx(0, abs=1e-9)
    assert von_neumann_entropy(np.eye(5) / 5) == pytest.approx(math.log2(5))
    hand = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(hand, abs=1e-12)
    assert hand == pytest.approx(0.8113, abs=1e-4)


@pytest.mark.parametrize("bad", [np.diag([0.5, 0.4]), np.diag([1.2, -0.2]),
                                 np.array([[0.5, 1], [0, 0.5]])])
def test_von_neumann_rejects_invalid(bad):
    with pytest.raises(ValueError):
        von_neumann_entropy(bad)


@settings(max_examples=30, deadline=None)
@given(d=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_von_neumann_range(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= math.log2(d) + 1e-9


@settings(max_examples=20, deadline=None)
@given(d=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_unitaries_from_hermitian_generators(d, seed):
    rng = np.random.default_rng(seed)
    u = unitary_from_hermitian(random_hermitian(d, rng))
    v = unitary_from_hermitian(random_hermitian(d, rng))
    assert is_unitary(u @ v)
    assert is_unitary(tensor(u, v))
