import json
from itertools import combinations

import numpy as np
import pytest

from mubkit.linalg import basis_state, is_unitary, random_state
from mubkit.mubs import (
    Basis,
    MubSet,
    PauliString,
    check_mub,
    latin_square_mubs,
    pauli_string_operator,
    pauli_strings,
    pauli_x,
    pauli_z,
    permutation_witness,
    prime_mubs,
    product_mubs,
    qubit_triple,
)
from mubkit.serialize import load_mubset, mubset_from_json, mubset_to_json, save_mubset

SX = np.array([[0, 1], [1, 0]])
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1, -1])


def overlap_oracle(a, b):
    """Loop-based max | |<a_k|b_l>|^2 - 1/d | over every vector pair."""
    d = a.dim
    worst = 0.0
    for k in range(d):
        for ell in range(d):
            z = sum(np.conj(a.matrix[i, k]) * b.matrix[i, ell] for i in range(d))
            worst = max(worst, abs(abs(z) ** 2 - 1 / d))
    return worst


def is_eigenbasis(op, basis, tol=1e-10):
    for v in basis.vectors:
        w = op @ v
        lam = np.vdot(v, w)
        if np.linalg.norm(w - lam * v) > tol:
            return False
    return True


# -- Pauli operators --------------------------------------------------------

def test_pauli_d2_convention():
    np.testing.assert_array_equal(pauli_x(2), SX)
    np.testing.assert_allclose(pauli_z(2), -SZ, atol=1e-15)


def test_pauli_x_wraps():
    np.testing.assert_array_equal(pauli_x(3) @ basis_state(3, 2), basis_state(3, 0))


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_pauli_orders_and_commutation(d):
    x, z = pauli_x(d), pauli_z(d)
    np.testing.assert_allclose(np.linalg.matrix_power(x, d), np.eye(d), atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(z, d), np.eye(d), atol=1e-12)
    assert is_unitary(x) and is_unitary(z)
    w = np.exp(2j * np.pi / d)
    np.testing.assert_allclose(z @ x, w * x @ z, atol=1e-12)


@pytest.mark.parametrize("d", [0, 1])
def test_pauli_rejects_small_d(d):
    with pytest.raises(ValueError):
        pauli_x(d)
    with pytest.raises(ValueError):
        pauli_z(d)


def test_pauli_string_examples():
    np.testing.assert_array_equal(pauli_string_operator(PauliString(3, (0, 0), (0, 0))), np.eye(9))
    np.testing.assert_array_equal(pauli_string_operator(PauliString(2, (1,), (0,))), pauli_x(2))
    xz = pauli_string_operator(PauliString(2, (1, 0), (0, 1)))
    np.testing.assert_allclose(xz, np.kron(SX, -SZ), atol=1e-15)
    assert is_unitary(xz)


def test_pauli_string_validation():
    with pytest.raises(ValueError):
        PauliString(2, (2,), (0,))
    with pytest.raises(ValueError):
        PauliString(3, (1, 0), (0,))


def test_pauli_strings_count():
    assert len(pauli_strings(2, 2)) == 15
    assert len(pauli_strings(3, 1, include_identity=True)) == 9


# -- constructions ----------------------------------------------------------

def test_prime_d2_is_pauli_eigenbases():
    S = prime_mubs(2)
    assert S.m == 3
    assert is_eigenbasis(SZ, S[0])
    assert is_eigenbasis(SX, S[1])
    assert is_eigenbasis(SY, S[2])
    for a, b in combinations(S, 2):
        np.testing.assert_allclose(np.abs(a.matrix.conj().T @ b.matrix) ** 2, 0.5, atol=1e-12)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_prime_bases_are_eigenbases_of_xz_powers(d):
    S = prime_mubs(d)
    assert S.m == d + 1
    x, z = pauli_x(d), pauli_z(d)
    assert is_eigenbasis(z, S[0])
    for b in range(d):
        assert is_eigenbasis(x @ np.linalg.matrix_power(z, b), S[b + 1])


def test_prime_d5_all_pairs():
    S = prime_mubs(5)
    pairs = list(combinations(S, 2))
    assert len(pairs) == 15
    assert max(overlap_oracle(a, b) for a, b in pairs) <= 1e-9


@pytest.mark.parametrize("d", [1, 4, 6])
def test_prime_rejects_composite(d):
    with pytest.raises(ValueError):
        prime_mubs(d)


def test_qubit_triple_n1():
    S = qubit_triple(1)
    np.testing.assert_allclose(np.abs(S[1].matrix) ** 2, 0.5)
    k = S[2].matrix
    assert is_unitary(k)
    assert is_eigenbasis(SY, S[2])


def test_qubit_triple_n2_overlaps():
    S = qubit_triple(2)
    assert S.dim == 4 and S.m == 3
    for a, b in combinations(S, 2):
        np.testing.assert_allclose(np.abs(a.matrix.conj().T @ b.matrix) ** 2, 0.25, atol=1e-12)


def test_latin_worked_example():
    S = latin_square_mubs(3)
    w = np.exp(2j * np.pi / 3)

    def ket(i, j):
        return basis_state(9, 3 * (i - 1) + (j - 1))

    v11 = (ket(1, 1) + ket(2, 3) + ket(3, 2)) / np.sqrt(3)
    v21 = (ket(1, 1) + w * ket(2, 3) + w**2 * ket(3, 2)) / np.sqrt(3)
    first = S[0].matrix
    assert abs(np.vdot(first[:, 0], v11)) ** 2 == pytest.approx(1, abs=1e-12)
    assert abs(np.vdot(first[:, 3], v21)) ** 2 == pytest.approx(1, abs=1e-12)


def test_latin_s3_all_pairs():
    S = latin_square_mubs(3)
    assert S.dim == 9 and S.m == 4
    for a, b in combinations(S, 2):
        assert overlap_oracle(a, b) <= 1e-9


def test_latin_rejects_composite():
    with pytest.raises(ValueError):
        latin_square_mubs(4)


def test_product_examples():
    P = product_mubs(qubit_triple(1))
    assert P.dim == 4 and P.m == 3
    np.testing.assert_array_equal(P[0].matrix, np.eye(4))
    assert check_mub(P).passed


@pytest.mark.parametrize("base", [qubit_triple(1), prime_mubs(3)])
def test_product_overlaps(base):
    P = product_mubs(base)
    for a, b in combinations(P, 2):
        assert overlap_oracle(a, b) <= 1e-9
    assert check_mub(P).max_deviation <= 2 * max(check_mub(base).max_deviation, 1e-16) + 1e-15


def test_product_vector_ordering():
    base = prime_mubs(3)
    P = product_mubs(base)
    u = base[1].matrix
    # column (k, l) -> k*s + l
    np.testing.assert_allclose(P[1].matrix[:, 1 * 3 + 2], np.kron(u[:, 1], u[:, 2].conj()))


def test_product_rejects_invalid_base():
    bad = MubSet((Basis(np.eye(2)), Basis(np.eye(2))), "custom")
    with pytest.raises(ValueError):
        product_mubs(bad)


# -- certificates -----------------------------------------------------------

@pytest.mark.parametrize("S", [prime_mubs(3), latin_square_mubs(3)], ids=["prime3", "latin3"])
def test_check_mub_passes(S):
    rep = check_mub(S)
    assert rep.passed
    assert rep.max_deviation < 1e-10


def test_check_mub_flags_duplicate():
    S = prime_mubs(3)
    dup = MubSet((S[0], S[1], S[0], S[3]), "custom")
    rep = check_mub(dup)
    assert not rep.passed
    assert rep.failing_pairs == [(0, 2)]


def test_basis_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        Basis(np.ones((2, 2)))


# -- permutation witness ----------------------------------------------------

def test_permutation_identity_string():
    S = prime_mubs(3)
    rep = permutation_witness(S, PauliString(3, (0,), (0,)))
    assert rep.passed
    assert rep.permutations == [[0, 1, 2]] * 4


def test_permutation_x_on_x_eigenbasis():
    rep = permutation_witness(prime_mubs(2), PauliString(2, (1,), (0,)))
    assert rep.passed
    assert rep.permutations[1] == [0, 1]


def test_permutation_qubit_triple_exhaustive():
    S = qubit_triple(2)
    reports = [permutation_witness(S, ps) for ps in pauli_strings(2, 2)]
    assert len(reports) == 15
    for rep in reports:
        assert rep.passed
        assert len(rep.permutations) == 3
        for perm in rep.permutations:
            assert sorted(perm) == [0, 1, 2, 3]


@pytest.mark.parametrize("d", [3, 5])
def test_permutation_prime_exhaustive(d):
    S = prime_mubs(d)
    assert all(permutation_witness(S, ps).passed for ps in pauli_strings(d, 1))


def test_permutation_failure_is_reported():
    # a random basis is not permuted by X
    rng = np.random.default_rng(3)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, _ = np.linalg.qr(g)
    S = MubSet((Basis(np.eye(3)), Basis(q)), "prime_pauli")
    rep = permutation_witness(S, PauliString(3, (1,), (0,)))
    assert not rep.passed
    assert None in rep.permutations[1]


def test_permutation_errors():
    with pytest.raises(ValueError):
        permutation_witness(latin_square_mubs(2), PauliString(2, (1, 0), (0, 0)))
    with pytest.raises(ValueError):
        permutation_witness(qubit_triple(2), PauliString(2, (1,), (0,)))


def test_scan_order_independence():
    S = prime_mubs(5)
    rev = MubSet(tuple(reversed(S.bases)), S.family)
    a, b = check_mub(S), check_mub(rev)
    assert a.max_deviation == b.max_deviation
    strings = pauli_strings(5, 1)
    fwd = [permutation_witness(S, ps).passed for ps in strings]
    back = [permutation_witness(S, ps).passed for ps in reversed(strings)]
    assert fwd == back[::-1]


# -- serialization ----------------------------------------------------------

def test_json_roundtrip(tmp_path):
    S = prime_mubs(5)
    path = tmp_path / "p5.json"
    save_mubset(S, path)
    T = load_mubset(path)
    assert T.family == S.family and T.dim == 5 and T.m == 6
    for a, b in zip(S, T):
        assert np.max(np.abs(a.matrix - b.matrix)) <= 1e-14 * 10
        assert a.label == b.label


def test_json_schema_shape():
    data = json.loads(mubset_to_json(qubit_triple(1)))
    assert data["dim"] == 2 and data["family"] == "qubit_triple"
    assert np.asarray(data["bases"]).shape == (3, 2, 2, 2)


def test_json_rejects_bad_shape():
    data = json.loads(mubset_to_json(qubit_triple(1)))
    data["bases"][0] = data["bases"][0][:1]
    with pytest.raises(ValueError):
        mubset_from_json(json.dumps(data))


def test_mubset_is_immutable():
    S = qubit_triple(1)
    with pytest.raises(ValueError):
        S[0].matrix[0, 0] = 2


def test_random_state_is_unit(rng):
    assert np.linalg.norm(random_state(7, rng)) == pytest.approx(1)
