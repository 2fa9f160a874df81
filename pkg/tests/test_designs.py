import numpy as np
import pytest

from mubkit.designs import fourth_moment, second_moment, two_design_defect
from mubkit.linalg import basis_state, random_state, sym_projector
from mubkit.mubs import Basis, MubSet, prime_mubs, qubit_triple


def fourth_moment_oracle(S, psi):
    total = 0.0
    for b in S:
        for k in range(S.dim):
            total += abs(np.vdot(b.matrix[:, k], psi)) ** 4
    return total


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_full_prime_sets_are_2_designs(d):
    assert two_design_defect(prime_mubs(d)) <= 1e-9


def test_partial_set_is_not_a_design():
    assert two_design_defect(qubit_triple(2)) > 0.01


def test_second_moment_target():
    S = prime_mubs(3)
    np.testing.assert_allclose(second_moment(S), sym_projector(3) / 6, atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_fourth_moment_is_two(d):
    S = prime_mubs(d)
    rng = np.random.default_rng(d)
    for _ in range(50):
        psi = random_state(d, rng)
        assert fourth_moment(S, psi) == pytest.approx(2, abs=1e-9)
        assert fourth_moment(S, psi) == pytest.approx(fourth_moment_oracle(S, psi), abs=1e-12)


def test_fourth_moment_examples():
    assert fourth_moment(prime_mubs(2), basis_state(2, 0)) == pytest.approx(2, abs=1e-12)
    single = MubSet((Basis(np.eye(3)),), "custom")
    assert fourth_moment(single, basis_state(3, 0)) == 1


def test_fourth_moment_dimension_mismatch():
    with pytest.raises(ValueError):
        fourth_moment(prime_mubs(3), np.ones(2) / np.sqrt(2))


def test_defect_invariant_under_relabeling():
    S = qubit_triple(2)
    rng = np.random.default_rng(0)
    shuffled = MubSet(
        tuple(Basis(S[t].matrix[:, rng.permutation(4)]) for t in (2, 0, 1)), "custom"
    )
    assert two_design_defect(shuffled) == pytest.approx(two_design_defect(S), abs=1e-12)
