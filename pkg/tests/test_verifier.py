import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import expm

from jwgadget.circuit import CNOT, Circuit, Rotation
from jwgadget.errors import DimensionMismatch, NonUnitary, RegisterTooLarge
from jwgadget.fermion import Family, FermionTerm
from jwgadget.gadget import compile_term
from jwgadget.verifier import (
    FAMILY_ORDER,
    controlled_block,
    dense_unitary,
    equivalent,
    exact_term_exponential,
    fermionic_operator_matrix,
    pad_identity,
    random_trials,
    run_trial,
    sparse_unitary,
    unitarity_deviation,
)

from conftest import FAMILIES, random_term, term_generator_oracle

X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_dense_unitary_examples():
    np.testing.assert_array_equal(dense_unitary(Circuit(2)), np.eye(4))
    # control qubit 0 is the low bit: |01> (index 1) -> |11> (index 3)
    cnot = dense_unitary(Circuit(2, gates=[CNOT(0, 1)]))
    expect = np.eye(4)[:, [0, 3, 2, 1]]
    np.testing.assert_array_equal(cnot, expect)
    rot = dense_unitary(Circuit(1, gates=[Rotation(((0, "X"),), np.pi / 2)]))
    np.testing.assert_allclose(rot, 1j * X, atol=1e-15)


def test_register_cap():
    with pytest.raises(RegisterTooLarge):
        sparse_unitary(Circuit(15))
    with pytest.raises(RegisterTooLarge):
        fermionic_operator_matrix([0], [True], 13)


def test_exact_exponential_examples():
    num = FermionTerm(Family.NUMBER, (0,), 1.0, 1, 1)
    np.testing.assert_allclose(exact_term_exponential(num, np.pi), np.diag([1, -1]), atol=1e-15)
    hop = FermionTerm(Family.HOPPING, (0, 1), 1.0, 1, 2)
    u = exact_term_exponential(hop, np.pi / 2)
    expect = np.diag([1, 0, 0, 1]).astype(complex)
    expect[1, 2] = expect[2, 1] = 1j
    np.testing.assert_allclose(u, expect, atol=1e-15)
    de = FermionTerm(Family.DOUBLE_EXCITATION, (0, 1, 2, 3), 0.3, 1, 4)
    np.testing.assert_allclose(exact_term_exponential(de, 0.0), np.eye(16), atol=1e-15)


@pytest.mark.parametrize("family", FAMILIES)
def test_exact_exponential_against_eigendecomposition(rng, family):
    for _ in range(5):
        m = int(rng.integers(4, 8))
        term = random_term(rng, family, m)
        gamma = float(rng.uniform(-np.pi, np.pi))
        h = term_generator_oracle(term)
        w, v = np.linalg.eigh(h)
        eig = (v * np.exp(1j * gamma * w)) @ v.conj().T
        np.testing.assert_allclose(exact_term_exponential(term, gamma), eig, atol=1e-12)
        np.testing.assert_allclose(exact_term_exponential(term, gamma), expm(1j * gamma * h),
                                   atol=1e-12)


def test_exact_exponential_wider_register():
    hop = FermionTerm(Family.HOPPING, (0, 1), 1.0, 1, 2)
    u = exact_term_exponential(hop, 0.4, num_orbitals=3)
    np.testing.assert_allclose(u, np.kron(np.eye(2), exact_term_exponential(hop, 0.4)),
                               atol=1e-15)


def test_controlled_block_examples():
    np.testing.assert_array_equal(controlled_block(np.eye(2)), np.eye(4))
    # ancilla is the high bit, so the block is CNOT(control=1, target=0)
    expect = dense_unitary(Circuit(2, gates=[CNOT(1, 0)]))
    np.testing.assert_array_equal(controlled_block(X), expect)
    sparse = controlled_block(sp.csr_matrix(X))
    np.testing.assert_array_equal(sparse.toarray(), expect)
    with pytest.raises(NonUnitary):
        controlled_block(np.array([[1, 1], [0, 1]], dtype=complex))


def test_controlled_gadget_matches_block(rng):
    for family in ("hopping", "number_excitation", "double_excitation"):
        term = random_term(rng, family, 5)
        c = compile_term(term, 0.7, "gadget", True, lower=False)
        ref = controlled_block(exact_term_exponential(term, 0.7))
        ref = np.kron(np.eye(1 << c.num_dirty), ref)
        assert equivalent(dense_unitary(c), ref)


def test_equivalent_examples(rng):
    u = expm(1j * (lambda a: a + a.conj().T)(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))))
    phased = u * np.exp(0.37j)
    assert equivalent(u, phased, up_to_global_phase=True)
    assert not equivalent(u, phased)
    for flag in (False, True):
        cmp = equivalent(np.eye(2), X, up_to_global_phase=flag)
        assert not cmp
        assert cmp.deviation == pytest.approx(1.0)
    with pytest.raises(DimensionMismatch):
        equivalent(np.eye(2), np.eye(4))
    assert equivalent(sp.csr_matrix(u), sp.csr_matrix(phased), up_to_global_phase=True)


def test_naive_and_gadget_equivalent():
    term = FermionTerm(Family.NUMBER_EXCITATION, (2, 0, 4), -0.4, 1, 5)
    for controlled in (False, True):
        gc = compile_term(term, 1.1, "gadget", controlled)
        g = dense_unitary(gc)
        n = pad_identity(dense_unitary(compile_term(term, 1.1, "naive", controlled)), gc.num_dirty)
        assert equivalent(g, n, up_to_global_phase=not controlled, tol=1e-9)


def test_fermion_matrix_examples():
    np.testing.assert_array_equal(fermionic_operator_matrix([0], [True], 1), [[0, 0], [1, 0]])
    anti = (fermionic_operator_matrix([0, 0], [False, True], 1)
            + fermionic_operator_matrix([0, 0], [True, False], 1))
    np.testing.assert_array_equal(anti, np.eye(2))
    # a_1 on |11> picks up the sign of qubit 0
    a1 = fermionic_operator_matrix([1], [False], 2)
    assert a1[1, 3] == -1 and a1[0, 2] == 1


def test_compiled_circuits_unitary(rng):
    for family in FAMILIES:
        term = random_term(rng, family, 6)
        for mode in ("naive", "gadget"):
            u = sparse_unitary(compile_term(term, 0.5, mode, True, lower=True))
            assert unitarity_deviation(u) <= 1e-10


def test_random_trials_cover_configurations():
    trials = random_trials(40, max_orbitals=6, seed=3)
    assert [t.term.family.value for t in trials[:5]] == list(FAMILY_ORDER)
    combos = {(t.term.family.value, t.mode, t.controlled, t.lowered) for t in trials}
    assert len(combos) == 40
    assert all(t.term.num_orbitals <= 6 for t in trials)
    assert all(-np.pi < t.gamma <= np.pi for t in trials)
    assert random_trials(40, 6, 3) == trials


def test_run_trial_passes_and_reports():
    for t in random_trials(20, max_orbitals=7, seed=11):
        r = run_trial(t)
        assert r.passed, r.line()
        assert r.line().startswith("PASS ")
