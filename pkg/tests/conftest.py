import numpy as np
import pytest
import scipy.sparse as sp

from jwgadget.fermion import FermionTerm, classify_raw
from jwgadget.verifier import fermionic_operator_matrix

RAW_SHAPES = {
    "number": (1, lambda o: ([o[0]], [o[0]])),
    "hopping": (2, lambda o: ([o[0]], [o[1]])),
    "number_number": (2, lambda o: ([o[0], o[1]], [o[1], o[0]])),
    "number_excitation": (3, lambda o: ([o[0], o[1]], [o[0], o[2]])),
    "double_excitation": (4, lambda o: ([o[0], o[1]], [o[2], o[3]])),
}
FAMILIES = list(RAW_SHAPES)
NON_DIAGONAL = ["hopping", "number_excitation", "double_excitation"]


def random_raw(rng, family, num_orbitals):
    k, build = RAW_SHAPES[family]
    orbitals = [int(v) for v in rng.permutation(num_orbitals)[:k]]
    cre, ann = build(orbitals)
    cre = [cre[j] for j in rng.permutation(len(cre))]
    ann = [ann[j] for j in rng.permutation(len(ann))]
    return cre, ann


def random_term(rng, family, num_orbitals, coefficient=None) -> FermionTerm:
    cre, ann = random_raw(rng, family, num_orbitals)
    if coefficient is None:
        coefficient = float(rng.uniform(-1.5, 1.5))
    return classify_raw(cre, ann, coefficient, num_orbitals)


def raw_operator(cre, ann, num_orbitals):
    """Dense matrix of a+_{cre...} a_{ann...} from the occupation-basis construction."""
    idx = list(cre) + list(ann)
    dag = [True] * len(cre) + [False] * len(ann)
    return fermionic_operator_matrix(idx, dag, num_orbitals)


def hermitian_generator(op):
    """``op`` if it is Hermitian, else ``op + op^dagger``."""
    if np.allclose(op, op.conj().T, atol=1e-14):
        return op
    return op + op.conj().T


def term_generator_oracle(term: FermionTerm):
    """Generator of a canonical term built without any Pauli algebra."""
    ops = term.ladder_ops()
    mat = fermionic_operator_matrix(
        [p for p, _ in ops], [d for _, d in ops], term.num_orbitals
    )
    return term.effective_coefficient * hermitian_generator(mat)


def to_dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
