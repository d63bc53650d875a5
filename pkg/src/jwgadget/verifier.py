"""Brute-force matrix oracle for circuits and term exponentials.

Matrices cover the full register (system, control ancilla, dirty
ancillae) with qubit 0 as the least significant bit of the row index.
They are assembled in CSR form, since every gate here has at most two
non-zeros per column, and densified on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from jwgadget.circuit import (
    CNOT,
    CZ,
    Circuit,
    GlobalPhase,
    Hadamard,
    MultiControlledZ,
    PauliX,
    Rotation,
    Toffoli,
)
from jwgadget.errors import DimensionMismatch, NonUnitary, RegisterTooLarge
from jwgadget.fermion import FermionTerm
from jwgadget.jordan_wigner import jw_projector_form
from jwgadget.pauli import pauli_action

MAX_QUBITS = 14


def _check_size(n: int, cap: int = MAX_QUBITS):
    if n > cap:
        raise RegisterTooLarge(f"{n} qubits exceeds the {cap}-qubit matrix cap")


def _bit(x: np.ndarray, q: int) -> np.ndarray:
    return (x >> q) & 1


def _monomial(dst: np.ndarray, vals: np.ndarray, dim: int) -> sp.csr_matrix:
    return sp.csr_matrix((vals, (dst, np.arange(dim))), shape=(dim, dim))


def gate_matrix(gate, num_qubits: int) -> sp.csr_matrix:
    """Sparse matrix of one gate on the full register."""
    dim = 1 << num_qubits
    x = np.arange(dim, dtype=np.int64)
    ones = np.ones(dim, dtype=complex)
    if isinstance(gate, PauliX):
        return _monomial(x ^ (1 << gate.target), ones, dim)
    if isinstance(gate, CNOT):
        return _monomial(x ^ (_bit(x, gate.control) << gate.target), ones, dim)
    if isinstance(gate, Toffoli):
        fire = _bit(x, gate.c1) & _bit(x, gate.c2)
        return _monomial(x ^ (fire << gate.target), ones, dim)
    if isinstance(gate, CZ):
        return _monomial(x, 1 - 2.0 * (_bit(x, gate.a) & _bit(x, gate.b)), dim)
    if isinstance(gate, MultiControlledZ):
        fire = _bit(x, gate.target)
        for q, closed in gate.controls:
            fire = fire & (_bit(x, q) if closed else 1 - _bit(x, q))
        return _monomial(x, 1 - 2.0 * fire, dim)
    if isinstance(gate, Hadamard):
        t = gate.target
        s = 1 / np.sqrt(2)
        flip = _monomial(x ^ (1 << t), s * ones, dim)
        diag = _monomial(x, s * (1 - 2.0 * _bit(x, t)), dim)
        return flip + diag
    if isinstance(gate, Rotation):
        dst, phases = pauli_action(gate.axis, num_qubits)
        c, s = np.cos(gate.angle), np.sin(gate.angle)
        return _monomial(x, c * ones, dim) + _monomial(dst, 1j * s * phases, dim)
    if isinstance(gate, GlobalPhase):
        return _monomial(x, np.exp(1j * gate.angle) * ones, dim)
    raise TypeError(f"unknown gate {gate!r}")


def sparse_unitary(circuit: Circuit) -> sp.csr_matrix:
    n = circuit.num_qubits
    _check_size(n)
    u = sp.identity(1 << n, dtype=complex, format="csr")
    for g in circuit.gates:
        u = gate_matrix(g, n) @ u
        u.eliminate_zeros()
    return u


def dense_unitary(circuit: Circuit) -> np.ndarray:
    return sparse_unitary(circuit).toarray()


def exact_term_exponential(term: FermionTerm, gamma: float, num_orbitals: int | None = None,
                           sparse: bool = False):
    """``exp(i * gamma * H)`` for the term's generator ``H``, in closed form.

    With ``H = s * K`` and ``K`` the unit projector form, ``K^3 = K``, so
    ``exp(i g s K) = I + i sin(g s) K + (cos(g s) - 1) K^2``. Diagonal terms
    are exponentiated entrywise.
    """
    if num_orbitals is not None and num_orbitals != term.num_orbitals:
        term = term.with_num_orbitals(num_orbitals)
    _check_size(term.num_orbitals, 12)
    form = jw_projector_form(term)
    k = form.unit_matrix(sparse=True)
    dim = 1 << term.num_orbitals
    theta = gamma * form.scale
    if form.diagonal:
        u = sp.diags(np.exp(1j * theta * k.diagonal()), format="csr")
    else:
        u = (sp.identity(dim, dtype=complex, format="csr")
             + 1j * np.sin(theta) * k + (np.cos(theta) - 1) * (k @ k))
    u = sp.csr_matrix(u)
    return u if sparse else u.toarray()


def controlled_block(u, tol: float = 1e-10, check: bool = True):
    """``diag(I, U)`` with the control as the most significant qubit."""
    if check:
        _assert_unitary(u, tol)
    if sp.issparse(u):
        eye = sp.identity(u.shape[0], dtype=complex, format="csr")
        return sp.block_diag([eye, u], format="csr")
    u = np.asarray(u)
    dim = u.shape[0]
    out = np.eye(2 * dim, dtype=complex)
    out[dim:, dim:] = u
    return out


def pad_identity(u, num_extra: int):
    """``I_(2^num_extra) (x) U``: extra qubits are the most significant ones."""
    if num_extra == 0:
        return u
    eye = sp.identity(1 << num_extra, dtype=complex, format="csr")
    if sp.issparse(u):
        return sp.kron(eye, u, format="csr")
    return np.kron(np.eye(1 << num_extra), u)


def _assert_unitary(u, tol: float):
    dev = unitarity_deviation(u)
    if dev > tol:
        raise NonUnitary(f"matrix deviates from unitary by {dev:.3g}")


def unitarity_deviation(u) -> float:
    eye = sp.identity(u.shape[0], dtype=complex, format="csr")
    if sp.issparse(u):
        d = (u.conj().T @ u - eye)
        return float(abs(d).max()) if d.nnz else 0.0
    return float(np.abs(np.asarray(u).conj().T @ u - np.eye(u.shape[0])).max())


@dataclass(frozen=True)
class Comparison:
    equal: bool
    deviation: float

    def __bool__(self):
        return self.equal


def equivalent(a, b, up_to_global_phase: bool = False, tol: float = 1e-9) -> Comparison:
    """Compare two matrices entrywise, optionally after removing a global phase.

    The phase is taken from the largest-magnitude entry of ``B^dagger A``.
    """
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    if up_to_global_phase:
        overlap = b.conj().T @ a
        if sp.issparse(overlap):
            overlap = overlap.tocoo()
            vals = overlap.data
        else:
            vals = np.asarray(overlap).ravel()
        if vals.size:
            big = vals[np.argmax(np.abs(vals))]
            if abs(big) > 0:
                a = a * (abs(big) / big)
    diff = a - b
    if sp.issparse(diff):
        dev = float(abs(diff).max()) if diff.nnz else 0.0
    else:
        dev = float(np.abs(diff).max()) if diff.size else 0.0
    return Comparison(dev <= tol, dev)


def fermionic_operator_matrix(indices: Sequence[int], daggers: Sequence[bool],
                              num_orbitals: int, sparse: bool = False):
    """Product ``c_{i0} c_{i1} ...`` of ladder operators, built in the occupation basis.

    Each factor acts as ``a_p|..n_p..> = (-1)^(sum_{t<p} n_t) |..n_p - 1..>``
    (and the adjoint for creation), with no reference to Pauli matrices.
    """
    _check_size(num_orbitals, 12)
    dim = 1 << num_orbitals
    x = np.arange(dim, dtype=np.int64)
    out = sp.identity(dim, dtype=complex, format="csr")
    for p, dagger in zip(indices, daggers):
        if not 0 <= p < num_orbitals:
            raise ValueError(f"orbital {p} outside register of {num_orbitals}")
        occ = _bit(x, p)
        ok = occ == (0 if dagger else 1)
        below = x & ((1 << p) - 1)
        sign = np.array([-1.0 if bin(v).count("1") % 2 else 1.0 for v in below[ok]])
        op = sp.csr_matrix(
            (sign.astype(complex), (x[ok] ^ (1 << p), x[ok])), shape=(dim, dim)
        )
        out = out @ op
    return out if sparse else out.toarray()


def dirty_transparency_deviation(u, num_low: int, num_dirty: int) -> float:
    """How far ``u`` is from ``I_dirty (x) V`` over every dirty basis state.

    ``num_low`` counts the qubits below the dirty register. The block for
    dirty input ``d`` and output ``d'`` must vanish for ``d != d'`` and
    equal the ``d = 0`` block otherwise.
    """
    u = sp.csr_matrix(u)
    low = 1 << num_low
    ref = u[:low, :low]
    worst = 0.0
    for d_out in range(1 << num_dirty):
        for d_in in range(1 << num_dirty):
            blk = u[d_out * low:(d_out + 1) * low, d_in * low:(d_in + 1) * low]
            diff = blk - ref if d_in == d_out else blk
            if diff.nnz:
                worst = max(worst, float(abs(diff).max()))
    return worst


# -- randomized trials ---------------------------------------------------------

FAMILY_ORDER = (
    "number", "hopping", "number_number", "number_excitation", "double_excitation",
)
_RAW_SHAPE = {
    # family -> (distinct orbitals, builder of (creations, annihilations))
    "number": (1, lambda o: ([o[0]], [o[0]])),
    "hopping": (2, lambda o: ([o[0]], [o[1]])),
    "number_number": (2, lambda o: ([o[0], o[1]], [o[0], o[1]])),
    "number_excitation": (3, lambda o: ([o[0], o[1]], [o[0], o[2]])),
    "double_excitation": (4, lambda o: ([o[0], o[1]], [o[2], o[3]])),
}


@dataclass(frozen=True)
class Trial:
    term: FermionTerm
    gamma: float
    mode: str
    controlled: bool
    lowered: bool


@dataclass(frozen=True)
class TrialResult:
    trial: Trial
    deviation: float
    passed: bool

    def line(self) -> str:
        t = self.trial
        idx = ",".join(map(str, t.term.indices))
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {t.term.family.value}({idx}) sign={t.term.sign:+d} "
            f"M={t.term.num_orbitals} gamma={t.gamma:.6f} mode={t.mode} "
            f"controlled={int(t.controlled)} lowered={int(t.lowered)} "
            f"deviation={self.deviation:.3e}"
        )


def random_trials(n: int, max_orbitals: int = 8, seed: int = 0) -> list[Trial]:
    """Seeded trials cycling through families and compile settings.

    Trial ``i`` uses family ``i mod 5`` and takes mode, control and lowering
    from the bits of ``i // 5``, so every combination recurs.
    """
    from jwgadget.fermion import classify_raw

    rng = np.random.default_rng(seed)
    trials = []
    for i in range(n):
        family = FAMILY_ORDER[i % 5]
        combo = i // 5
        mode = "gadget" if combo % 2 == 0 else "naive"
        controlled = bool((combo >> 1) & 1)
        lowered = bool((combo >> 2) & 1)
        k, build = _RAW_SHAPE[family]
        m = int(rng.integers(k, max(k, max_orbitals) + 1))
        orbitals = [int(v) for v in rng.permutation(m)[:k]]
        cre, ann = build(orbitals)
        if len(cre) == 2:
            # raw operator order is shuffled so both canonical signs occur
            cre = [cre[j] for j in rng.permutation(2)]
            ann = [ann[j] for j in rng.permutation(2)]
        coeff = float(rng.uniform(-1.0, 1.0))
        term = classify_raw(cre, ann, coeff, m)
        gamma = float(np.pi - rng.uniform(0.0, 2 * np.pi))
        trials.append(Trial(term, gamma, mode, controlled, lowered))
    return trials


def run_trial(trial: Trial, tol: float = 1e-9) -> TrialResult:
    from jwgadget.gadget import compile_term

    circ = compile_term(
        trial.term, trial.gamma, trial.mode, trial.controlled, lower=trial.lowered
    )
    ref = exact_term_exponential(trial.term, trial.gamma, sparse=True)
    if trial.controlled:
        ref = controlled_block(ref, check=False)
    ref = pad_identity(ref, circ.num_dirty)
    cmp = equivalent(sparse_unitary(circ), ref, up_to_global_phase=not trial.controlled, tol=tol)
    return TrialResult(trial, cmp.deviation, cmp.equal)
