"""Jordan-Wigner images of canonical terms: Pauli sums and projector forms.

The annihilation operator on orbital ``p`` maps to
``(X_p + i Y_p)/2`` with a ``Z`` on every lower qubit, i.e. ``|0><1|_p``
dressed by the parity of the orbitals below it.

Every non-diagonal term pair collapses to a swap between two bitstrings on
its support qubits, tensored with a Z-string::

    coefficient * sign * (op + op^dagger) = scale * (|b><a| + |a><b|) (x) Z...Z

For the ordered double excitation ``p < q < r < s`` the structural scalar
is ``-1``: ``a+_p a+_q a_r a_s |0011> = -|1100>``. Each of the eight Pauli
strings in the expansion then carries magnitude ``|coefficient| / 8``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from jwgadget.errors import IndexOutOfRange
from jwgadget.fermion import Family, FermionTerm
from jwgadget.pauli import PauliString, PauliSum, pauli_matrix


@dataclass(frozen=True)
class ProjectorForm:
    """``scale * (|b><a| + |a><b|)`` on ``swap_qubits`` tensored with ``Z`` on ``z_string``.

    Bit ``k`` of a pattern string belongs to ``swap_qubits[k]``. For the
    diagonal families the two patterns coincide and the operator is
    ``scale * |a><a|``.
    """

    swap_qubits: tuple[int, ...]
    pattern_a: str
    pattern_b: str
    z_string: frozenset[int]
    scale: float
    width: int

    def __post_init__(self):
        object.__setattr__(self, "z_string", frozenset(self.z_string))
        n = len(self.swap_qubits)
        if len(self.pattern_a) != n or len(self.pattern_b) != n:
            raise ValueError("pattern length must match swap_qubits")
        if self.z_string & set(self.swap_qubits):
            raise ValueError("z_string overlaps swap_qubits")
        if self.scale == 0:
            raise ValueError("projector scale must be non-zero")

    @property
    def diagonal(self) -> bool:
        return self.pattern_a == self.pattern_b

    @property
    def differing_qubits(self) -> tuple[int, ...]:
        return tuple(
            q for q, a, b in zip(self.swap_qubits, self.pattern_a, self.pattern_b) if a != b
        )

    def basis_state(self, pattern: str) -> int:
        """Register index with ``pattern`` on the swap qubits and zeros elsewhere."""
        return sum(1 << q for q, bit in zip(self.swap_qubits, pattern) if bit == "1")

    def unit_matrix(self, sparse: bool = False):
        """Dense (or sparse) matrix of the generator with ``scale`` set to 1."""
        dim = 1 << self.width
        x = np.arange(dim, dtype=np.int64)
        mask = sum(1 << q for q in self.swap_qubits)
        zmask = sum(1 << q for q in self.z_string)
        a, b = self.basis_state(self.pattern_a), self.basis_state(self.pattern_b)
        zsign = 1 - 2 * parity(x & zmask)
        on_a = (x & mask) == a
        on_b = (x & mask) == b
        if self.diagonal:
            rows = x[on_a]
            mat = sp.csr_matrix((zsign[on_a].astype(complex), (rows, rows)), shape=(dim, dim))
        else:
            src = np.concatenate([x[on_a], x[on_b]])
            dst = np.concatenate([(x[on_a] & ~mask) | b, (x[on_b] & ~mask) | a])
            vals = np.concatenate([zsign[on_a], zsign[on_b]]).astype(complex)
            mat = sp.csr_matrix((vals, (dst, src)), shape=(dim, dim))
        return mat if sparse else mat.toarray()

    def matrix(self, sparse: bool = False):
        return self.scale * self.unit_matrix(sparse)

    def to_text(self) -> str:
        qubits = ",".join(map(str, self.swap_qubits))
        z = ",".join(map(str, sorted(self.z_string))) or "-"
        kind = "diag" if self.diagonal else "swap"
        return (
            f"{kind} qubits={qubits} a={self.pattern_a} b={self.pattern_b} "
            f"z={z} scale={self.scale!r}"
        )


def parity(x: np.ndarray) -> np.ndarray:
    """Bit parity of each entry of a non-negative integer array."""
    x = x.copy()
    out = np.zeros_like(x)
    while np.any(x):
        out ^= x & 1
        x >>= 1
    return out


def jw_ladder(p: int, dagger: bool, num_qubits: int) -> PauliSum:
    """Jordan-Wigner image of ``a_p`` (or ``a+_p`` when ``dagger``)."""
    if not 0 <= p < num_qubits:
        raise IndexOutOfRange(f"orbital {p} outside register of {num_qubits}")
    zs = [(t, "Z") for t in range(p)]
    y_coeff = -0.5j if dagger else 0.5j
    return PauliSum(
        [
            PauliString(0.5, zs + [(p, "X")], num_qubits),
            PauliString(y_coeff, zs + [(p, "Y")], num_qubits),
        ],
        width=num_qubits,
    )


def ladder_product(ops, num_qubits: int) -> PauliSum:
    """Pauli image of a product of ladder operators ``[(orbital, is_creation), ...]``."""
    out = PauliSum.identity(num_qubits)
    for p, dagger in ops:
        out = out * jw_ladder(p, dagger, num_qubits)
    return out


def jw_pauli_expansion(term: FermionTerm) -> PauliSum:
    """Pauli sum of ``coefficient * sign * (op [+ op^dagger])`` for a canonical term."""
    prod = ladder_product(term.ladder_ops(), term.num_orbitals)
    if not term.family.diagonal:
        prod = prod + prod.dagger()
    return prod * term.effective_coefficient


def _apply_ladder_bits(ops, bits: int) -> tuple[int, int] | None:
    """Act with a ladder-operator product on a basis state; ``None`` if it vanishes."""
    sign = 1
    for p, dagger in reversed(ops):
        occupied = (bits >> p) & 1
        if occupied == dagger:
            return None
        if bin(bits & ((1 << p) - 1)).count("1") % 2:
            sign = -sign
        bits ^= 1 << p
    return sign, bits


def _z_string(ops, support: set[int], num_qubits: int) -> frozenset[int]:
    # qubit t picks up one Z per ladder operator acting above it
    return frozenset(
        t for t in range(num_qubits)
        if t not in support and sum(1 for p, _ in ops if p > t) % 2
    )


def jw_projector_form(term: FermionTerm) -> ProjectorForm:
    ops = term.ladder_ops()
    swap = term.indices
    support = set(swap)
    # source pattern: annihilated orbitals occupied, created-only ones empty
    annihilated = {p for p, dag in ops if not dag}
    src = sum(1 << p for p in annihilated)
    result = _apply_ladder_bits(ops, src)
    assert result is not None, "canonical product annihilates its own source state"
    structural, dst = result
    pattern_a = "".join(str((src >> q) & 1) for q in swap)
    pattern_b = "".join(str((dst >> q) & 1) for q in swap)
    scale = float(term.effective_coefficient * structural)
    return ProjectorForm(
        swap, pattern_a, pattern_b, _z_string(ops, support, term.num_orbitals),
        scale, term.num_orbitals,
    )


def generator_matrix(term: FermionTerm, sparse: bool = False):
    """Matrix of the Hermitian generator, built from the Pauli expansion."""
    return jw_pauli_expansion(term).to_matrix(sparse)


__all__ = [
    "ProjectorForm",
    "jw_ladder",
    "ladder_product",
    "jw_pauli_expansion",
    "jw_projector_form",
    "generator_matrix",
    "pauli_matrix",
]
