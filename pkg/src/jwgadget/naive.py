"""Baseline compilation: one Pauli-product rotation per Jordan-Wigner string.

A controlled rotation ``exp(i t |1><1|_anc (x) P)`` is written as the pair
``exp(i t/2 P) exp(-i t/2 Z_anc P)``, so control doubles the rotation count.
The identity component of diagonal terms becomes a phase on the ancilla
(controlled) or a global phase (uncontrolled).
"""

from __future__ import annotations

from jwgadget.circuit import Circuit, GlobalPhase, Rotation
from jwgadget.fermion import FermionTerm
from jwgadget.jordan_wigner import jw_pauli_expansion


def compile_naive(term: FermionTerm, gamma: float, controlled: bool = False) -> Circuit:
    """Circuit for ``exp(i gamma H)`` (or its controlled version) from the Pauli expansion.

    Rotations are kept exact; no angle synthesis happens here.
    """
    m = term.num_orbitals
    anc = ((m, "Z"),)
    gates = []
    for string in jw_pauli_expansion(term).strings():
        theta = gamma * string.coefficient.real
        if not string.letters:
            if controlled:
                gates += [Rotation(anc, -theta / 2), GlobalPhase(theta / 2)]
            else:
                gates.append(GlobalPhase(theta))
        elif controlled:
            gates.append(Rotation(string.letters, theta / 2))
            gates.append(Rotation(string.letters + anc, -theta / 2))
        else:
            gates.append(Rotation(string.letters, theta))
    return Circuit(m, controlled, 0, gates)
