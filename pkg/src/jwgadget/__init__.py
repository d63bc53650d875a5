"""Compile Jordan-Wigner-mapped fermionic terms to Pauli-rotation circuits and count T gates.

Two routes are provided: one rotation per Pauli string (``compile_naive``)
and a multi-controlled-Z gadget needing two rotations per term
(``compile_gadget``). ``verifier`` checks both against exact matrices.
"""

from jwgadget.circuit import Circuit, census, compose, inverse
from jwgadget.cost import CostReport, SynthesisParams, compare, cost_report
from jwgadget.fermion import Family, FermionTerm, classify_raw, parse_hamiltonian
from jwgadget.gadget import compile_diagonal, compile_gadget, compile_term, decompose_mcz
from jwgadget.jordan_wigner import jw_ladder, jw_pauli_expansion, jw_projector_form
from jwgadget.naive import compile_naive

__all__ = [
    "Circuit", "census", "compose", "inverse",
    "CostReport", "SynthesisParams", "compare", "cost_report",
    "Family", "FermionTerm", "classify_raw", "parse_hamiltonian",
    "compile_diagonal", "compile_gadget", "compile_term", "decompose_mcz",
    "jw_ladder", "jw_pauli_expansion", "jw_projector_form",
    "compile_naive",
]
