"""Gadget compilation of Jordan-Wigner term exponentials.

For a swap generator ``s (|b><a| + |a><b|) (x) Z...Z`` the circuit is

1. a CNOT ladder from the rotation qubit (lowest qubit on which ``a`` and
   ``b`` differ) onto the other differing qubits, after which the two
   patterns differ only on the rotation qubit;
2. a multi-controlled Z targeting the rotation qubit, controlled on the
   remaining support qubits at their now-common bit values (and on the
   control ancilla, if any);
3. ``exp(-i g s/2 X Z...Z)``;
4. the same multi-controlled Z;
5. ``exp(+i g s/2 X Z...Z)``;
6. the CNOT ladder undone.

Outside the controlled subspace the two rotations cancel; inside it the
multi-controlled Z anticommutes with the rotation axis and the angles add.
Only the multi-controlled Z gates need the extra control.
"""

from __future__ import annotations

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
from jwgadget.errors import DiagonalTermNotGadgetizable, InsufficientDirtyAncillae
from jwgadget.fermion import FermionTerm
from jwgadget.jordan_wigner import ProjectorForm, jw_projector_form
from jwgadget.naive import compile_naive

DEFAULT_DIRTY_BUDGET = 2


def dirty_required(num_controls: int) -> int:
    return max(num_controls - 2, 0)


def ladder_plan(form: ProjectorForm) -> tuple[int, list[tuple[int, int]], dict[int, int]]:
    """Rotation qubit, CNOT ladder and the common bit left on every other swap qubit."""
    differ = form.differing_qubits
    pivot = min(differ)
    ladder = [(pivot, t) for t in differ if t != pivot]
    bits_a = dict(zip(form.swap_qubits, map(int, form.pattern_a)))
    common = {}
    for q in form.swap_qubits:
        if q == pivot:
            continue
        bit = bits_a[q]
        if q in differ:
            bit ^= bits_a[pivot]
        common[q] = bit
    return pivot, ladder, common


def map_pattern(pattern: dict[int, int], ladder) -> dict[int, int]:
    """Apply a CNOT ladder to a classical bit assignment."""
    out = dict(pattern)
    for c, t in ladder:
        out[t] ^= out[c]
    return out


def compile_gadget(
    term: FermionTerm,
    gamma: float,
    controlled: bool = False,
    dirty_budget: int = DEFAULT_DIRTY_BUDGET,
) -> Circuit:
    if term.family.diagonal:
        raise DiagonalTermNotGadgetizable(
            f"{term.family.value} terms are compiled by compile_diagonal"
        )
    form = jw_projector_form(term)
    m = term.num_orbitals
    pivot, ladder, common = ladder_plan(form)

    controls = [(q, bool(bit)) for q, bit in sorted(common.items())]
    if controlled:
        controls.append((m, True))
    need = dirty_required(len(controls))
    if dirty_budget < need:
        raise InsufficientDirtyAncillae(need, dirty_budget)
    first_dirty = m + int(controlled)
    dirty = tuple(range(first_dirty, first_dirty + need))

    mcz = MultiControlledZ(tuple(controls), pivot, dirty)
    axis = ((pivot, "X"),) + tuple((t, "Z") for t in sorted(form.z_string))
    half = gamma * form.scale / 2
    cnots = [CNOT(c, t) for c, t in ladder]
    gates = (
        cnots
        + [mcz, Rotation(axis, -half), mcz, Rotation(axis, half)]
        + cnots[::-1]
    )
    return Circuit(m, controlled, need, gates)


def _phase_on_all_ones(qubits: list[int], theta: float) -> list:
    """Gates for ``exp(i theta n_q0 n_q1 ...)`` on up to three qubits, phase-exact."""
    if len(qubits) == 1:
        (a,) = qubits
        return [GlobalPhase(theta / 2), Rotation(((a, "Z"),), -theta / 2)]
    if len(qubits) == 2:
        a, b = qubits
        return [
            GlobalPhase(theta / 4),
            Rotation(((a, "Z"),), -theta / 4),
            Rotation(((b, "Z"),), -theta / 4),
            Rotation(((a, "Z"), (b, "Z")), theta / 4),
        ]
    if len(qubits) == 3:
        # n_a n_b n_c = n_a n_b / 2 - n_a n_b Z_c / 2; the second factor is a
        # Z_c rotation whose sign the Toffoli flips on the n_a n_b subspace
        a, b, c = qubits
        zc = ((c, "Z"),)
        tof = Toffoli(a, b, c)
        return (
            [Rotation(zc, -theta / 4), tof, Rotation(zc, theta / 4), tof]
            + _phase_on_all_ones([a, b], theta / 2)
        )
    raise ValueError("diagonal phases are supported on at most three qubits")


def compile_diagonal(term: FermionTerm, gamma: float, controlled: bool = True) -> Circuit:
    """Phase-exact circuit for a number or number-number term."""
    if not term.family.diagonal:
        raise ValueError(f"{term.family.value} is not a diagonal family")
    form = jw_projector_form(term)
    m = term.num_orbitals
    qubits = ([m] if controlled else []) + list(form.swap_qubits)
    return Circuit(m, controlled, 0, _phase_on_all_ones(qubits, gamma * form.scale))


def decompose_mcz(gate: MultiControlledZ, dirty=None) -> list:
    """Lower a multi-controlled Z to X, H, CZ and Toffoli gates.

    Three or more controls use the borrowed-ancilla staircase, which needs
    ``controls - 2`` dirty qubits and ``4 * (controls - 2)`` Toffolis; the
    dirty qubits end in their initial state whatever it was.
    """
    dirty = tuple(gate.dirty if dirty is None else dirty)
    n = gate.arity
    need = dirty_required(n)
    if len(dirty) < need:
        raise InsufficientDirtyAncillae(need, len(dirty))
    ctl = [q for q, _ in gate.controls]
    t = gate.target
    flips = [PauliX(q) for q, closed in gate.controls if not closed]
    if n == 0:
        core = [Hadamard(t), PauliX(t), Hadamard(t)]
    elif n == 1:
        core = [CZ(ctl[0], t)]
    else:
        core = [Hadamard(t)] + _mcx_staircase(ctl, t, dirty[:need]) + [Hadamard(t)]
    return flips + core + flips


def _mcx_staircase(ctl: list[int], target: int, dirty) -> list[Toffoli]:
    n = len(ctl)
    if n == 2:
        return [Toffoli(ctl[0], ctl[1], target)]
    top = Toffoli(ctl[-1], dirty[-1], target)
    down = [Toffoli(ctl[k + 2], dirty[k], dirty[k + 1]) for k in range(n - 4, -1, -1)]
    base = Toffoli(ctl[0], ctl[1], dirty[0])
    half = [top] + down + [base] + down[::-1]
    return half + half


def lower_circuit(c: Circuit) -> Circuit:
    gates = []
    for g in c.gates:
        if isinstance(g, MultiControlledZ):
            gates.extend(decompose_mcz(g))
        else:
            gates.append(g)
    return c.with_gates(gates)


def compile_term(
    term: FermionTerm,
    gamma: float,
    mode: str = "gadget",
    controlled: bool = True,
    dirty_budget: int = DEFAULT_DIRTY_BUDGET,
    lower: bool = False,
) -> Circuit:
    """Route a term to the requested compiler; diagonal terms use ``compile_diagonal`` in gadget mode."""
    if mode == "naive":
        circ = compile_naive(term, gamma, controlled)
    elif mode == "gadget":
        if term.family.diagonal:
            circ = compile_diagonal(term, gamma, controlled)
        else:
            circ = compile_gadget(term, gamma, controlled, dirty_budget)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return lower_circuit(circ) if lower else circ
