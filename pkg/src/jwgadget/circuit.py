"""Gate-level intermediate representation shared by the compilers.

Qubit addressing: system qubits are ``0 .. M-1``; ancilla ``k`` (written
``a<k>`` in text form) is qubit ``M + k``. When a circuit has a control
ancilla it is ``a0`` and the dirty ancillae follow it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

from jwgadget.errors import ParseError, ShapeMismatch
from jwgadget.pauli import Letters, format_letters, normalize_letters, parse_letters

TWO_PI = 2 * math.pi


def normalize_angle(angle: float) -> float:
    """Map ``angle`` into ``(-2pi, 2pi]``; ``exp(i angle P)`` has period 2pi."""
    if angle == -TWO_PI:
        return TWO_PI
    if -TWO_PI < angle <= TWO_PI:
        return float(angle)
    a = math.fmod(angle, TWO_PI)
    return TWO_PI if a == -TWO_PI else a


@dataclass(frozen=True)
class PauliX:
    target: int

    @property
    def qubits(self):
        return (self.target,)


@dataclass(frozen=True)
class Hadamard:
    target: int

    @property
    def qubits(self):
        return (self.target,)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    @property
    def qubits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class CZ:
    a: int
    b: int

    @property
    def qubits(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Toffoli:
    c1: int
    c2: int
    target: int

    @property
    def qubits(self):
        return (self.c1, self.c2, self.target)


@dataclass(frozen=True)
class MultiControlledZ:
    """Z on ``target`` when every control matches its polarity.

    ``controls`` holds ``(qubit, closed)`` pairs: a closed control fires on
    ``|1>``, an open one on ``|0>``. ``dirty`` lists borrowed qubits that a
    Toffoli-level decomposition may use; the gate itself ignores them.
    """

    controls: tuple[tuple[int, bool], ...]
    target: int
    dirty: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "controls", tuple((int(q), bool(c)) for q, c in self.controls)
        )
        object.__setattr__(self, "dirty", tuple(self.dirty))

    @property
    def arity(self) -> int:
        return len(self.controls)

    @property
    def qubits(self):
        return tuple(q for q, _ in self.controls) + (self.target,) + self.dirty


@dataclass(frozen=True)
class Rotation:
    """``exp(i * angle * P)`` for a Pauli string ``P`` with unit coefficient."""

    axis: Letters
    angle: float

    def __post_init__(self):
        axis = normalize_letters(self.axis)
        if not axis:
            raise ValueError("rotation axis must be a non-identity Pauli string")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))

    @property
    def qubits(self):
        return tuple(q for q, _ in self.axis)


@dataclass(frozen=True)
class GlobalPhase:
    """Scalar ``exp(i * angle)``; costs nothing but keeps controlled blocks phase-exact."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))

    @property
    def qubits(self):
        return ()


Gate = Union[PauliX, Hadamard, CNOT, CZ, Toffoli, MultiControlledZ, Rotation, GlobalPhase]

CLIFFORD_GATES = (PauliX, Hadamard, CNOT, CZ)
SELF_INVERSE = (PauliX, Hadamard, CNOT, CZ, Toffoli, MultiControlledZ)


@dataclass(frozen=True)
class Circuit:
    num_system: int
    has_control: bool = False
    num_dirty: int = 0
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        n = self.num_qubits
        for g in self.gates:
            qs = g.qubits
            if len(set(qs)) != len(qs):
                raise ValueError(f"repeated qubit in {g}")
            if any(not 0 <= q < n for q in qs):
                raise ValueError(f"{g} addresses a qubit outside 0..{n - 1}")

    @property
    def num_ancillae(self) -> int:
        return int(self.has_control) + self.num_dirty

    @property
    def num_qubits(self) -> int:
        return self.num_system + self.num_ancillae

    @property
    def control_qubit(self) -> int | None:
        return self.num_system if self.has_control else None

    @property
    def dirty_qubits(self) -> tuple[int, ...]:
        start = self.num_system + int(self.has_control)
        return tuple(range(start, start + self.num_dirty))

    @property
    def shape(self) -> tuple[int, bool, int]:
        return (self.num_system, self.has_control, self.num_dirty)

    def __len__(self):
        return len(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return replace(self, gates=tuple(gates))


def compose(a: Circuit, b: Circuit) -> Circuit:
    """``a`` followed by ``b``."""
    if a.shape != b.shape:
        raise ShapeMismatch(f"register shapes differ: {a.shape} vs {b.shape}")
    return a.with_gates(a.gates + b.gates)


def inverse_gate(g: Gate) -> Gate:
    if isinstance(g, Rotation):
        return Rotation(g.axis, -g.angle)
    if isinstance(g, GlobalPhase):
        return GlobalPhase(-g.angle)
    return g


def inverse(c: Circuit) -> Circuit:
    return c.with_gates(inverse_gate(g) for g in reversed(c.gates))


@dataclass(frozen=True)
class Census:
    rotations: int = 0
    toffolis: int = 0
    multi_controlled: tuple[int, ...] = ()
    cliffords: int = 0
    global_phases: int = 0

    def as_dict(self) -> dict:
        return {
            "rotations": self.rotations,
            "toffolis": self.toffolis,
            "multi_controlled": list(self.multi_controlled),
            "cliffords": self.cliffords,
            "global_phases": self.global_phases,
        }


def census(c: Circuit) -> Census:
    kinds = Counter(type(g) for g in c.gates)
    return Census(
        rotations=kinds[Rotation],
        toffolis=kinds[Toffoli],
        multi_controlled=tuple(g.arity for g in c.gates if isinstance(g, MultiControlledZ)),
        cliffords=sum(kinds[k] for k in CLIFFORD_GATES),
        global_phases=kinds[GlobalPhase],
    )


# -- text format -------------------------------------------------------------


def _qname(q: int, num_system: int) -> str:
    return str(q) if q < num_system else f"a{q - num_system}"


def _qparse(tok: str, num_system: int) -> int:
    try:
        if tok.startswith("a"):
            return num_system + int(tok[1:])
        return int(tok)
    except ValueError:
        raise ParseError(f"bad qubit {tok!r}") from None


def _format_gate(g: Gate, m: int) -> str:
    n = lambda q: _qname(q, m)  # noqa: E731
    if isinstance(g, PauliX):
        return f"X {n(g.target)}"
    if isinstance(g, Hadamard):
        return f"H {n(g.target)}"
    if isinstance(g, CNOT):
        return f"CNOT {n(g.control)} {n(g.target)}"
    if isinstance(g, CZ):
        return f"CZ {n(g.a)} {n(g.b)}"
    if isinstance(g, Toffoli):
        return f"TOFF {n(g.c1)} {n(g.c2)} {n(g.target)}"
    if isinstance(g, MultiControlledZ):
        ctl = " ".join(("+" if closed else "-") + n(q) for q, closed in g.controls)
        line = f"MCZ {ctl} : {n(g.target)}".replace("MCZ  :", "MCZ :")
        if g.dirty:
            line += " dirty " + " ".join(n(q) for q in g.dirty)
        return line
    if isinstance(g, Rotation):
        # ancilla letters are written with their a-prefixed names
        letters = " ".join(f"{ch}{n(q)}" for q, ch in g.axis)
        return f"ROT {g.angle!r} {letters}"
    if isinstance(g, GlobalPhase):
        return f"PHASE {g.angle!r}"
    raise TypeError(f"unknown gate {g!r}")


def to_text(c: Circuit, lower: bool = False) -> str:
    """Serialize; with ``lower`` every multi-controlled Z is expanded to Toffoli level."""
    if lower:
        from jwgadget.gadget import lower_circuit

        c = lower_circuit(c)
    head = f"circuit M={c.num_system} control={int(c.has_control)} dirty={c.num_dirty}"
    return "\n".join([head] + [_format_gate(g, c.num_system) for g in c.gates]) + "\n"


def _parse_gate(toks: Sequence[str], m: int) -> Gate:
    op, args = toks[0], toks[1:]
    q = lambda t: _qparse(t, m)  # noqa: E731
    simple = {"X": (PauliX, 1), "H": (Hadamard, 1), "CNOT": (CNOT, 2), "CZ": (CZ, 2),
              "TOFF": (Toffoli, 3)}
    if op in simple:
        cls, k = simple[op]
        if len(args) != k:
            raise ParseError(f"{op} takes {k} qubits")
        return cls(*map(q, args))
    if op == "MCZ":
        if ":" not in args:
            raise ParseError("MCZ needs ': <target>'")
        colon = args.index(":")
        controls = []
        for tok in args[:colon]:
            if tok[:1] not in "+-" or len(tok) < 2:
                raise ParseError(f"control {tok!r} needs a +/- polarity")
            controls.append((q(tok[1:]), tok[0] == "+"))
        rest = args[colon + 1:]
        if not rest:
            raise ParseError("MCZ target missing")
        dirty = ()
        if len(rest) > 1:
            if rest[1] != "dirty":
                raise ParseError(f"unexpected {rest[1]!r} after MCZ target")
            dirty = tuple(q(t) for t in rest[2:])
        return MultiControlledZ(tuple(controls), q(rest[0]), dirty)
    if op == "ROT":
        if len(args) < 2:
            raise ParseError("ROT needs an angle and a Pauli string")
        try:
            angle = float(args[0])
        except ValueError:
            raise ParseError(f"bad angle {args[0]!r}") from None
        axis = []
        for tok in args[1:]:
            if tok[:1] not in ("X", "Y", "Z"):
                raise ParseError(f"bad Pauli factor {tok!r}")
            axis.append((q(tok[1:]), tok[0]))
        return Rotation(tuple(axis), angle)
    if op == "PHASE":
        try:
            return GlobalPhase(float(args[0]))
        except (ValueError, IndexError):
            raise ParseError("PHASE needs an angle") from None
    raise ParseError(f"unknown gate {op!r}")


def from_text(text: str) -> Circuit:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    numbered = [(i, ln) for i, ln in enumerate(lines, start=1) if ln]
    if not numbered or not numbered[0][1].startswith("circuit"):
        raise ParseError("missing 'circuit' header", numbered[0][0] if numbered else None)
    lineno, header = numbered[0]
    try:
        fields = dict(tok.split("=", 1) for tok in header.split()[1:])
        m, ctl, dirty = int(fields["M"]), int(fields["control"]), int(fields["dirty"])
    except (KeyError, ValueError):
        raise ParseError(f"bad header {header!r}", lineno) from None
    gates = []
    for lineno, ln in numbered[1:]:
        try:
            gates.append(_parse_gate(ln.split(), m))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    try:
        return Circuit(m, bool(ctl), dirty, gates)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


__all__ = [
    "PauliX", "Hadamard", "CNOT", "CZ", "Toffoli", "MultiControlledZ", "Rotation",
    "GlobalPhase", "Gate", "Circuit", "Census", "compose", "inverse", "census",
    "to_text", "from_text", "normalize_angle", "format_letters", "parse_letters",
]
