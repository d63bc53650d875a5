"""Sparse Pauli strings and sums over a fixed-width qubit register.

A string is stored as a sorted tuple of ``(qubit, letter)`` pairs with the
identity letters left out. Qubit 0 is the least significant bit of a
computational-basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np
import scipy.sparse as sp

from jwgadget.errors import ParseError, WidthMismatch

Letters = tuple[tuple[int, str], ...]

PRUNE_TOL = 1e-12

# single-qubit products: (a, b) -> (phase, letter) with a*b = phase*letter
_MUL = {
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


def normalize_letters(letters: Mapping[int, str] | Iterable[tuple[int, str]]) -> Letters:
    items = letters.items() if isinstance(letters, Mapping) else letters
    out = {}
    for q, ch in items:
        ch = ch.upper()
        if ch not in "IXYZ":
            raise ValueError(f"bad Pauli letter {ch!r}")
        if int(q) in out:
            raise ValueError(f"qubit {q} listed twice")
        out[int(q)] = ch
    return tuple(sorted((q, ch) for q, ch in out.items() if ch != "I"))


def multiply_letters(a: Letters, b: Letters) -> tuple[complex, Letters]:
    da, db = dict(a), dict(b)
    phase: complex = 1
    out = {}
    for q in set(da) | set(db):
        x, y = da.get(q, "I"), db.get(q, "I")
        if x == "I":
            out[q] = y
        elif y == "I":
            out[q] = x
        else:
            ph, ch = _MUL[x, y]
            phase *= ph
            if ch != "I":
                out[q] = ch
    return phase, tuple(sorted(out.items()))


def letters_commute(a: Letters, b: Letters) -> bool:
    db = dict(b)
    clashes = sum(1 for q, ch in a if q in db and db[q] != ch)
    return clashes % 2 == 0


def format_letters(letters: Letters) -> str:
    return " ".join(f"{ch}{q}" for q, ch in letters) or "I"


def parse_letters(text: str) -> Letters:
    toks = text.split()
    if toks == ["I"]:
        return ()
    try:
        return normalize_letters((int(tok[1:]), tok[0]) for tok in toks)
    except (ValueError, IndexError):
        raise ParseError(f"bad Pauli string {text!r}") from None


def pauli_action(letters: Letters, num_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(targets, phases)`` with ``P|x> = phases[x] |targets[x]>``."""
    x = np.arange(1 << num_qubits, dtype=np.int64)
    flip = 0
    phases = np.ones(x.shape, dtype=complex)
    for q, ch in letters:
        if q >= num_qubits:
            raise WidthMismatch(f"qubit {q} outside register of {num_qubits}")
        bit = (x >> q) & 1
        if ch in "XY":
            flip |= 1 << q
        if ch == "Z":
            phases *= 1 - 2 * bit
        elif ch == "Y":
            # Y|0> = i|1>, Y|1> = -i|0>
            phases *= 1j * (1 - 2 * bit)
    return x ^ flip, phases


def pauli_matrix(letters: Letters, num_qubits: int, sparse: bool = False):
    targets, phases = pauli_action(letters, num_qubits)
    dim = 1 << num_qubits
    cols = np.arange(dim)
    mat = sp.csr_matrix((phases, (targets, cols)), shape=(dim, dim))
    return mat if sparse else mat.toarray()


@dataclass(frozen=True)
class PauliString:
    coefficient: complex
    letters: Letters
    width: int

    def __post_init__(self):
        letters = normalize_letters(self.letters)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        if letters and letters[-1][0] >= self.width:
            raise WidthMismatch(f"qubit {letters[-1][0]} outside width {self.width}")

    @classmethod
    def from_text(cls, text: str, width: int, coefficient: complex = 1) -> PauliString:
        return cls(coefficient, parse_letters(text), width)

    @property
    def label(self) -> str:
        return format_letters(self.letters)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.letters)

    def letter(self, qubit: int) -> str:
        return dict(self.letters).get(qubit, "I")

    def to_matrix(self, sparse: bool = False):
        return self.coefficient * pauli_matrix(self.letters, self.width, sparse)

    def __mul__(self, other: PauliString) -> PauliString:
        if self.width != other.width:
            raise WidthMismatch(f"{self.width} != {other.width}")
        phase, letters = multiply_letters(self.letters, other.letters)
        return PauliString(self.coefficient * other.coefficient * phase, letters, self.width)

    def commutes_with(self, other: PauliString) -> bool:
        return letters_commute(self.letters, other.letters)


class PauliSum:
    """A linear combination of Pauli strings with merged, pruned coefficients."""

    def __init__(self, strings: Iterable[PauliString] = (), width: int | None = None):
        strings = list(strings)
        if width is None:
            if not strings:
                raise ValueError("width is required for an empty PauliSum")
            width = strings[0].width
        self.width = width
        terms: dict[Letters, complex] = {}
        for s in strings:
            if s.width != width:
                raise WidthMismatch(f"string of width {s.width} in sum of width {width}")
            terms[s.letters] = terms.get(s.letters, 0) + s.coefficient
        self._terms = _prune(terms)

    @classmethod
    def _from_terms(
        cls, terms: dict[Letters, complex], width: int, ref: float | None = None
    ) -> PauliSum:
        out = cls.__new__(cls)
        out.width = width
        out._terms = _prune(terms, ref)
        return out

    @classmethod
    def identity(cls, width: int, coefficient: complex = 1) -> PauliSum:
        return cls._from_terms({(): complex(coefficient)}, width)

    @property
    def terms(self) -> dict[Letters, complex]:
        return dict(self._terms)

    def strings(self) -> list[PauliString]:
        return [PauliString(c, letters, self.width) for letters, c in sorted(self._terms.items())]

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.strings())

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, PauliSum) or other.width != self.width:
            return NotImplemented
        return len((self - other)._terms) == 0

    def _check(self, other: PauliSum):
        if self.width != other.width:
            raise WidthMismatch(f"{self.width} != {other.width}")

    def __add__(self, other: PauliSum) -> PauliSum:
        self._check(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        return PauliSum._from_terms(terms, self.width, max(self.norm1(), other.norm1()))

    def __neg__(self) -> PauliSum:
        return self * -1

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-other)

    def __mul__(self, other) -> PauliSum:
        if not isinstance(other, PauliSum):
            return PauliSum._from_terms(
                {k: c * other for k, c in self._terms.items()}, self.width
            )
        self._check(other)
        terms: dict[Letters, complex] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                phase, k = multiply_letters(ka, kb)
                terms[k] = terms.get(k, 0) + ca * cb * phase
        return PauliSum._from_terms(terms, self.width, self.norm1() * other.norm1())

    __rmul__ = __mul__

    def norm1(self) -> float:
        return sum(abs(c) for c in self._terms.values())

    def commutator(self, other: PauliSum) -> PauliSum:
        return self * other - other * self

    def dagger(self) -> PauliSum:
        return PauliSum._from_terms(
            {k: c.conjugate() for k, c in self._terms.items()}, self.width
        )

    def is_hermitian(self, tol: float = PRUNE_TOL) -> bool:
        return all(abs(c.imag) <= tol * max(1.0, abs(c)) for c in self._terms.values())

    def to_matrix(self, sparse: bool = False):
        dim = 1 << self.width
        mat = sp.csr_matrix((dim, dim), dtype=complex)
        for letters, c in self._terms.items():
            mat = mat + c * pauli_matrix(letters, self.width, sparse=True)
        return mat if sparse else mat.toarray()

    def to_text(self) -> str:
        return "".join(
            f"{s.coefficient.real!r} {s.coefficient.imag!r} {s.label}\n"
            for s in self.strings()
        )

    @classmethod
    def from_text(cls, text: str, width: int) -> PauliSum:
        strings = []
        for n, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(maxsplit=2)
            if len(parts) < 3:
                raise ParseError("expected '<re> <im> <letters>'", n)
            try:
                coeff = complex(float(parts[0]), float(parts[1]))
            except ValueError:
                raise ParseError(f"bad coefficient in {line!r}", n) from None
            strings.append(PauliString(coeff, parse_letters(parts[2]), width))
        return cls(strings, width=width)

    def __repr__(self):
        inner = " + ".join(f"({c:.6g})*{format_letters(k)}" for k, c in sorted(self._terms.items()))
        return f"PauliSum[{self.width}]({inner or '0'})"


def _prune(terms: dict[Letters, complex], ref: float | None = None) -> dict[Letters, complex]:
    # ref: magnitude of the operands that produced ``terms``
    if not terms:
        return {}
    if ref is None:
        ref = max(abs(c) for c in terms.values())
    cutoff = PRUNE_TOL * ref
    return {k: complex(c) for k, c in terms.items() if abs(c) > cutoff}


def pauli_sum_algebra(a: PauliSum, b: PauliSum, op: str) -> PauliSum:
    """Combine two sums with ``op`` in ``{"add", "multiply", "commutator"}``."""
    if a.width != b.width:
        raise WidthMismatch(f"{a.width} != {b.width}")
    if op == "add":
        return a + b
    if op == "multiply":
        return a * b
    if op == "commutator":
        return a.commutator(b)
    raise ValueError(f"unknown operation {op!r}")
