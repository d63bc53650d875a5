"""Fermionic Hamiltonian terms: classification, canonical form and text I/O.

Every stored term stands for a Hermitian operator. Non-diagonal families
(hopping, number-excitation, double-excitation) implicitly include their
Hermitian conjugate, so ``coefficient * sign * (op + op^dagger)`` is the
generator represented by a :class:`FermionTerm`.

Canonical raw operator products per family (0-based orbitals):

=================  ==========================================  ==============
family             canonical product                           constraint
=================  ==========================================  ==============
NUMBER             a+_p a_p
HOPPING            a+_p a_q  (+ h.c.)                          p < q
NUMBER_NUMBER      a+_p a+_q a_q a_p                           p < q
NUMBER_EXCITATION  a+_p a+_q a_p a_r  (+ h.c.)                 q < r
DOUBLE_EXCITATION  a+_p a+_q a_r a_s  (+ h.c.)                 p < q, r < s, p < r
=================  ==========================================  ==============
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from jwgadget.errors import IndexOutOfRange, ParseError, UnclassifiableTerm


class Family(enum.Enum):
    NUMBER = "number"
    HOPPING = "hopping"
    NUMBER_NUMBER = "number_number"
    NUMBER_EXCITATION = "number_excitation"
    DOUBLE_EXCITATION = "double_excitation"

    @property
    def diagonal(self) -> bool:
        return self in (Family.NUMBER, Family.NUMBER_NUMBER)

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {
    Family.NUMBER: 1,
    Family.HOPPING: 2,
    Family.NUMBER_NUMBER: 2,
    Family.NUMBER_EXCITATION: 3,
    Family.DOUBLE_EXCITATION: 4,
}


@dataclass(frozen=True)
class FermionTerm:
    """A canonical Hamiltonian term.

    Attributes:
        family: Which of the five term shapes this is.
        indices: Orbital indices in the slot order of the canonical product
            (see module docstring).
        coefficient: Real prefactor.
        sign: +1 or -1, the permutation parity picked up while reordering
            the raw input into canonical form.
        num_orbitals: Register size; every index is below it.
        text: Original coefficient text, kept for reports only.
    """

    family: Family
    indices: tuple[int, ...]
    coefficient: float = 1.0
    sign: int = 1
    num_orbitals: int | None = None
    text: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(self.indices) != self.family.arity:
            raise ValueError(
                f"{self.family.value} takes {self.family.arity} indices, "
                f"got {self.indices}"
            )
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"repeated orbital in {self.indices}")
        if min(self.indices) < 0:
            raise IndexOutOfRange(f"negative orbital index in {self.indices}")
        if self.num_orbitals is None:
            object.__setattr__(self, "num_orbitals", max(self.indices) + 1)
        elif max(self.indices) >= self.num_orbitals:
            raise IndexOutOfRange(
                f"orbital {max(self.indices)} outside register of "
                f"{self.num_orbitals}"
            )
        _check_canonical(self.family, self.indices)

    @property
    def effective_coefficient(self) -> float:
        return self.sign * self.coefficient

    def ladder_ops(self) -> list[tuple[int, bool]]:
        """The canonical operator product as ``(orbital, is_creation)`` pairs, left to right."""
        return canonical_ladder_ops(self.family, self.indices)

    def with_num_orbitals(self, num_orbitals: int) -> FermionTerm:
        return FermionTerm(
            self.family, self.indices, self.coefficient, self.sign,
            num_orbitals, self.text,
        )

    def __str__(self):
        idx = ",".join(map(str, self.indices))
        return f"{self.family.value}({idx}) coeff={self.coefficient!r} sign={self.sign:+d}"


def _check_canonical(family: Family, idx: tuple[int, ...]) -> None:
    ok = True
    if family in (Family.HOPPING, Family.NUMBER_NUMBER):
        ok = idx[0] < idx[1]
    elif family is Family.NUMBER_EXCITATION:
        ok = idx[1] < idx[2]
    elif family is Family.DOUBLE_EXCITATION:
        p, q, r, s = idx
        ok = p < q and r < s and p < r
    if not ok:
        raise ValueError(f"indices {idx} are not canonical for {family.value}")


def canonical_ladder_ops(family: Family, idx: Sequence[int]) -> list[tuple[int, bool]]:
    if family is Family.NUMBER:
        (p,) = idx
        return [(p, True), (p, False)]
    if family is Family.HOPPING:
        p, q = idx
        return [(p, True), (q, False)]
    if family is Family.NUMBER_NUMBER:
        p, q = idx
        return [(p, True), (q, True), (q, False), (p, False)]
    if family is Family.NUMBER_EXCITATION:
        p, q, r = idx
        return [(p, True), (q, True), (p, False), (r, False)]
    p, q, r, s = idx
    return [(p, True), (q, True), (r, False), (s, False)]


def _parity(a: int, b: int) -> int:
    """+1 if the pair is already in ascending order, else -1."""
    return 1 if a < b else -1


def classify_raw(
    creations: Sequence[int],
    annihilations: Sequence[int],
    coefficient: float = 1.0,
    num_orbitals: int | None = None,
) -> FermionTerm:
    """Classify ``coefficient * a+_{c...} a_{d...}`` into a canonical term.

    The product is read as all creations followed by all annihilations, in
    the order given. Non-Hermitian products are understood together with
    their conjugate, so e.g. ``a+_3 a_1`` and ``a+_1 a_3`` both become
    ``HOPPING(1, 3)``.

    Raises:
        UnclassifiableTerm: The index pattern is not one of the five families.
        IndexOutOfRange: An index is negative or not below ``num_orbitals``.
    """
    creations = [int(i) for i in creations]
    annihilations = [int(i) for i in annihilations]
    every = creations + annihilations
    if len(creations) != len(annihilations) or len(creations) not in (1, 2):
        raise UnclassifiableTerm(
            f"need 1 or 2 creations and as many annihilations, got "
            f"{creations} / {annihilations}"
        )
    if min(every) < 0 or (num_orbitals is not None and max(every) >= num_orbitals):
        raise IndexOutOfRange(f"orbital index out of range in {every}")

    if len(creations) == 1:
        (i,), (j,) = creations, annihilations
        if i == j:
            return FermionTerm(Family.NUMBER, (i,), coefficient, 1, num_orbitals)
        return FermionTerm(
            Family.HOPPING, (min(i, j), max(i, j)), coefficient, 1, num_orbitals
        )

    i, j = creations
    k, l = annihilations
    if i == j or k == l:
        raise UnclassifiableTerm(
            f"repeated index among creations {creations} or annihilations "
            f"{annihilations}: the product vanishes"
        )
    shared = set(creations) & set(annihilations)

    if len(shared) == 2:
        p, q = min(i, j), max(i, j)
        # target order: creations (p, q), annihilations (q, p)
        sign = _parity(i, j) * _parity(l, k)
        return FermionTerm(Family.NUMBER_NUMBER, (p, q), coefficient, sign, num_orbitals)

    if len(shared) == 1:
        (p,) = shared
        sign = (1 if i == p else -1) * (1 if k == p else -1)
        x = j if i == p else i
        y = l if k == p else k
        # a+_p a+_x a_p a_y and a+_p a+_y a_p a_x are each other's conjugate
        return FermionTerm(
            Family.NUMBER_EXCITATION, (p, min(x, y), max(x, y)),
            coefficient, sign, num_orbitals,
        )

    if min(every) in annihilations:
        # work with the conjugate a+_l a+_k a_j a_i
        i, j, k, l = l, k, j, i
    sign = _parity(i, j) * _parity(k, l)
    return FermionTerm(
        Family.DOUBLE_EXCITATION,
        (min(i, j), max(i, j), min(k, l), max(k, l)),
        coefficient, sign, num_orbitals,
    )


def raw_form(term: FermionTerm) -> tuple[list[int], list[int]]:
    """Creation and annihilation index lists that classify back to ``term``.

    The canonical product is returned for sign +1; for sign -1 the two
    creation operators are swapped, which reproduces the sign.
    """
    ops = term.ladder_ops()
    cre = [i for i, dag in ops if dag]
    ann = [i for i, dag in ops if not dag]
    if term.sign == -1:
        if len(cre) != 2:
            raise ValueError(f"{term.family.value} terms cannot carry sign -1")
        cre.reverse()
    return cre, ann


def _merge(terms: Iterable[FermionTerm]) -> list[FermionTerm]:
    merged: dict[tuple, FermionTerm] = {}
    for t in terms:
        key = (t.family, t.indices)
        if key not in merged:
            merged[key] = t
            continue
        first = merged[key]
        coeff = first.coefficient + t.effective_coefficient * first.sign
        merged[key] = FermionTerm(
            first.family, first.indices, coeff, first.sign,
            first.num_orbitals, repr(coeff),
        )
    return list(merged.values())


def parse_hamiltonian(lines: Iterable[str]) -> tuple[list[FermionTerm], int]:
    """Parse the line-oriented Hamiltonian format.

    ::

        # comment
        orbitals 6
        two 0 0 -1.25          # h a+_0 a_0
        two 0 3 0.5            # h a+_0 a_3 + h.c.
        four 0 1 2 3 0.125     # h a+_0 a+_1 a_2 a_3 + h.c.

    Returns the canonical terms, with duplicates merged, and the register
    size. Raises :class:`ParseError` carrying the 1-based line number.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    num_orbitals = None
    pending: list[tuple[int, list[int], list[int], float, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "orbitals":
            if num_orbitals is not None:
                raise ParseError("duplicate 'orbitals' header", lineno)
            if len(rest) != 1:
                raise ParseError("expected 'orbitals <M>'", lineno)
            try:
                num_orbitals = int(rest[0])
            except ValueError:
                raise ParseError(f"bad orbital count {rest[0]!r}", lineno) from None
            if num_orbitals <= 0:
                raise ParseError("orbital count must be positive", lineno)
            continue
        n_idx = {"two": 2, "four": 4}.get(head)
        if n_idx is None:
            raise ParseError(f"unknown record type {head!r}", lineno)
        if len(rest) != n_idx + 1:
            raise ParseError(
                f"'{head}' expects {n_idx} indices and a coefficient", lineno
            )
        try:
            idx = [int(tok) for tok in rest[:n_idx]]
        except ValueError:
            raise ParseError(f"bad orbital index in {line!r}", lineno) from None
        try:
            coeff = float(rest[-1])
        except ValueError:
            raise ParseError(f"bad coefficient {rest[-1]!r}", lineno) from None
        half = n_idx // 2
        pending.append((lineno, idx[:half], idx[half:], coeff, rest[-1]))

    if num_orbitals is None:
        if pending:
            raise ParseError("missing 'orbitals <M>' header", pending[0][0])
        return [], 0

    terms = []
    for lineno, cre, ann, coeff, text in pending:
        if max(cre + ann) >= num_orbitals or min(cre + ann) < 0:
            raise IndexOutOfRange(
                f"line {lineno}: orbital index outside register of {num_orbitals}"
            )
        try:
            term = classify_raw(cre, ann, coeff, num_orbitals)
        except UnclassifiableTerm as exc:
            raise ParseError(str(exc), lineno) from None
        terms.append(FermionTerm(
            term.family, term.indices, term.coefficient, term.sign,
            num_orbitals, text,
        ))
    return _merge(terms), num_orbitals


def serialize_hamiltonian(terms: Sequence[FermionTerm], num_orbitals: int) -> str:
    out = [f"orbitals {num_orbitals}"]
    for t in terms:
        cre, ann = raw_form(t)
        kind = "two" if len(cre) == 1 else "four"
        out.append(" ".join([kind, *map(str, cre + ann), repr(float(t.coefficient))]))
    return "\n".join(out) + "\n"


def parse_term_spec(spec: str, num_orbitals: int | None = None) -> FermionTerm:
    """Parse a single record such as ``"four 0 1 2 3"``; the coefficient defaults to 1."""
    toks = spec.split()
    if not toks or toks[0] not in ("two", "four"):
        raise ParseError(f"expected 'two ...' or 'four ...', got {spec!r}")
    n_idx = 2 if toks[0] == "two" else 4
    if len(toks) == n_idx + 1:
        toks.append("1.0")
    if num_orbitals is None:
        try:
            num_orbitals = max(int(t) for t in toks[1:n_idx + 1]) + 1
        except ValueError:
            raise ParseError(f"bad orbital index in {spec!r}") from None
    terms, _ = parse_hamiltonian([f"orbitals {num_orbitals}", " ".join(toks)])
    return terms[0]
