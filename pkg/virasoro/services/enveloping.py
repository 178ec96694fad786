"""
PBW monomials and linear combinations in U(Vir_-).

A monomial d_{-k_r} ... d_{-k_1} with k_r >= ... >= k_1 >= 1 is stored as the
partition ``(k_r, ..., k_1)``, largest index leftmost. Products are put into
this normal form with the bracket [d_m, d_n] = (n - m) d_{m+n}.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import structlog
from sympy.functions.combinatorial.numbers import partition as partition_number
from sympy.utilities.iterables import partitions

from virasoro.errors import InvalidParameterError
from virasoro.services.scalar_poly import format_rat


logger = structlog.get_logger()

Partition = tuple[int, ...]
Scalar = Union[int, Fraction]

CENTRAL = "C"


def make_partition(parts: Iterable[int]) -> Partition:
    """Sort indices into PBW order; every part must be a positive integer."""
    parts = tuple(parts)
    for part in parts:
        if not isinstance(part, int) or part < 1:
            raise InvalidParameterError(f"partition parts must be positive integers, got {part!r}")
    return tuple(sorted(parts, reverse=True))


@lru_cache(maxsize=None)
def pbw_basis(level: int) -> tuple[Partition, ...]:
    """All partitions of ``level`` in reverse lexicographic order."""
    if level < 0:
        raise InvalidParameterError(f"level must be nonnegative, got {level}")
    out = [
        tuple(part for part in sorted(p, reverse=True) for _ in range(p[part]))
        for p in partitions(level)
    ]
    return tuple(sorted(out, reverse=True))


def partition_count(level: int) -> int:
    return int(partition_number(level))


# =============================================================================
# BRACKET
# =============================================================================

@dataclass(frozen=True)
class BracketTerm:
    """[d_m, d_n] = coefficient * d_index + central * C."""
    coefficient: Fraction
    index: int
    central: Fraction


def bracket(m: int, n: int) -> BracketTerm:
    central = Fraction(m ** 3 - m, 12) if n == -m else Fraction(0)
    return BracketTerm(coefficient=Fraction(n - m), index=m + n, central=central)


# Elements of Vir as maps {index or "C": coefficient}
VirElement = Mapping[Union[int, str], Fraction]


def lie_bracket(x: VirElement, y: VirElement) -> dict[Union[int, str], Fraction]:
    """Bilinear extension of ``bracket``; C is central."""
    out: dict[Union[int, str], Fraction] = defaultdict(Fraction)
    for m, a in x.items():
        if m == CENTRAL:
            continue
        for n, b in y.items():
            if n == CENTRAL:
                continue
            term = bracket(m, n)
            if term.coefficient:
                out[term.index] += a * b * term.coefficient
            if term.central:
                out[CENTRAL] += a * b * term.central
    return {k: v for k, v in out.items() if v}


# =============================================================================
# NORMAL ORDERING
# =============================================================================

Terms = tuple[tuple[Partition, Fraction], ...]


@lru_cache(maxsize=None)
def lower_monomial(k: int, mono: Partition) -> Terms:
    """d_{-k} times the PBW monomial ``mono``, in normal form."""
    if not mono or k >= mono[0]:
        return (((k,) + mono, Fraction(1)),)
    head, tail = mono[0], mono[1:]
    acc: dict[Partition, Fraction] = defaultdict(Fraction)
    # d_{-k} d_{-head} = d_{-head} d_{-k} + (k - head) d_{-(k+head)}
    for inner, coeff in lower_monomial(k, tail):
        for outer, coeff2 in lower_monomial(head, inner):
            acc[outer] += coeff * coeff2
    for inner, coeff in lower_monomial(k + head, tail):
        acc[inner] += (k - head) * coeff
    return tuple(sorted(((m, c) for m, c in acc.items() if c), reverse=True))


class EnvElem:
    """Immutable rational combination of PBW monomials."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Partition, Scalar] | None = None):
        cleaned: dict[Partition, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                cleaned[tuple(mono)] = coeff
        self._terms = cleaned
        self._hash = None

    @classmethod
    def one(cls) -> EnvElem:
        return cls({(): 1})

    @classmethod
    def zero(cls) -> EnvElem:
        return cls()

    @classmethod
    def generator(cls, k: int) -> EnvElem:
        """The element d_{-k}."""
        return cls({make_partition([k]): 1})

    @classmethod
    def monomial(cls, parts: Iterable[int], coeff: Scalar = 1) -> EnvElem:
        return cls({make_partition(parts): coeff})

    @property
    def terms(self) -> dict[Partition, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono: Partition) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def levels(self) -> set[int]:
        return {sum(mono) for mono in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.levels()) <= 1

    @property
    def level(self) -> int:
        """Common partition size of a nonzero homogeneous element."""
        levels = self.levels()
        if len(levels) != 1:
            raise InvalidParameterError("level is defined for nonzero homogeneous elements only")
        return levels.pop()

    @property
    def degree(self) -> int:
        return -self.level

    def scale(self, q: Scalar) -> EnvElem:
        q = Fraction(q)
        return EnvElem({m: c * q for m, c in self._terms.items()})

    def __add__(self, other: EnvElem) -> EnvElem:
        acc = dict(self._terms)
        for mono, coeff in other._terms.items():
            acc[mono] = acc.get(mono, Fraction(0)) + coeff
        return EnvElem(acc)

    def __neg__(self) -> EnvElem:
        return self.scale(-1)

    def __sub__(self, other: EnvElem) -> EnvElem:
        return self + (-other)

    def __mul__(self, other: EnvElem | Scalar) -> EnvElem:
        if isinstance(other, EnvElem):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> EnvElem:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnvElem):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"EnvElem({format_elem(self)!r})"

    def __str__(self) -> str:
        return format_elem(self)


def left_multiply(k: int, x: EnvElem) -> EnvElem:
    """d_{-k} * x in normal form."""
    if k < 1:
        raise InvalidParameterError(f"lowering index must be positive, got {k}")
    acc: dict[Partition, Fraction] = defaultdict(Fraction)
    for mono, coeff in x.items():
        for out, coeff2 in lower_monomial(k, mono):
            acc[out] += coeff * coeff2
    return EnvElem(acc)


def multiply(x: EnvElem, y: EnvElem) -> EnvElem:
    acc: dict[Partition, Fraction] = defaultdict(Fraction)
    for mono, coeff in x.items():
        current = y
        for part in reversed(mono):
            current = left_multiply(part, current)
        for out, coeff2 in current.items():
            acc[out] += coeff * coeff2
    return EnvElem(acc)


def normal_order(word: Sequence[int]) -> EnvElem:
    """Normal form of d_{-w_1} d_{-w_2} ... for an arbitrary word of lowering indices."""
    current = EnvElem.one()
    for k in reversed(word):
        current = left_multiply(k, current)
    return current


# =============================================================================
# PRINTING
# =============================================================================

def _format_monomial(mono: Partition) -> str:
    factors = []
    index = 0
    while index < len(mono):
        part = mono[index]
        power = 1
        while index + power < len(mono) and mono[index + power] == part:
            power += 1
        factors.append(f"d(-{part})" if power == 1 else f"d(-{part})^{power}")
        index += power
    return "*".join(factors)


def format_elem(x: EnvElem) -> str:
    """Terms ordered by level, then by ascending partition."""
    if x.is_zero():
        return "0"
    pieces = []
    for index, mono in enumerate(sorted(x.terms, key=lambda m: (sum(m), m))):
        coeff = x.coefficient(mono)
        magnitude = abs(coeff)
        monomial = _format_monomial(mono)
        if monomial and magnitude == 1:
            body = monomial
        elif monomial:
            body = f"{format_rat(magnitude)}*{monomial}"
        else:
            body = format_rat(magnitude)
        if index == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"{'-' if coeff < 0 else '+'} {body}")
    return " ".join(pieces)
