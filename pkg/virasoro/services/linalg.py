"""
Exact linear algebra on rational row vectors.

Rows are cleared of denominators and reduced over ZZ with sympy's
fraction-free ``DomainMatrix.rref_den``; results come back as Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix


Row = list[Fraction]


@dataclass(frozen=True)
class EchelonForm:
    """Reduced row echelon form with pivot rows normalized to a leading 1."""
    rows: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]
    ncols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vector: Sequence[Fraction]) -> Row:
        """Canonical representative of ``vector`` modulo the row space."""
        out = list(vector)
        for row, pivot in zip(self.rows, self.pivots):
            factor = out[pivot]
            if factor:
                for col in range(self.ncols):
                    if row[col]:
                        out[col] -= factor * row[col]
        return out

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return not any(self.reduce(vector))


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    scale = math.lcm(*(Fraction(x).denominator for x in row)) if row else 1
    return [int(Fraction(x) * scale) for x in row]


def echelon(rows: Sequence[Sequence[Fraction]], ncols: int) -> EchelonForm:
    """Row-reduce ``rows`` exactly (Bareiss elimination over ZZ)."""
    nonzero = [_integer_row(row) for row in rows if any(row)]
    if not nonzero or ncols == 0:
        return EchelonForm(rows=(), pivots=(), ncols=ncols)

    matrix = DomainMatrix([[ZZ(x) for x in row] for row in nonzero], (len(nonzero), ncols), ZZ)
    reduced, _, pivots = matrix.rref_den()
    entries = reduced.to_list()

    out_rows = []
    for index, pivot in enumerate(pivots):
        row = entries[index]
        lead = int(row[pivot])
        out_rows.append(tuple(Fraction(int(x), lead) if x else Fraction(0) for x in row))
    return EchelonForm(rows=tuple(out_rows), pivots=tuple(int(p) for p in pivots), ncols=ncols)


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return echelon(rows, ncols).rank


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Row]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    form = echelon(rows, ncols)
    pivot_set = set(form.pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for row, pivot in zip(form.rows, form.pivots):
            vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def primitive_integer(vector: Sequence[Fraction]) -> Row:
    """Scale to coprime integers with a positive last nonzero entry."""
    ints = _integer_row(vector)
    divisor = math.gcd(*ints)
    if divisor == 0:
        return [Fraction(0)] * len(ints)
    last = next(x for x in reversed(ints) if x)
    if last < 0:
        divisor = -divisor
    return [Fraction(x // divisor) for x in ints]
