"""
Verma modules M(c,h), singular vectors and the maximal submodule J(c,h).

Conventions: [d_m, d_n] = (n - m) d_{m+n} + delta_{n,-m} (m^3 - m)/12 C, the
highest weight vector u satisfies d_k u = 0 for k > 0, d_0 u = h u, C u = c u,
and a vector at level l has d_0-eigenvalue h - l.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Union

import structlog

from virasoro.config import get_settings
from virasoro.errors import InvalidParameterError
from virasoro.models.algebra import GeneratorStatus, HighestWeight, MaximalSubmoduleGens
from virasoro.services.enveloping import (
    EnvElem,
    Partition,
    format_elem,
    lower_monomial,
    multiply,
    pbw_basis,
)
from virasoro.services.linalg import EchelonForm, echelon, nullspace, primitive_integer


logger = structlog.get_logger()

Scalar = Union[int, Fraction]
Terms = tuple[tuple[Partition, Fraction], ...]


class VermaVector:
    """Homogeneous vector P u of M(c,h) at one level."""

    __slots__ = ("hw", "level", "_coeffs")

    def __init__(self, hw: HighestWeight, level: int, coeffs: Mapping[Partition, Scalar] | None = None):
        cleaned = {}
        for mono, coeff in (coeffs or {}).items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            if sum(mono) != level:
                raise InvalidParameterError(f"partition {mono} does not have size {level}")
            cleaned[tuple(mono)] = coeff
        self.hw = hw
        self.level = level
        self._coeffs = cleaned

    @classmethod
    def highest(cls, hw: HighestWeight) -> VermaVector:
        return cls(hw, 0, {(): 1})

    @classmethod
    def from_elem(cls, hw: HighestWeight, x: EnvElem) -> VermaVector:
        """The vector x u for homogeneous x."""
        if x.is_zero():
            return cls(hw, 0)
        return cls(hw, x.level, x.terms)

    @property
    def coeffs(self) -> dict[Partition, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def coefficient(self, mono: Partition) -> Fraction:
        return self._coeffs.get(mono, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def weight(self) -> Fraction:
        return self.hw.h - self.level

    def to_elem(self) -> EnvElem:
        return EnvElem(self._coeffs)

    def to_row(self) -> list[Fraction]:
        return [self.coefficient(mono) for mono in pbw_basis(self.level)]

    @classmethod
    def from_row(cls, hw: HighestWeight, level: int, row: Iterable[Fraction]) -> VermaVector:
        return cls(hw, level, dict(zip(pbw_basis(level), row)))

    def scale(self, q: Scalar) -> VermaVector:
        q = Fraction(q)
        return VermaVector(self.hw, self.level, {m: c * q for m, c in self._coeffs.items()})

    def __add__(self, other: VermaVector) -> VermaVector:
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.level != self.level:
            raise InvalidParameterError("cannot add vectors from different levels")
        acc = dict(self._coeffs)
        for mono, coeff in other._coeffs.items():
            acc[mono] = acc.get(mono, Fraction(0)) + coeff
        return VermaVector(self.hw, self.level, acc)

    def __sub__(self, other: VermaVector) -> VermaVector:
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VermaVector):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.hw == other.hw
        return self.hw == other.hw and self.level == other.level and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.hw, self.level, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"VermaVector(level={self.level}, {format_elem(self.to_elem())}*u)"


# =============================================================================
# ACTION
# =============================================================================

@lru_cache(maxsize=None)
def act_on_monomial(c: Fraction, h: Fraction, n: int, mono: Partition) -> Terms:
    """d_n applied to the PBW monomial vector ``mono`` u."""
    if n < 0:
        return lower_monomial(-n, mono)
    if n == 0:
        eigen = h - sum(mono)
        return ((mono, eigen),) if eigen else ()
    if not mono:
        return ()
    head, tail = mono[0], mono[1:]
    acc: dict[Partition, Fraction] = defaultdict(Fraction)
    # d_n d_{-head} T = d_{-head} d_n T + [d_n, d_{-head}] T
    for inner, coeff in act_on_monomial(c, h, n, tail):
        for outer, coeff2 in lower_monomial(head, inner):
            acc[outer] += coeff * coeff2
    shift = -head - n
    if shift:
        for inner, coeff in act_on_monomial(c, h, n - head, tail):
            acc[inner] += shift * coeff
    if n == head:
        central = Fraction(n ** 3 - n, 12) * c
        if central:
            acc[tail] += central
    return tuple(sorted(((m, q) for m, q in acc.items() if q), reverse=True))


def act(n: int, v: VermaVector) -> VermaVector:
    """d_n v for any integer n."""
    hw = v.hw
    target = v.level - n
    if target < 0 or v.is_zero():
        return VermaVector(hw, max(target, 0))
    acc: dict[Partition, Fraction] = defaultdict(Fraction)
    for mono, coeff in v.items():
        for out, coeff2 in act_on_monomial(hw.c, hw.h, n, mono):
            acc[out] += coeff * coeff2
    return VermaVector(hw, target, acc)


def act_central(v: VermaVector) -> VermaVector:
    return v.scale(v.hw.c)


def apply_lowering(k: int, v: VermaVector) -> VermaVector:
    if k < 1:
        raise InvalidParameterError(f"lowering index must be positive, got {k}")
    return act(-k, v)


def apply_raising(m: int, v: VermaVector) -> VermaVector:
    if m < 1:
        raise InvalidParameterError(f"raising index must be positive, got {m}")
    return act(m, v)


# =============================================================================
# SINGULAR VECTORS
# =============================================================================

def _raising_rows(hw: HighestWeight, level: int) -> list[list[Fraction]]:
    """Stacked matrices of d_1 and d_2 on the level-``level`` PBW basis."""
    basis = pbw_basis(level)
    rows = []
    for step in (1, 2):
        if step > level:
            continue
        targets = pbw_basis(level - step)
        index = {mono: i for i, mono in enumerate(targets)}
        block = [[Fraction(0)] * len(basis) for _ in targets]
        for col, mono in enumerate(basis):
            for out, coeff in act_on_monomial(hw.c, hw.h, step, mono):
                block[index[out]][col] += coeff
        rows.extend(block)
    return rows


def singular_vectors_at_level(hw: HighestWeight, level: int) -> list[VermaVector]:
    """Basis of the vectors at ``level`` killed by d_1 and d_2, scaled to primitive integers."""
    if level < 1:
        raise InvalidParameterError(f"singular vector level must be positive, got {level}")
    rows = _raising_rows(hw, level)
    basis = nullspace(rows, len(pbw_basis(level)))
    vectors = [VermaVector.from_row(hw, level, primitive_integer(vec)) for vec in basis]
    logger.debug("Singular vectors searched", c=str(hw.c), h=str(hw.h), level=level, dim=len(vectors))
    return vectors


def is_singular(v: VermaVector) -> bool:
    return act(1, v).is_zero() and act(2, v).is_zero()


def ff_weights(p: int, q: int, m: int) -> HighestWeight:
    """Highest weight attached to (p, q, m): h = (m^2 - (p+q)^2)/(4pq), c = 1 + 6(p+q)^2/(pq)."""
    if p * q == 0:
        raise InvalidParameterError(f"p*q must be nonzero, got p={p}, q={q}")
    total = (p + q) ** 2
    return HighestWeight(
        c=1 + Fraction(6 * total, p * q),
        h=Fraction(m * m - total, 4 * p * q),
    )


# =============================================================================
# MAXIMAL SUBMODULE
# =============================================================================

def generated_rows(elems: Iterable[EnvElem], level: int) -> list[list[Fraction]]:
    """Spanning rows of U(Vir_-) x u at ``level`` for homogeneous x."""
    basis = pbw_basis(level)
    rows = []
    for x in elems:
        if x.is_zero() or x.level > level:
            continue
        for mono in pbw_basis(level - x.level):
            product = multiply(EnvElem({mono: 1}), x)
            rows.append([product.coefficient(out) for out in basis])
    return rows


@lru_cache(maxsize=4096)
def _generated_echelon(elems: tuple[EnvElem, ...], level: int) -> EchelonForm:
    return echelon(generated_rows(elems, level), len(pbw_basis(level)))


def j_span(gens: MaximalSubmoduleGens, level: int) -> EchelonForm:
    """Row-reduced basis of J(c,h) at ``level``."""
    return _generated_echelon(tuple(x for x, _ in gens.generators), level)


def quotient_basis(gens: MaximalSubmoduleGens, level: int) -> list[Partition]:
    """PBW monomials that survive in V(c,h) at ``level`` (non-pivot columns of J)."""
    pivots = set(j_span(gens, level).pivots)
    return [mono for i, mono in enumerate(pbw_basis(level)) if i not in pivots]


def reduce_mod_J(v: VermaVector, gens: MaximalSubmoduleGens) -> VermaVector:
    """Canonical representative of v + J(c,h)."""
    if v.is_zero() or not gens.generators:
        return v
    form = j_span(gens, v.level)
    if not form.rank:
        return v
    return VermaVector.from_row(v.hw, v.level, form.reduce(v.to_row()))


def same_generated_submodule(
    left: Iterable[EnvElem], right: Iterable[EnvElem], max_level: int
) -> bool:
    """Whether both sets generate the same U(Vir_-)-submodule up to ``max_level``."""
    left, right = tuple(left), tuple(right)
    for level in range(1, max_level + 1):
        ncols = len(pbw_basis(level))
        a = echelon(generated_rows(left, level), ncols)
        b = echelon(generated_rows(right, level), ncols)
        if a.rank != b.rank or not all(a.contains(row) for row in b.rows):
            return False
    return True


_generator_lock = threading.Lock()
_generator_cache: dict[tuple[HighestWeight, int, bool], MaximalSubmoduleGens] = {}


def maximal_submodule_generators(hw: HighestWeight, cap: Optional[int] = None) -> MaximalSubmoduleGens:
    """Scan levels 1..cap for singular vectors outside the submodule generated so far."""
    cap = cap if cap is not None else get_settings().level_cap
    if cap < 1:
        raise InvalidParameterError(f"level cap must be positive, got {cap}")
    assume_simple = get_settings().assume_simple_beyond_cap
    key = (hw, cap, assume_simple)
    with _generator_lock:
        cached = _generator_cache.get(key)
    if cached is not None:
        return cached

    found: list[tuple[EnvElem, int]] = []
    for level in range(1, cap + 1):
        singular = singular_vectors_at_level(hw, level)
        if not singular:
            continue
        span = _generated_echelon(tuple(x for x, _ in found), level)
        for vector in singular:
            reduced = span.reduce(vector.to_row())
            if not any(reduced):
                continue
            representative = VermaVector.from_row(hw, level, primitive_integer(reduced))
            found.append((representative.to_elem(), level))
            span = _generated_echelon(tuple(x for x, _ in found), level)
            logger.info("Submodule generator found", c=str(hw.c), h=str(hw.h), level=level)
            if len(found) == 2:
                break
        if len(found) == 2:
            break

    if len(found) == 2:
        (q1, l1), (q2, l2) = found
        result = MaximalSubmoduleGens(
            hw=hw, q1=q1, q2=q2, levels=(l1, l2),
            status=GeneratorStatus.TWO_GENERATORS, scanned_to_level=l2,
        )
    elif len(found) == 1:
        (q1, l1), = found
        result = MaximalSubmoduleGens(
            hw=hw, q1=q1, q2=q1, levels=(l1, l1),
            status=GeneratorStatus.SINGLE_GENERATOR, scanned_to_level=cap,
        )
    else:
        status = (
            GeneratorStatus.VERMA_SIMPLE
            if assume_simple
            else GeneratorStatus.UNDETERMINED_BEYOND_CAP
        )
        logger.warning("No singular vectors up to cap", c=str(hw.c), h=str(hw.h), cap=cap)
        result = MaximalSubmoduleGens(hw=hw, status=status, scanned_to_level=cap)

    with _generator_lock:
        _generator_cache[key] = result
    return result


def first_singular_level(hw: HighestWeight, cap: Optional[int] = None) -> Optional[int]:
    cap = cap if cap is not None else get_settings().level_cap
    for level in range(1, cap + 1):
        if singular_vectors_at_level(hw, level):
            return level
    return None


def clear_generator_cache() -> None:
    with _generator_lock:
        _generator_cache.clear()
