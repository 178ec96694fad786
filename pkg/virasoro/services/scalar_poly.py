"""
Exact rational scalars and polynomials over QQ in the variables n, a (alpha) and b (beta).

Rationals are plain ``fractions.Fraction`` values. Polynomials wrap a sympy
``Poly`` over ``QQ`` with the fixed generator order (n, a, b), so arithmetic,
gcd and resultants come from sympy while equality, hashing and printing stay
canonical here.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from typing import Mapping, NoReturn, Union

import structlog
from sympy import Poly, QQ, Rational, resultant, symbols

from virasoro.errors import ExpressionSyntaxError, InvalidParameterError, MissingVariableError


logger = structlog.get_logger()

N, A, B = symbols("n a b")
GENS = (N, A, B)
VARIABLES = ("n", "a", "b")

Exponents = tuple[int, int, int]
Scalar = Union[int, Fraction]

_RAT_PATTERN = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*")


class Unbounded(str, Enum):
    """Marker returned where a root set is every integer."""
    ALL_INTEGERS = "all_integers"


# =============================================================================
# RATIONALS
# =============================================================================

def parse_rat(text: str) -> Fraction:
    """Parse an integer or ``p/q`` literal."""
    match = _RAT_PATTERN.fullmatch(text)
    if not match:
        bad = re.search(r"[^0-9+\-/\s]", text)
        if bad:
            _raise_bad_rat(bad.group(0), bad.start())
        _raise_bad_rat(text.strip() or repr(text), len(text) - len(text.lstrip()))
    numerator = int(match.group(1))
    if match.group(2) is None:
        return Fraction(numerator)
    denominator = int(match.group(2))
    if denominator == 0:
        _raise_bad_rat(match.group(2), match.start(2))
    return Fraction(numerator, denominator)


def _raise_bad_rat(token: str, position: int) -> NoReturn:
    raise ExpressionSyntaxError("invalid rational literal", token, position)


def format_rat(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_fraction(value: object) -> Fraction:
    """Coerce ints, Fractions, sympy rationals and literals to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidParameterError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    raise InvalidParameterError(f"not a rational value: {value!r}")


def _sympy_rational(q: Fraction) -> Rational:
    return Rational(q.numerator, q.denominator)


# =============================================================================
# POLYNOMIALS
# =============================================================================

class MPoly:
    """Immutable polynomial over QQ in (n, a, b)."""

    __slots__ = ("_poly", "_terms")

    def __init__(self, poly: Poly):
        self._poly = poly
        terms: dict[Exponents, Fraction] = {}
        for exps, coeff in poly.terms():
            if coeff != 0:
                terms[tuple(int(e) for e in exps)] = to_fraction(coeff)
        self._terms = terms

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Mapping[Exponents, Scalar]) -> MPoly:
        rep = {tuple(exps): _sympy_rational(Fraction(c)) for exps, c in terms.items() if c}
        if not rep:
            return cls.zero()
        return cls(Poly.from_dict(rep, *GENS, domain=QQ))

    @classmethod
    def from_expr(cls, expr) -> MPoly:
        return cls(Poly(expr, *GENS, domain=QQ))

    @classmethod
    def zero(cls) -> MPoly:
        return cls(Poly(0, *GENS, domain=QQ))

    @classmethod
    def const(cls, q: Scalar) -> MPoly:
        return cls.from_terms({(0, 0, 0): q})

    @classmethod
    def var(cls, name: str) -> MPoly:
        exps = [0, 0, 0]
        exps[_variable_index(name)] = 1
        return cls.from_terms({tuple(exps): 1})

    # -- queries --------------------------------------------------------------

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[str]:
        return {VARIABLES[i] for exps in self._terms for i, e in enumerate(exps) if e}

    def is_univariate(self) -> bool:
        return self.variables() <= {"n"}

    def degree(self, name: str = "n") -> int:
        index = _variable_index(name)
        return max((exps[index] for exps in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(exps) for exps in self._terms), default=0)

    def as_expr(self):
        return self._poly.as_expr()

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly(self._poly + _coerce(other)._poly)

    __radd__ = __add__

    def __sub__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly(self._poly - _coerce(other)._poly)

    def __rsub__(self, other: Scalar) -> MPoly:
        return _coerce(other) - self

    def __neg__(self) -> MPoly:
        return MPoly(-self._poly)

    def __mul__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly(self._poly * _coerce(other)._poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> MPoly:
        if exponent < 0:
            raise InvalidParameterError("negative polynomial power")
        return MPoly(self._poly ** exponent)

    def gcd(self, other: MPoly) -> MPoly:
        return MPoly(self._poly.gcd(other._poly))

    def exquo(self, other: MPoly) -> MPoly:
        return MPoly(self._poly.exquo(other._poly))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"MPoly({mpoly_format(self)!r})"

    def __str__(self) -> str:
        return mpoly_format(self)


def _variable_index(name: str) -> int:
    try:
        return VARIABLES.index(name)
    except ValueError:
        raise InvalidParameterError(f"unknown variable '{name}'") from None


def _coerce(value: MPoly | Scalar) -> MPoly:
    if isinstance(value, MPoly):
        return value
    return MPoly.const(to_fraction(value))


def mpoly_eval(p: MPoly, at: Mapping[str, Scalar]) -> Fraction:
    """Evaluate ``p`` exactly; every variable that occurs in ``p`` must be assigned."""
    for name in sorted(p.variables(), key=VARIABLES.index):
        if name not in at:
            raise MissingVariableError(name)
    values = [Fraction(at.get(name, 0)) for name in VARIABLES]
    total = Fraction(0)
    for exps, coeff in p.terms.items():
        term = coeff
        for value, e in zip(values, exps):
            if e:
                term *= value ** e
        total += term
    return total


def mpoly_substitute(p: MPoly, variable: str, q: MPoly | Scalar) -> MPoly:
    """Compose: replace ``variable`` in ``p`` by ``q``."""
    symbol = GENS[_variable_index(variable)]
    return MPoly.from_expr(p.as_expr().subs(symbol, _coerce(q).as_expr()))


def mpoly_format(p: MPoly) -> str:
    """Canonical text, terms in descending graded-lex order on (e_n, e_a, e_b)."""
    terms = p.terms
    if not terms:
        return "0"
    ordered = sorted(terms, key=lambda exps: (sum(exps), exps), reverse=True)
    pieces: list[str] = []
    for index, exps in enumerate(ordered):
        coeff = terms[exps]
        monomial = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(VARIABLES, exps)
            if e
        )
        magnitude = abs(coeff)
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


# =============================================================================
# ROOTS
# =============================================================================

def _integer_coefficients(p: MPoly) -> dict[int, int]:
    if not p.is_univariate():
        raise InvalidParameterError(
            f"integer roots need a polynomial in n only, got variables {sorted(p.variables())}"
        )
    terms = {exps[0]: coeff for exps, coeff in p.terms.items()}
    scale = math.lcm(*(c.denominator for c in terms.values()))
    return {d: int(c * scale) for d, c in terms.items()}


def cauchy_bound(p: MPoly) -> int:
    """Integer B with every root of the nonzero univariate ``p`` inside [-B, B]."""
    coeffs = _integer_coefficients(p)
    if not coeffs:
        raise InvalidParameterError("the zero polynomial has no root bound")
    degree = max(coeffs)
    lead = abs(coeffs[degree])
    lower = [abs(c) for d, c in coeffs.items() if d < degree]
    if not lower:
        return 0
    return 1 + -(-max(lower) // lead)


def integer_roots(p: MPoly) -> list[int] | Unbounded:
    """All integer roots of a polynomial in n, or ``Unbounded.ALL_INTEGERS`` for zero."""
    coeffs = _integer_coefficients(p)
    if not coeffs:
        return Unbounded.ALL_INTEGERS
    bound = cauchy_bound(p)
    ordered = sorted(coeffs.items(), reverse=True)
    roots = []
    for k in range(-bound, bound + 1):
        if sum(c * k ** d for d, c in ordered) == 0:
            roots.append(k)
    return roots


def intersect_roots(
    left: list[int] | Unbounded, right: list[int] | Unbounded
) -> list[int] | Unbounded:
    if left is Unbounded.ALL_INTEGERS:
        return right
    if right is Unbounded.ALL_INTEGERS:
        return left
    return sorted(set(left) & set(right))


def rational_roots(p: MPoly, variable: str = "n") -> list[Fraction]:
    """Distinct rational roots of a nonzero polynomial in one variable."""
    extra = p.variables() - {variable}
    if extra:
        raise InvalidParameterError(f"expected a polynomial in {variable} only, got {sorted(extra)}")
    if p.is_zero() or p.degree(variable) == 0:
        return []
    univariate = Poly(p.as_expr(), GENS[_variable_index(variable)], domain=QQ)
    _, factors = univariate.factor_list()
    roots = set()
    for factor, _multiplicity in factors:
        if factor.degree() == 1:
            lead, constant = factor.all_coeffs()
            roots.add(to_fraction(-constant / lead))
    return sorted(roots)


def common_rational_solutions(
    f: MPoly, g: MPoly
) -> tuple[list[tuple[Fraction, Fraction]], MPoly | None]:
    """
    Rational common zeros (s, b) of two polynomials in n (standing for s) and b.

    A common factor of positive degree describes a whole curve of solutions;
    it is split off and returned as the second component, and the isolated
    rational points of the cofactors are returned as the first.
    """
    if f.is_zero() or g.is_zero():
        return [], (g if f.is_zero() else f)

    common = f.gcd(g)
    curve = common if common.total_degree() > 0 else None
    if curve is not None:
        f, g = f.exquo(common), g.exquo(common)

    eliminated = MPoly.from_expr(resultant(f.as_expr(), g.as_expr(), N))
    if eliminated.is_zero():
        logger.warning("Resultant vanished after removing common factor")
        return [], curve

    solutions = []
    for beta in rational_roots(eliminated, "b"):
        f_beta = mpoly_substitute(f, "b", beta)
        g_beta = mpoly_substitute(g, "b", beta)
        shared = f_beta.gcd(g_beta)
        for s in rational_roots(shared, "n"):
            solutions.append((s, beta))

    logger.debug("Common rational solutions", count=len(solutions), curve=curve is not None)
    return sorted(set(solutions)), curve
