"""
Tensor products V(c,h) (x) V'_{alpha,beta} and their submodule structure.

The functional phi_n on U(Vir_-) is fixed by phi_n(1) = 1 and
phi_n(d_{-k} P) = -(alpha + n + k - deg P - k beta) phi_n(P). The common
integer roots of phi_n(Q1) and phi_n(Q2) decide simplicity and index the
filtration by the submodules W^(n) generated by u (x) t^i, i > n.

Tensor vectors are kept in v-index coordinates: the pair (P, j) stands for
P u (x) v_j, whose shifted exponent is j + deg P = j - |P|.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

import structlog

from virasoro.config import get_settings
from virasoro.errors import InvalidParameterError, UndeterminedGeneratorsError, WindowEscapeError
from virasoro.models.algebra import (
    CasimirProbe,
    ExceptionalParameters,
    ExceptionalPoint,
    FiltrationStep,
    GeneratorStatus,
    HighestWeight,
    IsomorphismResult,
    MaximalSubmoduleGens,
    ModuleParams,
    PhiPolynomial,
    PhiSetResult,
    QuotientDimensionProfile,
    SimplicityReport,
    Verdict,
)
from virasoro.services.enveloping import EnvElem, Partition, format_elem, partition_count, pbw_basis
from virasoro.services.linalg import rank
from virasoro.services.scalar_poly import (
    MPoly,
    Unbounded,
    common_rational_solutions,
    format_rat,
    integer_roots,
    intersect_roots,
    mpoly_substitute,
)
from virasoro.services.verma import VermaVector, act_on_monomial, maximal_submodule_generators, reduce_mod_J


logger = structlog.get_logger()

Scalar = Union[int, Fraction]
Key = tuple[Partition, int]


# =============================================================================
# PARAMETERS
# =============================================================================

def canonicalize(alpha: Scalar, beta: Scalar) -> ModuleParams:
    """Fractional part of alpha; beta = 1 is identified with beta = 0."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    return ModuleParams(
        alpha=alpha - math.floor(alpha),
        beta=Fraction(0) if beta == 1 else beta,
        canonical=True,
    )


def _canonical(params: ModuleParams) -> ModuleParams:
    return params if params.canonical else canonicalize(params.alpha, params.beta)


def intermediate_simple(params: ModuleParams) -> bool:
    """Whether V_{alpha,beta} itself is simple."""
    params = _canonical(params)
    return not (params.alpha == 0 and params.beta == 0)


def classify_isomorphism(
    a: tuple[HighestWeight, ModuleParams], b: tuple[HighestWeight, ModuleParams]
) -> IsomorphismResult:
    left = (a[0], _canonical(a[1]))
    right = (b[0], _canonical(b[1]))
    same = (
        left[0].c == right[0].c
        and left[0].h == right[0].h
        and left[1].alpha == right[1].alpha
        and left[1].beta == right[1].beta
    )
    return IsomorphismResult(isomorphic=same, left=left, right=right)


# =============================================================================
# PHI FUNCTIONAL
# =============================================================================

def phi_word(params: ModuleParams, n: int, word: Sequence[int]) -> Fraction:
    """phi_n of d_{-w_1} ... d_{-w_r} read as a word, peeling the leftmost factor last."""
    value = Fraction(1)
    size = 0
    for k in reversed(word):
        value *= k * params.beta - params.alpha - n - size - k
        size += k
    return value


def phi_eval(params: ModuleParams, n: int, x: EnvElem) -> Fraction:
    return sum((coeff * phi_word(params, n, mono) for mono, coeff in x.items()), Fraction(0))


def tau_eval(n: int, params: ModuleParams, v: VermaVector) -> Fraction:
    """phi_n extended to M(c,h) through P u -> phi_n(P)."""
    return sum((coeff * phi_word(params, n, mono) for mono, coeff in v.items()), Fraction(0))


@lru_cache(maxsize=None)
def _symbolic_monomial(mono: Partition) -> MPoly:
    n, a, b = MPoly.var("n"), MPoly.var("a"), MPoly.var("b")
    value = MPoly.const(1)
    size = 0
    for k in reversed(mono):
        value = value * (b * k - a - n - (size + k))
        size += k
    return value


@lru_cache(maxsize=None)
def _numeric_monomial(alpha: Fraction, beta: Fraction, mono: Partition) -> MPoly:
    n = MPoly.var("n")
    value = MPoly.const(1)
    size = 0
    for k in reversed(mono):
        value = value * (MPoly.const(k * beta - alpha - size - k) - n)
        size += k
    return value


def phi_symbolic(x: EnvElem) -> MPoly:
    """phi_n(x) as a polynomial in n, a (alpha) and b (beta)."""
    total = MPoly.zero()
    for mono, coeff in x.items():
        total = total + _symbolic_monomial(mono) * coeff
    return total


def phi_poly(params: ModuleParams, x: EnvElem, symbolic: bool = False) -> PhiPolynomial:
    total = MPoly.zero()
    for mono, coeff in x.items():
        total = total + _numeric_monomial(params.alpha, params.beta, mono) * coeff
    return PhiPolynomial(poly=total, symbolic=phi_symbolic(x) if symbolic else None, source=x)


def phi_in_s(x: EnvElem) -> MPoly:
    """phi_n(x) as a polynomial in s = alpha + n (written n) and b."""
    return mpoly_substitute(phi_symbolic(x), "a", 0)


def generator_caveats(gens: MaximalSubmoduleGens) -> list[str]:
    if gens.status == GeneratorStatus.UNDETERMINED_BEYOND_CAP:
        return [
            f"no singular vectors up to level {gens.scanned_to_level}; "
            "J(c,h) undetermined beyond the cap"
        ]
    if gens.status == GeneratorStatus.VERMA_SIMPLE:
        return [f"M(c,h) assumed simple after scanning to level {gens.scanned_to_level}"]
    if gens.status == GeneratorStatus.SINGLE_GENERATOR:
        return [f"single generator certified up to level {gens.scanned_to_level}"]
    return []


def phi_set(
    hw: HighestWeight,
    params: ModuleParams,
    cap: Optional[int] = None,
    gens: Optional[MaximalSubmoduleGens] = None,
) -> PhiSetResult:
    """Common integer roots of phi_n(Q1) and phi_n(Q2); 0 is dropped for V'_{0,0}."""
    params = _canonical(params)
    gens = gens or maximal_submodule_generators(hw, cap)
    excluded = params.is_primed_zero
    caveats = generator_caveats(gens)

    roots: list[int] | Unbounded = Unbounded.ALL_INTEGERS
    for q, _level in gens.generators:
        roots = intersect_roots(roots, integer_roots(phi_poly(params, q).poly))

    if roots is Unbounded.ALL_INTEGERS:
        return PhiSetResult(
            all_integers=True, excluded_zero=excluded, status=gens.status, caveats=caveats
        )
    if excluded:
        roots = [k for k in roots if k != 0]
    return PhiSetResult(roots=roots, excluded_zero=excluded, status=gens.status, caveats=caveats)


def simplicity(
    hw: HighestWeight,
    params: ModuleParams,
    cap: Optional[int] = None,
    gens: Optional[MaximalSubmoduleGens] = None,
) -> SimplicityReport:
    """Simple iff the phi set is empty; otherwise the chain of W^(n_i) with its quotient weights."""
    params = _canonical(params)
    phi = phi_set(hw, params, cap, gens)
    offset = params.alpha + hw.h

    if phi.status == GeneratorStatus.UNDETERMINED_BEYOND_CAP:
        logger.warning("Simplicity verdict withheld", c=format_rat(hw.c), h=format_rat(hw.h))
        return SimplicityReport(
            phi=phi, quotient_weight_offset=offset,
            caveats=phi.caveats + ["verdict withheld"],
        )

    if phi.all_integers:
        return SimplicityReport(
            verdict=Verdict.NOT_SIMPLE, phi=phi, infinite_filtration=True,
            quotient_weight_offset=offset, caveats=list(phi.caveats),
        )

    if not phi.roots:
        return SimplicityReport(
            verdict=Verdict.SIMPLE, phi=phi, quotient_weight_offset=offset, caveats=list(phi.caveats)
        )

    steps = []
    previous = None
    for index in phi.roots:
        steps.append(FiltrationStep(
            index=index,
            previous=previous,
            quotient=HighestWeight(c=hw.c, h=offset + index),
        ))
        previous = index
    logger.info("Tensor product not simple", phi=phi.roots, alpha=format_rat(params.alpha),
                beta=format_rat(params.beta))
    return SimplicityReport(
        verdict=Verdict.NOT_SIMPLE,
        phi=phi,
        filtration=steps,
        minimal_submodule_index=phi.roots[-1],
        quotient_weight_offset=offset,
        caveats=list(phi.caveats),
    )


def filtration(hw: HighestWeight, params: ModuleParams, cap: Optional[int] = None) -> SimplicityReport:
    return simplicity(hw, params, cap)


def exceptional_parameters(hw: HighestWeight, cap: Optional[int] = None) -> ExceptionalParameters:
    """Canonical rational (alpha, beta) for which the tensor product is not simple."""
    gens = maximal_submodule_generators(hw, cap)
    caveats = generator_caveats(gens)

    if gens.status == GeneratorStatus.SINGLE_GENERATOR:
        return ExceptionalParameters(
            hw=hw, status=gens.status, curve=phi_in_s(gens.q1),
            caveats=caveats + ["non-simple exactly where the curve has a solution with s - alpha integer"],
        )
    if gens.status != GeneratorStatus.TWO_GENERATORS:
        return ExceptionalParameters(hw=hw, status=gens.status, caveats=caveats)

    solutions, curve = common_rational_solutions(phi_in_s(gens.q1), phi_in_s(gens.q2))
    candidates = sorted({
        (s - math.floor(s), beta) for s, beta in solutions if beta != 1
    })
    points = []
    for alpha, beta in candidates:
        params = canonicalize(alpha, beta)
        result = phi_set(hw, params, gens=gens)
        if result.roots:
            points.append(ExceptionalPoint(params=params, phi_roots=result.roots))
    if curve is not None:
        caveats.append("phi polynomials share a factor; non-simple along its zero curve")
    caveats.append("only rational parameters are reported")
    logger.info("Exceptional parameters found", c=format_rat(hw.c), h=format_rat(hw.h), count=len(points))
    return ExceptionalParameters(hw=hw, status=gens.status, points=points, curve=curve, caveats=caveats)


# =============================================================================
# TENSOR MODULE
# =============================================================================

@dataclass(frozen=True)
class TensorWindow:
    """Truncation: Verma level at most max_level and shifted exponent in [min_exponent, max_exponent]."""
    max_level: int
    min_exponent: int
    max_exponent: int

    @classmethod
    def from_settings(cls) -> TensorWindow:
        settings = get_settings()
        return cls(settings.window_level, settings.window_min, settings.window_max)

    def check(self, level: int, exponent: int) -> None:
        if level > self.max_level or not self.min_exponent <= exponent <= self.max_exponent:
            raise WindowEscapeError(level, exponent, self)


class TensorVector:
    """Finite sum of P u (x) v_j with P reduced modulo J(c,h)."""

    __slots__ = ("module", "_terms")

    def __init__(self, module: TensorModule, terms: Mapping[Key, Fraction]):
        self.module = module
        self._terms = {key: coeff for key, coeff in terms.items() if coeff}

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def exponents(self) -> set[int]:
        """Shifted exponents j + deg P of the terms."""
        return {j - sum(mono) for mono, j in self._terms}

    def component(self, exponent: int) -> dict[Key, Fraction]:
        return {key: c for key, c in self._terms.items() if key[1] - sum(key[0]) == exponent}

    def scale(self, q: Scalar) -> TensorVector:
        q = Fraction(q)
        return TensorVector(self.module, {k: c * q for k, c in self._terms.items()})

    def __add__(self, other: TensorVector) -> TensorVector:
        acc = dict(self._terms)
        for key, coeff in other._terms.items():
            acc[key] = acc.get(key, Fraction(0)) + coeff
        return TensorVector(self.module, acc)

    def __sub__(self, other: TensorVector) -> TensorVector:
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorVector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"TensorVector({format_tensor(self)!r})"


class TensorModule:
    """V(c,h) (x) V'_{alpha,beta} with V(c,h) realized as M(c,h) modulo J(c,h)."""

    def __init__(
        self,
        hw: HighestWeight,
        params: ModuleParams,
        gens: Optional[MaximalSubmoduleGens] = None,
        window: Optional[TensorWindow] = None,
        cap: Optional[int] = None,
    ):
        self.hw = hw
        self.params = params
        self.gens = gens or maximal_submodule_generators(hw, cap)
        self.window = window

    def vector(self, terms: Mapping[Key, Scalar]) -> TensorVector:
        """Build a vector, reducing Verma parts and dropping v_0 for V'_{0,0}."""
        grouped: dict[tuple[int, int], dict[Partition, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
        for (mono, j), coeff in terms.items():
            if coeff:
                grouped[(j, sum(mono))][tuple(mono)] += Fraction(coeff)
        drop_zero = self.params.is_primed_zero
        out: dict[Key, Fraction] = {}
        for (j, level), coeffs in grouped.items():
            if drop_zero and j == 0:
                continue
            reduced = reduce_mod_J(VermaVector(self.hw, level, coeffs), self.gens)
            for mono, coeff in reduced.items():
                if self.window is not None:
                    self.window.check(level, j - level)
                out[(mono, j)] = coeff
        return TensorVector(self, out)

    def zero(self) -> TensorVector:
        return TensorVector(self, {})

    def basis_vector(self, mono: Partition, j: int) -> TensorVector:
        return self.vector({(tuple(mono), j): 1})

    def highest(self, j: int) -> TensorVector:
        """u (x) v_j, which is u (x) t^j."""
        return self.basis_vector((), j)

    def from_state(self, pieces: Iterable[tuple[EnvElem, int]]) -> TensorVector:
        terms: dict[Key, Fraction] = defaultdict(Fraction)
        for elem, j in pieces:
            for mono, coeff in elem.items():
                terms[(mono, j)] += coeff
        return self.vector(terms)

    def apply(self, m: int, v: TensorVector) -> TensorVector:
        """d_m (P u (x) v_j) = (d_m P u) (x) v_j + (alpha + j + m beta) P u (x) v_{m+j}."""
        alpha, beta = self.params.alpha, self.params.beta
        raw: dict[Key, Fraction] = defaultdict(Fraction)
        for (mono, j), coeff in v.items():
            for out, coeff2 in act_on_monomial(self.hw.c, self.hw.h, m, mono):
                raw[(out, j)] += coeff * coeff2
            factor = alpha + j + m * beta
            if factor:
                raw[(mono, j + m)] += coeff * factor
        return self.vector(raw)

    def apply_word(self, mono: Partition, v: TensorVector) -> TensorVector:
        """P v for the PBW monomial P = d_{-k_r} ... d_{-k_1}."""
        for k in reversed(mono):
            v = self.apply(-k, v)
        return v

    def central(self, v: TensorVector) -> TensorVector:
        return v.scale(self.hw.c)

    def casimir(self, k: int, v: TensorVector) -> TensorVector:
        """(d_0^2 + k d_0 - d_{-k} d_k) v."""
        if k < 1:
            raise InvalidParameterError(f"Casimir index must be positive, got {k}")
        d0 = self.apply(0, v)
        return self.apply(0, d0) + d0.scale(k) - self.apply(-k, self.apply(k, v))


def tensor_module(
    hw: HighestWeight,
    params: ModuleParams,
    cap: Optional[int] = None,
    window: Optional[TensorWindow] = None,
) -> TensorModule:
    return TensorModule(hw, _canonical(params), window=window, cap=cap)


def tensor_apply(m: int, v: TensorVector) -> TensorVector:
    return v.module.apply(m, v)


def casimir_apply(k: int, v: TensorVector) -> TensorVector:
    return v.module.casimir(k, v)


def format_tensor(v: TensorVector) -> str:
    if v.is_zero():
        return "0"
    pieces = []
    keys = sorted(v.terms, key=lambda key: (key[1], sum(key[0]), key[0]))
    for index, (mono, j) in enumerate(keys):
        text = format_elem(EnvElem({mono: v.terms[(mono, j)]}))
        sign = ""
        if text.startswith("-"):
            sign, text = "-", text[1:]
        body = f"{text}@v({j})"
        if index == 0:
            pieces.append(f"{sign}{body}")
        else:
            pieces.append(f"{'-' if sign else '+'} {body}")
    return " ".join(pieces)


# =============================================================================
# PROBES
# =============================================================================

def _span_dimension(vectors: Sequence[TensorVector]) -> int:
    keys = sorted({key for v in vectors for key in v.terms})
    rows = [[v.terms.get(key, Fraction(0)) for key in keys] for v in vectors]
    return rank(rows, len(keys))


def casimir_probe(
    hw: HighestWeight, params: ModuleParams, j: int, max_n: int, cap: Optional[int] = None
) -> CasimirProbe:
    """Dimensions of span{Q_k(u (x) v_j) : 1 <= k <= N} for N = 1..max_n."""
    params = _canonical(params)
    module = tensor_module(hw, params, cap)
    start = module.highest(j)
    if start.is_zero():
        raise InvalidParameterError(f"u (x) v_{j} vanishes in this module")
    images = []
    dimensions = []
    for k in range(1, max_n + 1):
        images.append(module.casimir(k, start))
        dimensions.append(_span_dimension(images))
    return CasimirProbe(
        hw=hw,
        params=params,
        j=j,
        dimensions=dimensions,
        non_decreasing=all(a <= b for a, b in zip(dimensions, dimensions[1:])),
        strictly_increases=any(a < b for a, b in zip(dimensions, dimensions[1:])),
        status=module.gens.status,
        caveats=generator_caveats(module.gens),
    )


def quotient_dimension_profile(
    hw: HighestWeight,
    params: ModuleParams,
    n: int,
    max_depth: int,
    extra_levels: Optional[int] = None,
    cap: Optional[int] = None,
) -> QuotientDimensionProfile:
    """
    Weight-space dimensions of the highest weight quotient generated by u (x) t^n over W^(n).

    At depth m the quotient is spanned by P (u (x) t^n), |P| = m, and W^(n) is
    approximated by y (u (x) t^i) with i > n and |y| <= m + extra_levels. The
    truncated closure lies inside W^(n), so each measured dimension is an upper
    bound for the true one and never exceeds the partition number p(m).
    """
    params = _canonical(params)
    extra = extra_levels if extra_levels is not None else get_settings().closure_extra_levels
    module = tensor_module(hw, params, cap)
    if module.gens.status == GeneratorStatus.UNDETERMINED_BEYOND_CAP:
        raise UndeterminedGeneratorsError(
            f"no certified generators for c={format_rat(hw.c)}, h={format_rat(hw.h)} within level cap"
        )
    cache: dict[tuple[Partition, int], TensorVector] = {}

    def word_on_highest(mono: Partition, i: int) -> TensorVector:
        key = (mono, i)
        if key not in cache:
            if not mono:
                cache[key] = module.highest(i)
            else:
                cache[key] = module.apply(-mono[0], word_on_highest(mono[1:], i))
        return cache[key]

    dimensions = []
    for m in range(max_depth + 1):
        targets = [word_on_highest(mono, n) for mono in pbw_basis(m)]
        closure = [
            word_on_highest(mono, n - m + s)
            for s in range(m + 1, m + extra + 1)
            for mono in pbw_basis(s)
        ]
        dimensions.append(_span_dimension(closure + targets) - _span_dimension(closure))
        logger.debug("Quotient weight space measured", depth=m, dim=dimensions[-1])

    return QuotientDimensionProfile(
        hw=hw,
        params=params,
        n=n,
        dimensions=dimensions,
        partition_numbers=[partition_count(m) for m in range(max_depth + 1)],
        closure_extra_levels=extra,
    )
