from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from virasoro.services.enveloping import EnvElem, format_elem
from virasoro.services.scalar_poly import MPoly, Unbounded, format_rat, mpoly_format, to_fraction


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(format_rat, return_type=str),
]
Element = Annotated[EnvElem, PlainSerializer(format_elem, return_type=str)]
Polynomial = Annotated[MPoly, PlainSerializer(mpoly_format, return_type=str)]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class GeneratorStatus(str, Enum):
    VERMA_SIMPLE = "verma_simple"
    SINGLE_GENERATOR = "single_generator"
    TWO_GENERATORS = "two_generators"
    UNDETERMINED_BEYOND_CAP = "undetermined_beyond_cap"


class Verdict(str, Enum):
    SIMPLE = "simple"
    NOT_SIMPLE = "not_simple"


class HighestWeight(_Frozen):
    """Central charge and d_0-eigenvalue of the highest weight vector u."""
    c: Rational = Field(..., description="Central charge")
    h: Rational = Field(..., description="Eigenvalue of d_0 on u")


class ModuleParams(_Frozen):
    """Parameters of the intermediate series module V'_{alpha,beta}."""
    alpha: Rational = Field(..., description="Shift parameter")
    beta: Rational = Field(..., description="Conformal weight parameter")
    canonical: bool = Field(False, description="0 <= alpha < 1 and beta != 1")

    @property
    def is_primed_zero(self) -> bool:
        """The quotient V'_{0,0} where v_0 is dropped."""
        return self.canonical and self.alpha == 0 and self.beta == 0


class MaximalSubmoduleGens(_Frozen):
    """Generators Q1, Q2 of J(c,h); Q2 = Q1 for one generator, both zero when none was found."""
    hw: HighestWeight
    q1: Element = Field(default_factory=EnvElem.zero)
    q2: Element = Field(default_factory=EnvElem.zero)
    levels: tuple[int, int] = Field((0, 0), description="Levels of Q1 and Q2, 0 for zero")
    status: GeneratorStatus
    scanned_to_level: int = Field(..., description="Highest level searched for singular vectors")

    @property
    def generators(self) -> list[tuple[EnvElem, int]]:
        """Distinct nonzero generators with their levels."""
        out = []
        if not self.q1.is_zero():
            out.append((self.q1, self.levels[0]))
        if not self.q2.is_zero() and self.q2 != self.q1:
            out.append((self.q2, self.levels[1]))
        return out

    @property
    def certified(self) -> bool:
        return self.status in (GeneratorStatus.SINGLE_GENERATOR, GeneratorStatus.TWO_GENERATORS)


class PhiPolynomial(_Frozen):
    """n -> phi_n(source) for fixed (alpha, beta), optionally with alpha, beta left symbolic."""
    poly: Polynomial
    symbolic: Optional[Polynomial] = None
    source: Element


class PhiSetResult(_Frozen):
    roots: list[int] = Field(default_factory=list, description="Finite set of common integer roots")
    all_integers: bool = Field(False, description="Every integer (except 0 when excluded_zero) is a root")
    excluded_zero: bool = Field(False, description="0 removed because the module is V'_{0,0}")
    status: GeneratorStatus
    caveats: list[str] = Field(default_factory=list)

    @property
    def phi(self) -> list[int] | Unbounded:
        return Unbounded.ALL_INTEGERS if self.all_integers else list(self.roots)

    @property
    def is_empty(self) -> bool:
        return not self.all_integers and not self.roots


class FiltrationStep(_Frozen):
    """The quotient W^(previous) / W^(index), a highest weight module of weight (c, alpha + h + index)."""
    index: int
    previous: Optional[int] = Field(None, description="None stands for the whole module")
    quotient: HighestWeight


class SimplicityReport(_Frozen):
    verdict: Optional[Verdict] = Field(None, description="None when the generator scan was inconclusive")
    phi: PhiSetResult
    filtration: list[FiltrationStep] = Field(default_factory=list)
    minimal_submodule_index: Optional[int] = None
    infinite_filtration: bool = False
    quotient_weight_offset: Rational = Field(..., description="alpha + h; quotient at n has weight offset + n")
    caveats: list[str] = Field(default_factory=list)


class IsomorphismResult(_Frozen):
    isomorphic: bool
    left: tuple[HighestWeight, ModuleParams]
    right: tuple[HighestWeight, ModuleParams]


class CasimirProbe(_Frozen):
    hw: HighestWeight
    params: ModuleParams
    j: int
    dimensions: list[int] = Field(..., description="dim span{Q_k(u (x) v_j) : k <= N} for N = 1..max_n")
    non_decreasing: bool
    strictly_increases: bool
    status: GeneratorStatus
    caveats: list[str] = Field(default_factory=list)


class QuotientDimensionProfile(_Frozen):
    hw: HighestWeight
    params: ModuleParams
    n: int
    dimensions: list[int]
    partition_numbers: list[int]
    closure_extra_levels: int

    @property
    def matches_verma(self) -> bool:
        return self.dimensions == self.partition_numbers


class ExceptionalPoint(_Frozen):
    params: ModuleParams
    phi_roots: list[int]


class ExceptionalParameters(_Frozen):
    hw: HighestWeight
    status: GeneratorStatus
    points: list[ExceptionalPoint] = Field(default_factory=list)
    curve: Optional[Polynomial] = Field(None, description="phi polynomial in (s = alpha + n, b) vanishing on a curve")
    caveats: list[str] = Field(default_factory=list)


class Report(BaseModel):
    """Structured output of one CLI command."""
    command: str
    arguments: dict[str, Any] = Field(default_factory=dict)
    parameters: dict[str, Any] = Field(default_factory=dict)
    result: dict[str, Any] = Field(default_factory=dict)
    caveats: list[str] = Field(default_factory=list)
    timing_seconds: float = 0.0
