"""
Runner for the golden table.

Each case kind has a checker that recomputes the value with the library and
compares it exactly with the expectation; the summary mirrors a pass/fail
test report.
"""

import time
from typing import Callable

import structlog
from pydantic import BaseModel, Field
from sympy import sympify

from virasoro.models.algebra import HighestWeight, ModuleParams
from virasoro.evaluation.golden_cases import get_all_golden_cases
from virasoro.services.expression_parser import parse_elem
from virasoro.services.linalg import rank
from virasoro.services.scalar_poly import (
    GENS,
    MPoly,
    integer_roots,
    mpoly_format,
    mpoly_substitute,
    parse_rat,
)
from virasoro.services.tensor_analysis import (
    canonicalize,
    casimir_probe,
    classify_isomorphism,
    exceptional_parameters,
    phi_eval,
    phi_poly,
    phi_symbolic,
    simplicity,
)
from virasoro.services.verma import (
    ff_weights,
    maximal_submodule_generators,
    same_generated_submodule,
    singular_vectors_at_level,
)


logger = structlog.get_logger()

SPAN_CHECK_LEVEL = 6


class GoldenCaseResult(BaseModel):
    id: str
    kind: str
    description: str
    passed: bool
    detail: str = Field("", description="Observed value when the check fails")
    seconds: float = 0.0


class SelfTestSummary(BaseModel):
    total: int
    passed: int
    failed: int
    results: list[GoldenCaseResult]


def parse_poly(text: str) -> MPoly:
    """Polynomial in n, a, b from sympy syntax."""
    names = {str(g): g for g in GENS}
    return MPoly.from_expr(sympify(text, locals=names))


def _hw(case: dict) -> HighestWeight:
    return HighestWeight(c=parse_rat(case["c"]), h=parse_rat(case["h"]))


def _params(case: dict) -> ModuleParams:
    return canonicalize(parse_rat(case["alpha"]), parse_rat(case["beta"]))


# =============================================================================
# CHECKERS
# =============================================================================
# Each returns (passed, observed description)

def check_singular(case: dict) -> tuple[bool, str]:
    vectors = singular_vectors_at_level(_hw(case), case["level"])
    observed = [str(v.to_elem()) for v in vectors]
    if case["expected"] is None:
        return not vectors, f"{observed}"
    if len(vectors) != 1:
        return False, f"dimension {len(vectors)}: {observed}"
    expected = parse_elem(case["expected"])
    found = vectors[0].to_elem()
    monos = sorted(set(expected.terms) | set(found.terms))
    rows = [[expected.coefficient(m) for m in monos], [found.coefficient(m) for m in monos]]
    return rank(rows, len(monos)) == 1, observed[0]


def check_generators(case: dict) -> tuple[bool, str]:
    gens = maximal_submodule_generators(_hw(case), case["cap"])
    found = [q for q, _ in gens.generators]
    expected = [parse_elem(text) for text in case["expected"]]
    same = same_generated_submodule(found, expected, SPAN_CHECK_LEVEL)
    observed = f"{gens.status.value}: {[str(q) for q in found]}"
    return same and gens.status.value == case["status"], observed


def check_phi_identity(case: dict) -> tuple[bool, str]:
    poly = phi_symbolic(parse_elem(case["elem"]))
    if case["substitute_n"] is not None:
        poly = mpoly_substitute(poly, "n", parse_poly(case["substitute_n"]))
    return poly == parse_poly(case["expected"]), mpoly_format(poly)


def check_phi_value(case: dict) -> tuple[bool, str]:
    params = ModuleParams(alpha=parse_rat(case["alpha"]), beta=parse_rat(case["beta"]))
    value = phi_eval(params, case["n"], parse_elem(case["elem"]))
    return value == parse_rat(case["expected"]), str(value)


def check_phi_roots(case: dict) -> tuple[bool, str]:
    params = ModuleParams(alpha=parse_rat(case["alpha"]), beta=parse_rat(case["beta"]))
    roots = integer_roots(phi_poly(params, parse_elem(case["elem"])).poly)
    return roots == case["expected"], str(roots)


def check_simplicity(case: dict) -> tuple[bool, str]:
    report = simplicity(_hw(case), _params(case))
    quotients = [step.quotient.h for step in report.filtration]
    expected = [parse_rat(q) for q in case["quotients"]]
    passed = report.phi.roots == case["phi"] and not report.phi.all_integers and quotients == expected
    return passed, f"verdict={report.verdict}, phi={report.phi.roots}, quotients={quotients}"


def check_exceptional(case: dict) -> tuple[bool, str]:
    found = exceptional_parameters(_hw(case), case["cap"])
    observed = {(p.params.alpha, p.params.beta, tuple(p.phi_roots)) for p in found.points}
    expected = {(parse_rat(a), parse_rat(b), tuple(roots)) for a, b, roots in case["expected"]}
    return observed == expected, str(sorted(observed))


def check_ff_weights(case: dict) -> tuple[bool, str]:
    hw = ff_weights(case["p"], case["q"], case["m"])
    c, h = case["expected"]
    return (hw.c, hw.h) == (parse_rat(c), parse_rat(h)), f"({hw.c}, {hw.h})"


def check_classify(case: dict) -> tuple[bool, str]:
    def side(values):
        c, h, alpha, beta = (parse_rat(v) for v in values)
        return HighestWeight(c=c, h=h), ModuleParams(alpha=alpha, beta=beta)

    outcome = classify_isomorphism(side(case["first"]), side(case["second"]))
    return outcome.isomorphic == case["expected"], str(outcome.isomorphic)


def check_casimir(case: dict) -> tuple[bool, str]:
    probe = casimir_probe(_hw(case), _params(case), case["j"], case["max_n"])
    return probe.dimensions == case["expected"], str(probe.dimensions)


CHECKERS: dict[str, Callable[[dict], tuple[bool, str]]] = {
    "singular": check_singular,
    "generators": check_generators,
    "phi_identity": check_phi_identity,
    "phi_value": check_phi_value,
    "phi_roots": check_phi_roots,
    "simplicity": check_simplicity,
    "exceptional": check_exceptional,
    "ff_weights": check_ff_weights,
    "classify": check_classify,
    "casimir": check_casimir,
}


class SelfTestService:
    """Runs golden cases and aggregates the outcome."""

    def __init__(self, cases: list[dict] | None = None):
        self.cases = cases if cases is not None else get_all_golden_cases()

    def run_case(self, case: dict) -> GoldenCaseResult:
        start = time.perf_counter()
        checker = CHECKERS[case["kind"]]
        try:
            passed, observed = checker(case)
        except Exception as e:
            logger.error("Golden case raised", case_id=case["id"], error=str(e))
            passed, observed = False, f"{type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        if not passed:
            logger.warning("Golden case failed", case_id=case["id"], observed=observed)
        return GoldenCaseResult(
            id=case["id"],
            kind=case["kind"],
            description=case["description"],
            passed=passed,
            detail="" if passed else observed,
            seconds=round(elapsed, 3),
        )

    def run_all(self) -> SelfTestSummary:
        results = [self.run_case(case) for case in self.cases]
        passed = sum(1 for r in results if r.passed)
        logger.info("Self test finished", total=len(results), passed=passed)
        return SelfTestSummary(
            total=len(results), passed=passed, failed=len(results) - passed, results=results
        )


# Singleton instance
_selftest_service = None


def get_selftest_service() -> SelfTestService:
    """Get the singleton self test service instance."""
    global _selftest_service
    if _selftest_service is None:
        _selftest_service = SelfTestService()
    return _selftest_service
