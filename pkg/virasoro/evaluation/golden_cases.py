"""
Golden checks drawn from the worked examples for singular vectors, submodule
generators, the phi functional and tensor product simplicity.

Structure:
- Each case has an id, a kind (which selects the checker in selftest.py),
  a short description and the kind-specific inputs and expectations
- Rationals are written as literals ("1/2") and elements of U(Vir_-) in the
  d(-k) expression grammar so the table reads like CLI input
- Expected spans of generators are compared as submodules, not coefficientwise
"""

from typing import Optional


# =============================================================================
# SINGULAR VECTORS
# =============================================================================

SINGULAR_CASES = [
    {
        "id": "GC001",
        "kind": "singular",
        "description": "Level 1 singular vector of M(1,0)",
        "c": "1", "h": "0", "level": 1,
        "expected": "d(-1)",
    },
    {
        "id": "GC002",
        "kind": "singular",
        "description": "Level 2 singular vector of M(1,-1/4)",
        "c": "1", "h": "-1/4", "level": 2,
        "expected": "d(-1)^2 + d(-2)",
    },
    {
        "id": "GC003",
        "kind": "singular",
        "description": "Level 3 singular vector of M(1,-1)",
        "c": "1", "h": "-1", "level": 3,
        "expected": "d(-1)^3 + 4*d(-2)*d(-1) + 2*d(-3)",
    },
    {
        "id": "GC004",
        "kind": "singular",
        "description": "No singular vector at level 1 of M(1,-1/4)",
        "c": "1", "h": "-1/4", "level": 1,
        "expected": None,
    },
]


# =============================================================================
# GENERATORS OF J(c,h)
# =============================================================================

GENERATOR_CASES = [
    {
        "id": "GC010",
        "kind": "generators",
        "description": "J(0,0) is generated by d(-1)u and d(-2)u",
        "c": "0", "h": "0", "cap": 4,
        "status": "two_generators",
        "expected": ["d(-1)", "d(-2)"],
    },
    {
        "id": "GC011",
        "kind": "generators",
        "description": "J(-22/5,0) generators at levels 1 and 4",
        "c": "-22/5", "h": "0", "cap": 6,
        "status": "two_generators",
        "expected": ["d(-1)", "5*d(-2)^2 + 3*d(-4)"],
    },
    {
        "id": "GC012",
        "kind": "generators",
        "description": "J(1/2,-1/2) generators at levels 2 and 3",
        "c": "1/2", "h": "-1/2", "cap": 6,
        "status": "two_generators",
        "expected": ["3*d(-1)^2 + 4*d(-2)", "4*d(-1)^3 + 12*d(-2)*d(-1) + 3*d(-3)"],
    },
    {
        "id": "GC013",
        "kind": "generators",
        "description": "J(1/2,0) generators at levels 1 and 6",
        "c": "1/2", "h": "0", "cap": 6,
        "status": "two_generators",
        "expected": ["d(-1)", "64*d(-2)^3 - 93*d(-3)^2 + 264*d(-4)*d(-2) - 108*d(-6)"],
    },
    {
        "id": "GC014",
        "kind": "generators",
        "description": "J(1/2,-1/16) generators at levels 2 and 4",
        "c": "1/2", "h": "-1/16", "cap": 6,
        "status": "two_generators",
        "expected": [
            "4*d(-1)^2 + 3*d(-2)",
            "144*d(-1)^4 + 600*d(-2)*d(-1)^2 + 264*d(-3)*d(-1) + 49*d(-2)^2 + 36*d(-4)",
        ],
    },
    {
        "id": "GC015",
        "kind": "generators",
        "description": "J(1,0) has the single generator d(-1)u",
        "c": "1", "h": "0", "cap": 8,
        "status": "single_generator",
        "expected": ["d(-1)"],
    },
]


# =============================================================================
# PHI FUNCTIONAL
# =============================================================================
# "identity": phi as a polynomial in n, a, b, optionally after substituting n
# "value": phi_n at fixed (alpha, beta, n)

PHI_CASES = [
    {
        "id": "GC020",
        "kind": "phi_identity",
        "description": "phi_n(d(-1)) = b - a - n - 1",
        "elem": "d(-1)",
        "substitute_n": None,
        "expected": "b - a - n - 1",
    },
    {
        "id": "GC021",
        "kind": "phi_identity",
        "description": "3*d(-2)^2 + 5*d(-4) on the line n = b - a - 1",
        "elem": "3*d(-2)^2 + 5*d(-4)",
        "substitute_n": "b - a - 1",
        "expected": "3*(b - 1)*(b + 2)",
    },
    {
        "id": "GC027",
        "kind": "phi_identity",
        "description": "Level 4 generator of J(-22/5,0) on the line n = b - a - 1",
        "elem": "5*d(-2)^2 + 3*d(-4)",
        "substitute_n": "b - a - 1",
        "expected": "(b - 1)*(5*b - 6)",
    },
    {
        "id": "GC022",
        "kind": "phi_identity",
        "description": "Level 6 generator of J(1/2,0) on the line n = b - a - 1",
        "elem": "64*d(-2)^3 - 93*d(-3)^2 + 264*d(-4)*d(-2) - 108*d(-6)",
        "substitute_n": "b - a - 1",
        "expected": "2*(16*b - 15)*(b - 1)*(2*b - 1)",
    },
    {
        "id": "GC023",
        "kind": "phi_identity",
        "description": "Level 3 singular vector of M(1,-1) factors through b - a - n",
        "elem": "d(-1)^3 + 4*d(-2)*d(-1) + 2*d(-3)",
        "substitute_n": None,
        "expected": "(b - a - n)*(n**2 + 2*(1 - b + a)*n + (a - b)**2 + 2*a + 2*b - 3)",
    },
    {
        "id": "GC024",
        "kind": "phi_identity",
        "description": "Level 2 generator of J(1/2,-1/2) as 3x(x-1) - 4(x-b) with x = n + a - b + 2",
        "elem": "3*d(-1)^2 + 4*d(-2)",
        "substitute_n": None,
        "expected": "3*(n + a - b + 2)*(n + a - b + 1) - 4*(n + a - 2*b + 2)",
    },
    {
        "id": "GC025",
        "kind": "phi_value",
        "description": "phi_1(d(-1)^2 + d(-2)) at alpha = beta = 0",
        "alpha": "0", "beta": "0", "n": 1,
        "elem": "d(-1)^2 + d(-2)",
        "expected": "3",
    },
    {
        "id": "GC026",
        "kind": "phi_roots",
        "description": "Integer roots of phi_n(d(-1)^2 + d(-2)) at alpha = 0, beta = -3",
        "alpha": "0", "beta": "-3",
        "elem": "d(-1)^2 + d(-2)",
        "expected": [-6, -2],
    },
]


# =============================================================================
# SIMPLICITY AND EXCEPTIONAL PARAMETERS
# =============================================================================

SIMPLICITY_CASES = [
    {
        "id": "GC030",
        "kind": "simplicity",
        "description": "V(0,0) tensor products are always simple",
        "c": "0", "h": "0", "alpha": "1/3", "beta": "5",
        "phi": [],
        "quotients": [],
    },
    {
        "id": "GC031",
        "kind": "simplicity",
        "description": "V(1,0) with alpha = beta = 1/2",
        "c": "1", "h": "0", "alpha": "1/2", "beta": "1/2",
        "phi": [-1],
        "quotients": ["-1/2"],
    },
    {
        "id": "GC032",
        "kind": "simplicity",
        "description": "V(-22/5,0) with (1/5,6/5): quotient weight (-22/5,1/5)",
        "c": "-22/5", "h": "0", "alpha": "1/5", "beta": "6/5",
        "phi": [0],
        "quotients": ["1/5"],
    },
    {
        "id": "GC033",
        "kind": "simplicity",
        "description": "V(1/2,-1/2) with (1/2,1/2): quotient weight (1/2,0)",
        "c": "1/2", "h": "-1/2", "alpha": "1/2", "beta": "1/2",
        "phi": [0],
        "quotients": ["0"],
    },
    {
        "id": "GC034",
        "kind": "simplicity",
        "description": "V(1/2,0) with (15/16,15/16): quotient weight (1/2,-1/16)",
        "c": "1/2", "h": "0", "alpha": "15/16", "beta": "15/16",
        "phi": [-1],
        "quotients": ["-1/16"],
    },
    {
        "id": "GC035",
        "kind": "simplicity",
        "description": "V(1/2,-1/16) with (9/16,15/16): quotient weight (1/2,-1/2)",
        "c": "1/2", "h": "-1/16", "alpha": "9/16", "beta": "15/16",
        "phi": [-1],
        "quotients": ["-1/2"],
    },
]

EXCEPTIONAL_CASES = [
    {
        "id": "GC040",
        "kind": "exceptional",
        "description": "No exceptional parameters for V(0,0)",
        "c": "0", "h": "0", "cap": 4,
        "expected": [],
    },
    {
        "id": "GC041",
        "kind": "exceptional",
        "description": "Exceptional parameters for V(-22/5,0)",
        "c": "-22/5", "h": "0", "cap": 6,
        "expected": [("1/5", "6/5", [0])],
    },
    {
        "id": "GC042",
        "kind": "exceptional",
        "description": "Exceptional parameters for V(1/2,-1/2)",
        "c": "1/2", "h": "-1/2", "cap": 6,
        "expected": [("7/16", "15/16", [0]), ("1/2", "1/2", [0])],
    },
    {
        "id": "GC043",
        "kind": "exceptional",
        "description": "Exceptional parameters for V(1/2,0)",
        "c": "1/2", "h": "0", "cap": 6,
        "expected": [("15/16", "15/16", [-1]), ("1/2", "1/2", [-1])],
    },
    {
        "id": "GC044",
        "kind": "exceptional",
        "description": "Exceptional parameters for V(1/2,-1/16)",
        "c": "1/2", "h": "-1/16", "cap": 6,
        "expected": [("0", "1/2", [0]), ("1/16", "15/16", [0]), ("9/16", "15/16", [-1])],
    },
]


# =============================================================================
# PARAMETRIZATION, ISOMORPHISM, CASIMIR
# =============================================================================

MISC_CASES = [
    {
        "id": "GC050",
        "kind": "ff_weights",
        "description": "(p,q,m) = (1,-1,1)",
        "p": 1, "q": -1, "m": 1,
        "expected": ("1", "-1/4"),
    },
    {
        "id": "GC051",
        "kind": "ff_weights",
        "description": "(p,q,m) = (2,-5,3)",
        "p": 2, "q": -5, "m": 3,
        "expected": ("-22/5", "0"),
    },
    {
        "id": "GC052",
        "kind": "ff_weights",
        "description": "(p,q,m) = (3,-4,2)",
        "p": 3, "q": -4, "m": 2,
        "expected": ("1/2", "-1/16"),
    },
    {
        "id": "GC060",
        "kind": "classify",
        "description": "beta must agree",
        "first": ("1", "0", "1/2", "0"), "second": ("1", "0", "1/2", "1/2"),
        "expected": False,
    },
    {
        "id": "GC061",
        "kind": "classify",
        "description": "alpha shifts by integers and beta = 1 ~ beta = 0",
        "first": ("1", "0", "5/2", "1"), "second": ("1", "0", "1/2", "0"),
        "expected": True,
    },
    {
        "id": "GC070",
        "kind": "casimir",
        "description": "Casimir span probe on u (x) v_0 for V(1,0), (1/2,0)",
        "c": "1", "h": "0", "alpha": "1/2", "beta": "0", "j": 0, "max_n": 5,
        "expected": [0, 1, 2, 3, 4],
    },
]


GOLDEN_CASES = (
    SINGULAR_CASES
    + GENERATOR_CASES
    + PHI_CASES
    + SIMPLICITY_CASES
    + EXCEPTIONAL_CASES
    + MISC_CASES
)


def get_golden_case_by_id(case_id: str) -> Optional[dict]:
    for case in GOLDEN_CASES:
        if case["id"] == case_id:
            return case
    return None


def get_golden_cases_by_kind(kind: str) -> list[dict]:
    return [case for case in GOLDEN_CASES if case["kind"] == kind]


def get_all_golden_cases() -> list[dict]:
    return list(GOLDEN_CASES)
