"""
Tensor product tests: the phi functional, simplicity decisions, the shifted
tensor action and the Casimir probe.
"""

import random
from fractions import Fraction

import pytest

from virasoro.config import reset_settings
from virasoro.errors import InvalidParameterError, WindowEscapeError
from virasoro.evaluation.golden_cases import EXCEPTIONAL_CASES
from virasoro.models.algebra import (
    GeneratorStatus,
    HighestWeight,
    MaximalSubmoduleGens,
    ModuleParams,
    Verdict,
)
from virasoro.services.enveloping import EnvElem, left_multiply, multiply, normal_order, pbw_basis
from virasoro.services.expression_parser import parse_elem
from virasoro.services.scalar_poly import MPoly, mpoly_eval, parse_rat
from virasoro.services.tensor_analysis import (
    TensorWindow,
    canonicalize,
    casimir_apply,
    casimir_probe,
    classify_isomorphism,
    exceptional_parameters,
    format_tensor,
    intermediate_simple,
    phi_eval,
    phi_in_s,
    phi_poly,
    phi_set,
    phi_symbolic,
    phi_word,
    simplicity,
    tau_eval,
    tensor_apply,
    tensor_module,
)
from virasoro.services.verma import VermaVector, clear_generator_cache, maximal_submodule_generators


SEED_BLOCKS = [0, 1, 2, 3]
CASES_PER_BLOCK = 50

n = MPoly.var("n")
a = MPoly.var("a")
b = MPoly.var("b")


def hw(c, h) -> HighestWeight:
    return HighestWeight(c=Fraction(c), h=Fraction(h))


def params(alpha, beta) -> ModuleParams:
    return ModuleParams(alpha=Fraction(alpha), beta=Fraction(beta))


def random_rat(rng: random.Random, bound: int = 7) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_monomial(rng: random.Random, max_level: int = 5) -> EnvElem:
    return EnvElem({rng.choice(pbw_basis(rng.randint(0, max_level))): 1})


@pytest.fixture
def fresh_settings():
    reset_settings()
    clear_generator_cache()
    yield
    reset_settings()
    clear_generator_cache()


# =============================================================================
# PHI FUNCTIONAL
# =============================================================================

class TestPhi:
    def test_unit_is_one(self):
        assert phi_eval(params(Fraction(1, 3), 7), -4, EnvElem.one()) == 1
        assert tau_eval(5, params(0, 0), VermaVector.highest(hw(1, 0))) == 1

    def test_examples(self):
        assert phi_eval(params(Fraction(1, 2), Fraction(1, 2)), -1, parse_elem("d(-1)")) == 0
        assert phi_eval(params(0, 0), 1, parse_elem("d(-1)^2 + d(-2)")) == 3
        v = VermaVector.from_elem(hw(1, 0), parse_elem("d(-1)"))
        assert tau_eval(-1, params(Fraction(1, 2), Fraction(1, 2)), v) == 0

    def test_symbolic_forms(self):
        assert phi_symbolic(parse_elem("d(-1)")) == b - a - n - 1
        q = parse_elem("3*d(-1)^2 + 4*d(-2)")
        x = n + a - b + 2
        assert phi_symbolic(q) == x * (x - 1) * 3 - (x - b) * 4

    def test_level_three_factor(self):
        q = parse_elem("d(-1)^3 + 4*d(-2)*d(-1) + 2*d(-3)")
        cofactor = n ** 2 + n * (a - b + 1) * 2 + (a - b) ** 2 + a * 2 + b * 2 - 3
        assert phi_symbolic(q) == (b - a - n) * cofactor

    def test_numeric_polynomial_matches_evaluation(self):
        q = parse_elem("d(-1)^2 + d(-2)")
        poly = phi_poly(params(0, -3), q, symbolic=True)
        assert poly.symbolic == phi_symbolic(q)
        assert poly.poly.degree("n") == 2
        for k in range(-8, 8):
            assert mpoly_eval(poly.poly, {"n": k}) == phi_eval(params(0, -3), k, q)

    @pytest.mark.parametrize("seed", SEED_BLOCKS)
    def test_commutator_identity(self, seed):
        rng = random.Random(seed)
        for _ in range(CASES_PER_BLOCK):
            i, j = rng.randint(1, 5), rng.randint(1, 5)
            p = random_monomial(rng)
            prm = params(random_rat(rng), random_rat(rng))
            k = rng.randint(-6, 6)
            lhs = phi_eval(prm, k, left_multiply(i, left_multiply(j, p)) - left_multiply(j, left_multiply(i, p)))
            assert lhs == (i - j) * phi_eval(prm, k, left_multiply(i + j, p))

    @pytest.mark.parametrize("seed", SEED_BLOCKS)
    def test_recursion_on_unordered_words(self, seed):
        rng = random.Random(10 + seed)
        for _ in range(CASES_PER_BLOCK):
            word = [rng.randint(1, 4) for _ in range(rng.randint(1, 4))]
            prm = params(random_rat(rng), random_rat(rng))
            k = rng.randint(-6, 6)
            assert phi_word(prm, k, word) == phi_eval(prm, k, normal_order(word))

    @pytest.mark.parametrize("seed", SEED_BLOCKS)
    def test_roots_propagate_to_left_multiples(self, seed):
        rng = random.Random(20 + seed)
        q = parse_elem("d(-1)^2 + d(-2)")
        prm = params(0, -3)
        for _ in range(CASES_PER_BLOCK):
            x = random_monomial(rng, max_level=4)
            for root in (-6, -2):
                assert phi_eval(prm, root, multiply(x, q)) == 0

    @pytest.mark.parametrize("seed", SEED_BLOCKS)
    def test_beta_zero_and_one_ratio(self, seed):
        rng = random.Random(30 + seed)
        for _ in range(CASES_PER_BLOCK):
            alpha = random_rat(rng) or Fraction(1, 2)
            level = rng.randint(0, 5)
            p = EnvElem({mono: random_rat(rng) for mono in pbw_basis(level)})
            zero = phi_poly(params(alpha, 0), p).poly
            one = phi_poly(params(alpha, 1), p).poly
            assert (n + alpha) * zero == (n + alpha + level) * one


class TestPhiSet:
    def test_trivial_central_charge_always_simple(self, fresh_settings):
        for alpha, beta in [(Fraction(1, 3), 5), (0, 0), (Fraction(1, 2), Fraction(1, 2))]:
            result = phi_set(hw(0, 0), canonicalize(alpha, beta), cap=4)
            assert result.is_empty

    def test_single_generator_root(self, fresh_settings):
        result = phi_set(hw(1, 0), canonicalize(Fraction(1, 2), Fraction(1, 2)), cap=4)
        assert result.roots == [-1]
        assert result.status is GeneratorStatus.SINGLE_GENERATOR
        assert result.caveats

    def test_c_one_line_of_exceptional_parameters(self, fresh_settings):
        rng = random.Random(99)
        for _ in range(30):
            alpha = Fraction(rng.randint(0, 9), 10)
            k = rng.randint(-4, 4)
            prm = canonicalize(alpha, alpha + k)
            result = phi_set(hw(1, 0), prm, cap=4)
            assert result.roots == [prm.beta - prm.alpha - 1]
            off_line = canonicalize(alpha, alpha + k + Fraction(1, 3))
            assert phi_set(hw(1, 0), off_line, cap=4).is_empty

    def test_primed_zero_flag(self, fresh_settings):
        result = phi_set(hw(0, 0), canonicalize(0, 1), cap=4)
        assert result.excluded_zero

    @pytest.mark.parametrize("seed", SEED_BLOCKS)
    def test_invariant_under_generator_representative(self, seed, fresh_settings):
        rng = random.Random(seed)
        cases = [case for case in EXCEPTIONAL_CASES if case["expected"]]
        for index in range(CASES_PER_BLOCK):
            case = cases[index % len(cases)]
            weight = hw(parse_rat(case["c"]), parse_rat(case["h"]))
            gens = maximal_submodule_generators(weight, case["cap"])
            alpha, beta, roots = rng.choice(case["expected"])
            prm = canonicalize(parse_rat(alpha), parse_rat(beta))
            r = EnvElem.zero()
            for _ in range(rng.randint(1, 3)):
                r = r + EnvElem({rng.choice(pbw_basis(rng.randint(1, 3))): random_rat(rng)})
            shifted = MaximalSubmoduleGens(
                hw=weight,
                q1=gens.q1,
                q2=gens.q2 + multiply(r, gens.q1),
                levels=gens.levels,
                status=gens.status,
                scanned_to_level=gens.scanned_to_level,
            )
            assert phi_set(weight, prm, gens=shifted).roots == phi_set(weight, prm, gens=gens).roots == roots

    def test_verma_simple_gives_all_integers(self, fresh_settings, monkeypatch):
        monkeypatch.setenv("VIRASORO_ASSUME_SIMPLE_BEYOND_CAP", "true")
        reset_settings()
        report = simplicity(hw(Fraction(1, 3), Fraction(2, 7)), canonicalize(Fraction(1, 2), 3), cap=2)
        assert report.phi.all_integers
        assert report.verdict is Verdict.NOT_SIMPLE
        assert report.infinite_filtration

    def test_undetermined_withholds_verdict(self, fresh_settings):
        report = simplicity(hw(Fraction(1, 3), Fraction(2, 7)), canonicalize(Fraction(1, 2), 3), cap=2)
        assert report.verdict is None
        assert report.phi.status is GeneratorStatus.UNDETERMINED_BEYOND_CAP
        assert any("withheld" in caveat for caveat in report.caveats)


class TestSimplicity:
    @pytest.mark.parametrize("c,h,alpha,beta,cap,root,quotient_h", [
        (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), 6, 0, 0),
        (Fraction(1, 2), 0, Fraction(15, 16), Fraction(15, 16), 6, -1, Fraction(-1, 16)),
        (Fraction(-22, 5), 0, Fraction(1, 5), Fraction(6, 5), 6, 0, Fraction(1, 5)),
    ])
    def test_quotient_weights(self, c, h, alpha, beta, cap, root, quotient_h, fresh_settings):
        report = simplicity(hw(c, h), canonicalize(alpha, beta), cap=cap)
        assert report.verdict is Verdict.NOT_SIMPLE
        assert report.phi.roots == [root]
        assert report.minimal_submodule_index == root
        assert [step.quotient for step in report.filtration] == [hw(c, quotient_h)]
        assert report.filtration[0].previous is None

    def test_simple_case(self, fresh_settings):
        report = simplicity(hw(0, 0), canonicalize(Fraction(1, 3), 5), cap=4)
        assert report.verdict is Verdict.SIMPLE
        assert report.filtration == []

    def test_exceptional_curve_for_single_generator(self, fresh_settings):
        found = exceptional_parameters(hw(1, 0), 4)
        assert found.status is GeneratorStatus.SINGLE_GENERATOR
        assert found.curve == phi_in_s(parse_elem("d(-1)"))
        assert found.points == []

    def test_exceptional_points(self, fresh_settings):
        found = exceptional_parameters(hw(Fraction(-22, 5), 0), 6)
        points = [(p.params.alpha, p.params.beta, p.phi_roots) for p in found.points]
        assert points == [(Fraction(1, 5), Fraction(6, 5), [0])]


# =============================================================================
# PARAMETERS
# =============================================================================

class TestParameters:
    @pytest.mark.parametrize("alpha,beta,expected", [
        (Fraction(5, 2), 0, (Fraction(1, 2), 0)),
        (Fraction(1, 2), 1, (Fraction(1, 2), 0)),
        (0, 1, (0, 0)),
        (Fraction(-1, 3), 4, (Fraction(2, 3), 4)),
    ])
    def test_canonicalize(self, alpha, beta, expected):
        prm = canonicalize(alpha, beta)
        assert (prm.alpha, prm.beta) == expected
        assert prm.canonical

    def test_intermediate_simple(self):
        assert intermediate_simple(canonicalize(Fraction(1, 2), 0))
        assert not intermediate_simple(canonicalize(0, 0))
        assert not intermediate_simple(canonicalize(3, 1))
        assert intermediate_simple(canonicalize(0, Fraction(1, 2)))

    def test_classify_examples(self):
        base = (hw(1, 0), params(Fraction(1, 2), 0))
        assert classify_isomorphism(base, base).isomorphic
        assert not classify_isomorphism(base, (hw(1, 0), params(Fraction(1, 2), Fraction(1, 2)))).isomorphic
        assert classify_isomorphism((hw(1, 0), params(Fraction(5, 2), 1)), base).isomorphic

    def test_classify_randomized(self):
        rng = random.Random(2024)
        for _ in range(50):
            weight = hw(random_rat(rng), random_rat(rng))
            alpha, beta = random_rat(rng), rng.choice([0, 1, random_rat(rng)])
            shift = rng.randint(-3, 3)
            twin_beta = {0: 1, 1: 0}.get(beta, beta)
            twin = (weight, params(alpha + shift, twin_beta))
            assert classify_isomorphism((weight, params(alpha, beta)), twin).isomorphic
            other_beta = Fraction(beta) + Fraction(1, 5)
            assert not classify_isomorphism((weight, params(alpha, beta)), (weight, params(alpha, other_beta))).isomorphic
            other_h = hw(weight.c, weight.h + 1)
            assert not classify_isomorphism((weight, params(alpha, beta)), (other_h, params(alpha, beta))).isomorphic


# =============================================================================
# TENSOR ACTION
# =============================================================================

MODULES = [
    (hw(1, 0), 4),
    (hw(0, 0), 4),
    (hw(Fraction(1, 2), Fraction(-1, 2)), 3),
    (hw(Fraction(2, 3), Fraction(1, 5)), 3),
]


class TestTensorAction:
    def test_raising_on_highest(self, fresh_settings):
        module = tensor_module(hw(Fraction(3, 7), 2), params(Fraction(1, 4), 2), cap=2)
        result = tensor_apply(2, module.highest(3))
        assert result == module.highest(5).scale(Fraction(29, 4))

    def test_primed_zero_drops_v0(self, fresh_settings):
        module = tensor_module(hw(1, 0), canonicalize(0, 1), cap=4)
        assert module.highest(0).is_zero()
        assert tensor_apply(-1, module.highest(0)).is_zero()
        assert tensor_apply(-1, module.highest(1)).is_zero()
        assert tensor_apply(-2, module.highest(2)) == module.basis_vector((2,), 2)

    def test_lowering_reduces_modulo_j(self, fresh_settings):
        module = tensor_module(hw(1, 0), params(Fraction(1, 2), 0), cap=4)
        result = tensor_apply(-1, module.highest(0))
        assert result == module.highest(-1).scale(Fraction(1, 2))
        assert format_tensor(result) == "1/2@v(-1)"

    def test_state_printing(self, fresh_settings):
        module = tensor_module(hw(1, 0), params(Fraction(1, 2), 0), cap=4)
        v = module.from_state([(EnvElem.one(), 3), (parse_elem("d(-2)").scale(Fraction(-1, 2)), 2)])
        assert format_tensor(v) == "-1/2*d(-2)@v(2) + 1@v(3)"

    @pytest.mark.parametrize("index", range(len(MODULES)))
    def test_zero_mode_is_shifted_exponent(self, index, fresh_settings):
        weight, cap = MODULES[index]
        prm = canonicalize(Fraction(1, 3), Fraction(3, 2))
        module = tensor_module(weight, prm, cap=cap)
        for level in range(0, 4):
            for mono in pbw_basis(level):
                for j in range(-2, 3):
                    v = module.basis_vector(mono, j)
                    assert module.apply(0, v) == v.scale(prm.alpha + weight.h + j - level)

    @pytest.mark.parametrize("seed", SEED_BLOCKS)
    def test_module_axiom_and_grading(self, seed, fresh_settings):
        rng = random.Random(40 + seed)
        window = TensorWindow(max_level=8, min_exponent=-30, max_exponent=30)
        for _ in range(CASES_PER_BLOCK):
            weight, cap = rng.choice(MODULES)
            prm = rng.choice([canonicalize(random_rat(rng), random_rat(rng)), canonicalize(0, 0)])
            module = tensor_module(weight, prm, cap=cap, window=window)
            level, j = rng.randint(0, 2), rng.randint(-3, 3)
            v = module.basis_vector(rng.choice(pbw_basis(level)), j)
            v = v + module.basis_vector(rng.choice(pbw_basis(level)), j).scale(random_rat(rng))
            p, q = rng.randint(-3, 3), rng.randint(-3, 3)
            lhs = module.apply(p, module.apply(q, v)) - module.apply(q, module.apply(p, v))
            rhs = module.apply(p + q, v).scale(q - p)
            if p == -q:
                rhs = rhs + module.central(v).scale(Fraction(p ** 3 - p, 12))
            assert lhs == rhs
            if not v.is_zero():
                assert module.apply(p, v).exponents() <= {j - level + p}

    def test_window_escape_is_reported(self, fresh_settings):
        module = tensor_module(hw(1, 0), params(Fraction(1, 2), 0), cap=4, window=TensorWindow(1, -5, 5))
        with pytest.raises(WindowEscapeError) as info:
            tensor_apply(-2, module.highest(0))
        assert info.value.level == 2

    def test_kernel_of_tau_at_phi_root(self, fresh_settings):
        weight = hw(Fraction(-22, 5), 0)
        prm = canonicalize(Fraction(1, 5), Fraction(6, 5))
        module = tensor_module(weight, prm, cap=6)
        root = 0
        for i in range(root + 1, root + 5):
            for mono in pbw_basis(i - root):
                x = module.apply_word(mono, module.highest(i))
                component = x.component(root)
                assert component == x.terms
                elem = EnvElem({m: c for (m, _j), c in component.items()})
                assert phi_eval(prm, root, elem) == 0


class TestCasimir:
    def test_zero_vector(self, fresh_settings):
        module = tensor_module(hw(1, 0), params(Fraction(1, 2), 0), cap=4)
        assert casimir_apply(3, module.zero()).is_zero()

    def test_values_on_highest(self, fresh_settings):
        module = tensor_module(hw(1, 0), params(Fraction(1, 2), 0), cap=4)
        start = module.highest(0)
        assert casimir_apply(1, start).is_zero()
        assert format_tensor(casimir_apply(2, start)) == "-1/2*d(-2)@v(2)"

    def test_index_validation(self, fresh_settings):
        module = tensor_module(hw(1, 0), params(Fraction(1, 2), 0), cap=4)
        with pytest.raises(InvalidParameterError):
            casimir_apply(0, module.highest(0))

    def test_probe_dimensions(self, fresh_settings):
        probe = casimir_probe(hw(1, 0), params(Fraction(1, 2), 0), 0, 5, cap=4)
        assert probe.dimensions == [0, 1, 2, 3, 4]
        assert probe.non_decreasing
        assert probe.strictly_increases

    def test_probe_rejects_vanishing_start(self, fresh_settings):
        with pytest.raises(InvalidParameterError):
            casimir_probe(hw(1, 0), canonicalize(0, 0), 0, 3, cap=4)
