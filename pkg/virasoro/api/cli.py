import json
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Optional

import click
import structlog

from virasoro.config import get_settings
from virasoro.errors import VirasoroError
from virasoro.models.algebra import GeneratorStatus, HighestWeight, ModuleParams, Report
from virasoro.services.enveloping import format_elem
from virasoro.services.expression_parser import parse_elem, parse_tensor_state
from virasoro.services.scalar_poly import format_rat, integer_roots, mpoly_format, parse_rat
from virasoro.services.tensor_analysis import (
    TensorWindow,
    canonicalize,
    casimir_probe,
    classify_isomorphism,
    exceptional_parameters,
    format_tensor,
    generator_caveats,
    phi_eval,
    phi_poly,
    simplicity,
    tensor_module,
)
from virasoro.services.verma import ff_weights, maximal_submodule_generators, singular_vectors_at_level


logger = structlog.get_logger()

EXIT_OK = 0
EXIT_CAVEAT = 1


class RationalType(click.ParamType):
    """Integer or p/q literal."""
    name = "rational"

    def convert(self, value, param, ctx) -> Fraction:
        if isinstance(value, Fraction):
            return value
        try:
            return parse_rat(str(value))
        except VirasoroError as e:
            self.fail(str(e), param, ctx)


RATIONAL = RationalType()


# =============================================================================
# REPORT RENDERING
# =============================================================================

def _scalar(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _render(key: str, value: Any, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            lines.append(f"{pad}{key}: {{}}")
            return
        lines.append(f"{pad}{key}:")
        for k, v in value.items():
            _render(str(k), v, indent + 1, lines)
    elif isinstance(value, (list, tuple)) and any(isinstance(x, (dict, list, tuple)) for x in value):
        lines.append(f"{pad}{key}:")
        for index, item in enumerate(value):
            _render(f"[{index}]", item, indent + 1, lines)
    elif isinstance(value, (list, tuple)):
        lines.append(f"{pad}{key}: [{', '.join(_scalar(x) for x in value)}]")
    else:
        lines.append(f"{pad}{key}: {_scalar(value)}")


def render_text(report: Report) -> str:
    data = report.model_dump(mode="json")
    timing = data.pop("timing_seconds")
    lines: list[str] = []
    for key, value in data.items():
        _render(key, value, 0, lines)
    lines.append(f"timing_seconds: {timing:.3f}")
    return "\n".join(lines)


def render_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), indent=2)


def _emit(report: Report, output_format: str, exit_code: int = EXIT_OK) -> None:
    click.echo(render_json(report) if output_format == "json" else render_text(report))
    if exit_code:
        sys.exit(exit_code)


def _run(command: str, arguments: dict[str, Any], output_format: str, body: Callable[[], tuple]) -> None:
    """Time ``body`` and emit its (parameters, result, caveats, exit code) as a Report."""
    start = time.perf_counter()
    try:
        parameters, result, caveats, exit_code = body()
    except VirasoroError as e:
        logger.error("Command failed", command=command, error=str(e))
        raise click.UsageError(str(e)) from e
    report = Report(
        command=command,
        arguments={k: _echo(v) for k, v in arguments.items()},
        parameters=parameters,
        result=result,
        caveats=caveats,
        timing_seconds=time.perf_counter() - start,
    )
    _emit(report, output_format, exit_code)


def _echo(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rat(value)
    if isinstance(value, (list, tuple)):
        return [_echo(v) for v in value]
    return value


def _cap(cap: Optional[int]) -> int:
    return cap if cap is not None else get_settings().level_cap


def _params_dump(params: ModuleParams) -> dict[str, Any]:
    return params.model_dump(mode="json")


def _generator_exit(status: GeneratorStatus) -> int:
    return EXIT_CAVEAT if status == GeneratorStatus.UNDETERMINED_BEYOND_CAP else EXIT_OK


def output_format_option(func):
    return click.option(
        "--format", "output_format",
        type=click.Choice(["text", "json"]), default="text", show_default=True,
        help="Report format",
    )(func)


def cap_option(func):
    return click.option("--cap", type=click.IntRange(min=1), default=None,
                        help="Singular vector level cap (default VIRASORO_LEVEL_CAP or 12)")(func)


def weight_options(func):
    func = click.option("--h", "h", type=RATIONAL, required=True, help="Highest weight h")(func)
    return click.option("--c", "c", type=RATIONAL, required=True, help="Central charge c")(func)


def param_options(func):
    func = click.option("--beta", type=RATIONAL, required=True, help="Parameter beta (printed as b)")(func)
    return click.option("--alpha", type=RATIONAL, required=True, help="Parameter alpha (printed as a)")(func)


# =============================================================================
# COMMANDS
# =============================================================================

@click.group()
@click.option("--log-level", default=None, help="Override VIRASORO_LOG_LEVEL")
def cli(log_level: Optional[str]) -> None:
    """Exact computations for Virasoro Verma modules and tensor products V(c,h) (x) V'(alpha,beta)."""
    from virasoro.main import configure_logging

    configure_logging(log_level)


@cli.command()
@weight_options
@click.option("--level", type=click.IntRange(min=1), required=True)
@output_format_option
def singular(c: Fraction, h: Fraction, level: int, output_format: str) -> None:
    """Basis of singular vectors of M(c,h) at one level."""
    def body():
        hw = HighestWeight(c=c, h=h)
        vectors = singular_vectors_at_level(hw, level)
        result = {
            "dimension": len(vectors),
            "vectors": [format_elem(v.to_elem()) for v in vectors],
        }
        return hw.model_dump(mode="json"), result, [], EXIT_OK

    _run("singular", {"c": c, "h": h, "level": level}, output_format, body)


@cli.command()
@weight_options
@cap_option
@output_format_option
def gens(c: Fraction, h: Fraction, cap: Optional[int], output_format: str) -> None:
    """Generators Q1, Q2 of the maximal submodule J(c,h)."""
    def body():
        hw = HighestWeight(c=c, h=h)
        found = maximal_submodule_generators(hw, _cap(cap))
        result = found.model_dump(mode="json", exclude={"hw"})
        caveats = []
        if not found.certified:
            caveats.append(f"no singular vectors up to level {found.scanned_to_level}")
        return hw.model_dump(mode="json"), result, caveats, _generator_exit(found.status)

    _run("gens", {"c": c, "h": h, "cap": _cap(cap)}, output_format, body)


@cli.command()
@param_options
@click.option("--n", "n", type=int, default=None, help="Evaluate at this integer n")
@click.option("--symbolic", is_flag=True, help="Leave alpha and beta symbolic")
@click.option("--elem", required=True, help="Element of U(Vir_-), e.g. '3*d(-2)^2 + 5*d(-4)'")
@output_format_option
def phi(alpha: Fraction, beta: Fraction, n: Optional[int], symbolic: bool, elem: str,
        output_format: str) -> None:
    """The functional phi_n on an element of U(Vir_-)."""
    if n is not None and symbolic:
        raise click.UsageError("--n and --symbolic are mutually exclusive")

    def body():
        params = ModuleParams(alpha=alpha, beta=beta)
        x = parse_elem(elem)
        result: dict[str, Any] = {"elem": format_elem(x)}
        if n is not None:
            result["n"] = n
            result["value"] = format_rat(phi_eval(params, n, x))
        elif symbolic:
            result["polynomial"] = mpoly_format(phi_poly(params, x, symbolic=True).symbolic)
        else:
            poly = phi_poly(params, x).poly
            roots = integer_roots(poly)
            result["polynomial"] = mpoly_format(poly)
            result["integer_roots"] = roots if isinstance(roots, list) else roots.value
        return _params_dump(params), result, [], EXIT_OK

    _run("phi", {"alpha": alpha, "beta": beta, "n": n, "symbolic": symbolic, "elem": elem},
         output_format, body)


def _simplicity_command(command: str, c, h, alpha, beta, cap, output_format, chain: bool) -> None:
    def body():
        hw = HighestWeight(c=c, h=h)
        params = canonicalize(alpha, beta)
        report = simplicity(hw, params, _cap(cap))
        result = report.model_dump(mode="json", exclude={"caveats"})
        if chain:
            result["chain"] = [
                {
                    "quotient": f"W^({'L' if step.previous is None else step.previous})/W^({step.index})",
                    "highest_weight": step.quotient.model_dump(mode="json"),
                }
                for step in report.filtration
            ]
            if report.minimal_submodule_index is not None:
                result["unique_simple_submodule"] = f"W^({report.minimal_submodule_index})"
        exit_code = EXIT_CAVEAT if report.verdict is None else EXIT_OK
        parameters = {"hw": hw.model_dump(mode="json"), "module": _params_dump(params)}
        return parameters, result, report.caveats, exit_code

    _run(command, {"c": c, "h": h, "alpha": alpha, "beta": beta, "cap": _cap(cap)}, output_format, body)


@cli.command("simplicity")
@weight_options
@param_options
@cap_option
@output_format_option
def simplicity_command(c, h, alpha, beta, cap, output_format) -> None:
    """Decide whether V(c,h) (x) V'(alpha,beta) is simple."""
    _simplicity_command("simplicity", c, h, alpha, beta, cap, output_format, chain=False)


@cli.command("filtration")
@weight_options
@param_options
@cap_option
@output_format_option
def filtration_command(c, h, alpha, beta, cap, output_format) -> None:
    """Simplicity verdict with the filtration chain and its highest weight quotients."""
    _simplicity_command("filtration", c, h, alpha, beta, cap, output_format, chain=True)


@cli.command()
@click.option("--gen", "m", type=int, required=True, help="Apply d_m")
@click.option("--state", type=click.File("r"), required=True, help="File with terms like '2*d(-2)@v(3)'")
@weight_options
@param_options
@cap_option
@output_format_option
def act(m: int, state, c, h, alpha, beta, cap, output_format) -> None:
    """Apply d_m to a vector of the tensor product."""
    text = state.read()

    def body():
        hw = HighestWeight(c=c, h=h)
        params = canonicalize(alpha, beta)
        module = tensor_module(hw, params, _cap(cap), window=TensorWindow.from_settings())
        vector = module.from_state(parse_tensor_state(text))
        image = module.apply(m, vector)
        result = {
            "input": format_tensor(vector),
            "output": format_tensor(image),
            "shifted_exponents": sorted(image.exponents()),
        }
        parameters = {"hw": hw.model_dump(mode="json"), "module": _params_dump(params)}
        return parameters, result, generator_caveats(module.gens), _generator_exit(module.gens.status)

    _run("act", {"gen": m, "state": text.strip(), "c": c, "h": h, "alpha": alpha, "beta": beta},
         output_format, body)


@cli.command()
@click.option("--first", nargs=4, type=RATIONAL, required=True, metavar="C H ALPHA BETA")
@click.option("--second", nargs=4, type=RATIONAL, required=True, metavar="C H ALPHA BETA")
@output_format_option
def classify(first, second, output_format) -> None:
    """Whether two tensor products are isomorphic."""
    def body():
        a = (HighestWeight(c=first[0], h=first[1]), ModuleParams(alpha=first[2], beta=first[3]))
        b = (HighestWeight(c=second[0], h=second[1]), ModuleParams(alpha=second[2], beta=second[3]))
        outcome = classify_isomorphism(a, b)
        result = {"isomorphic": outcome.isomorphic}
        parameters = {
            "first": {"hw": outcome.left[0].model_dump(mode="json"), "module": _params_dump(outcome.left[1])},
            "second": {"hw": outcome.right[0].model_dump(mode="json"), "module": _params_dump(outcome.right[1])},
        }
        return parameters, result, [], EXIT_OK

    _run("classify", {"first": list(first), "second": list(second)}, output_format, body)


@cli.command("casimir-probe")
@weight_options
@param_options
@click.option("--j", "j", type=int, default=0, show_default=True)
@click.option("--max-n", type=click.IntRange(min=1), default=5, show_default=True)
@cap_option
@output_format_option
def casimir_probe_command(c, h, alpha, beta, j, max_n, cap, output_format) -> None:
    """Span dimensions of Q_k(u (x) v_j) for k = 1..max-n."""
    def body():
        hw = HighestWeight(c=c, h=h)
        params = canonicalize(alpha, beta)
        probe = casimir_probe(hw, params, j, max_n, _cap(cap))
        result = probe.model_dump(mode="json", exclude={"hw", "params", "caveats"})
        parameters = {"hw": hw.model_dump(mode="json"), "module": _params_dump(params)}
        caveats = probe.caveats + ["a finite probe cannot certify an infinite-dimensional span"]
        return parameters, result, caveats, _generator_exit(probe.status)

    _run("casimir-probe", {"c": c, "h": h, "alpha": alpha, "beta": beta, "j": j, "max_n": max_n},
         output_format, body)


@cli.command()
@weight_options
@cap_option
@output_format_option
def exceptional(c, h, cap, output_format) -> None:
    """Canonical (alpha, beta) for which V(c,h) (x) V'(alpha,beta) is not simple."""
    def body():
        hw = HighestWeight(c=c, h=h)
        found = exceptional_parameters(hw, _cap(cap))
        result = found.model_dump(mode="json", exclude={"hw", "caveats"})
        return hw.model_dump(mode="json"), result, found.caveats, _generator_exit(found.status)

    _run("exceptional", {"c": c, "h": h, "cap": _cap(cap)}, output_format, body)


@cli.command("ff-weights")
@click.option("--p", "p", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@output_format_option
def ff_weights_command(p: int, q: int, m: int, output_format: str) -> None:
    """Highest weight (c, h) attached to (p, q, m)."""
    def body():
        hw = ff_weights(p, q, m)
        return {}, hw.model_dump(mode="json"), ["c formula validated only on the worked examples"], EXIT_OK

    _run("ff-weights", {"p": p, "q": q, "m": m}, output_format, body)


@cli.command()
@output_format_option
def selftest(output_format: str) -> None:
    """Run every golden check."""
    from virasoro.evaluation.selftest import get_selftest_service

    def body():
        summary = get_selftest_service().run_all()
        result = summary.model_dump(mode="json", exclude={"results": {"__all__": {"seconds"}}})
        return {}, result, [], EXIT_OK if summary.failed == 0 else EXIT_CAVEAT

    _run("selftest", {}, output_format, body)
