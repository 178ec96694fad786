"""
Command line tests: every subcommand through click's CliRunner, exit codes
and report determinism.
"""

import json

import pytest
from click.testing import CliRunner

from virasoro.api.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def invoke_json(runner: CliRunner, args: list[str]) -> dict:
    result = runner.invoke(cli, args + ["--format", "json"])
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


class TestCommands:
    def test_singular(self, runner):
        result = runner.invoke(cli, ["singular", "--c", "1", "--h", "-1/4", "--level", "2"])
        assert result.exit_code == 0
        assert "d(-1)^2 + d(-2)" in result.output
        assert result.stdout.rstrip().splitlines()[-1].startswith("timing_seconds:")

    def test_gens(self, runner):
        data = invoke_json(runner, ["gens", "--c", "0", "--h", "0", "--cap", "4"])
        assert data["result"]["status"] == "two_generators"
        assert data["result"]["q1"] == "d(-1)"
        assert data["result"]["levels"] == [1, 2]

    def test_gens_undetermined_exits_one(self, runner):
        result = runner.invoke(cli, ["gens", "--c", "1/3", "--h", "2/7", "--cap", "2"])
        assert result.exit_code == 1
        assert "undetermined_beyond_cap" in result.output

    def test_phi_symbolic(self, runner):
        result = runner.invoke(cli, ["phi", "--alpha", "0", "--beta", "0", "--symbolic", "--elem", "d(-1)"])
        assert result.exit_code == 0
        assert "polynomial: -n - a + b - 1" in result.output

    def test_phi_value_and_roots(self, runner):
        data = invoke_json(runner, ["phi", "--alpha", "0", "--beta", "0", "--n", "1", "--elem", "d(-1)^2 + d(-2)"])
        assert data["result"]["value"] == "3"
        data = invoke_json(runner, ["phi", "--alpha", "0", "--beta", "-3", "--elem", "d(-1)^2 + d(-2)"])
        assert data["result"]["integer_roots"] == [-6, -2]

    def test_phi_n_and_symbolic_conflict(self, runner):
        result = runner.invoke(cli, ["phi", "--alpha", "0", "--beta", "0", "--n", "1", "--symbolic",
                                     "--elem", "d(-1)"])
        assert result.exit_code == 2

    def test_simplicity(self, runner):
        result = runner.invoke(cli, ["simplicity", "--c", "0", "--h", "0", "--alpha", "1/3", "--beta", "5",
                                     "--cap", "4"])
        assert result.exit_code == 0
        assert "verdict: simple" in result.output

    def test_simplicity_withheld_exits_one(self, runner):
        result = runner.invoke(cli, ["simplicity", "--c", "1/3", "--h", "2/7", "--alpha", "1/2", "--beta", "3",
                                     "--cap", "2"])
        assert result.exit_code == 1

    def test_filtration_chain(self, runner):
        data = invoke_json(runner, ["filtration", "--c", "-22/5", "--h", "0", "--alpha", "1/5", "--beta", "6/5",
                                    "--cap", "6"])
        assert data["result"]["verdict"] == "not_simple"
        assert data["result"]["chain"] == [
            {"quotient": "W^(L)/W^(0)", "highest_weight": {"c": "-22/5", "h": "1/5"}}
        ]
        assert data["result"]["unique_simple_submodule"] == "W^(0)"

    def test_canonical_parameters_are_reported(self, runner):
        data = invoke_json(runner, ["simplicity", "--c", "1", "--h", "0", "--alpha", "5/2", "--beta", "1",
                                    "--cap", "4"])
        assert data["parameters"]["module"] == {"alpha": "1/2", "beta": "0", "canonical": True}
        assert data["arguments"]["alpha"] == "5/2"

    def test_act_reads_state_file(self, runner, tmp_path):
        state = tmp_path / "state.txt"
        state.write_text("1@v(3)\n")
        data = invoke_json(runner, ["act", "--gen", "2", "--state", str(state), "--c", "0", "--h", "0",
                                    "--alpha", "1/4", "--beta", "2", "--cap", "4"])
        assert data["result"]["output"] == "29/4@v(5)"
        assert data["result"]["shifted_exponents"] == [5]

    def test_act_reduces_modulo_singular_vector(self, runner, tmp_path):
        state = tmp_path / "state.txt"
        state.write_text("1@v(0)\n")
        data = invoke_json(runner, ["act", "--gen", "-2", "--state", str(state), "--c", "1", "--h", "-1/4",
                                    "--alpha", "1/2", "--beta", "0", "--cap", "4"])
        assert data["result"]["output"] == "1/2@v(-2) - d(-1)^2@v(0)"

    def test_act_without_certified_generators_exits_one(self, runner, tmp_path):
        state = tmp_path / "state.txt"
        state.write_text("1@v(0)\n")
        result = runner.invoke(cli, ["act", "--gen", "-2", "--state", str(state), "--c", "1", "--h", "-1/4",
                                     "--alpha", "1/2", "--beta", "0", "--cap", "1", "--format", "json"])
        assert result.exit_code == 1
        data = json.loads(result.stdout)
        assert any("undetermined" in caveat for caveat in data["caveats"])

    def test_classify(self, runner):
        data = invoke_json(runner, ["classify", "--first", "1", "0", "5/2", "1", "--second", "1", "0", "1/2", "0"])
        assert data["result"]["isomorphic"] is True

    def test_casimir_probe(self, runner):
        data = invoke_json(runner, ["casimir-probe", "--c", "1", "--h", "0", "--alpha", "1/2", "--beta", "0",
                                    "--cap", "4"])
        assert data["result"]["dimensions"] == [0, 1, 2, 3, 4]
        assert data["caveats"]

    def test_casimir_probe_without_certified_generators_exits_one(self, runner):
        result = runner.invoke(cli, ["casimir-probe", "--c", "1/3", "--h", "2/7", "--alpha", "1/2", "--beta", "3",
                                     "--max-n", "2", "--cap", "2", "--format", "json"])
        assert result.exit_code == 1
        data = json.loads(result.stdout)
        assert data["result"]["status"] == "undetermined_beyond_cap"
        assert any("undetermined" in caveat for caveat in data["caveats"])

    def test_exceptional(self, runner):
        data = invoke_json(runner, ["exceptional", "--c", "1/2", "--h", "-1/2", "--cap", "6"])
        points = {(p["params"]["alpha"], p["params"]["beta"]) for p in data["result"]["points"]}
        assert points == {("1/2", "1/2"), ("7/16", "15/16")}

    def test_ff_weights(self, runner):
        data = invoke_json(runner, ["ff-weights", "--p", "2", "--q", "-5", "--m", "3"])
        assert data["result"] == {"c": "-22/5", "h": "0"}

    def test_selftest(self, runner):
        result = runner.invoke(cli, ["selftest"])
        assert result.exit_code == 0, result.output
        assert "failed: 0" in result.output


class TestErrors:
    def test_bad_rational_names_token(self, runner):
        result = runner.invoke(cli, ["phi", "--alpha", "1/x", "--beta", "0", "--elem", "d(-1)"])
        assert result.exit_code == 2
        assert "'x'" in result.output

    def test_bad_element_names_token(self, runner):
        result = runner.invoke(cli, ["phi", "--alpha", "0", "--beta", "0", "--elem", "d(1)"])
        assert result.exit_code == 2
        assert "'1'" in result.output

    def test_unknown_command(self, runner):
        assert runner.invoke(cli, ["nope"]).exit_code == 2


class TestDeterminism:
    @pytest.mark.parametrize("args", [
        ["gens", "--c", "-22/5", "--h", "0", "--cap", "6"],
        ["filtration", "--c", "1/2", "--h", "0", "--alpha", "15/16", "--beta", "15/16", "--cap", "6"],
    ])
    def test_payload_is_byte_stable(self, runner, args):
        first = invoke_json(runner, args)
        second = invoke_json(runner, args)
        first.pop("timing_seconds")
        second.pop("timing_seconds")
        assert json.dumps(first) == json.dumps(second)

    def test_text_payload_is_stable(self, runner):
        args = ["singular", "--c", "1", "--h", "-1", "--level", "3"]
        outputs = [runner.invoke(cli, args).stdout.rstrip().splitlines()[:-1] for _ in range(2)]
        assert outputs[0] == outputs[1]


class TestLogging:
    def test_warnings_go_to_stderr(self, runner):
        result = runner.invoke(cli, ["simplicity", "--c", "1/3", "--h", "2/7", "--alpha", "1/2", "--beta", "3",
                                     "--cap", "2", "--format", "json"])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["result"]["verdict"] is None
        assert "Simplicity verdict withheld" in result.stderr
