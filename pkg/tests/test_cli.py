"""End-to-end command line checks through click's test runner."""

import json

import pytest
from click.testing import CliRunner

from sumsetlab.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_set(path, pairs):
    path.write_text(json.dumps({"intervals": [[str(lo), str(hi)] for lo, hi in pairs]}))
    return str(path)


@pytest.fixture
def worked_files(tmp_path):
    a = write_set(tmp_path / "a.json", [("0", "9/40"), ("37/40", "11/10")])
    b = write_set(tmp_path / "b.json", [("0", "1/8"), ("37/40", "1")])
    return a, b


class TestMeasure:
    def test_json(self, runner, tmp_path):
        path = write_set(tmp_path / "s.json", [("0", "1/2"), ("1", "1")])
        result = runner.invoke(main, ["measure", path])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["components"] == 2
        assert obj["measure"]["fraction"] == "1/2"
        assert obj["diameter"]["fraction"] == "1"

    def test_csv(self, runner, tmp_path):
        path = write_set(tmp_path / "s.json", [("0", "1/2")])
        result = runner.invoke(main, ["measure", path, "--out", "csv"])
        assert result.exit_code == 0
        header, row = result.output.strip().splitlines()
        assert "measure" in header.split(",")
        assert "1/2" in row.split(",")

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["measure", "nope.json"])
        assert result.exit_code == 2

    def test_malformed_file(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json at all")
        result = runner.invoke(main, ["measure", str(path)])
        assert result.exit_code == 1
        assert "cannot read interval set" in result.output


class TestSumset:
    def test_worked_pair(self, runner, worked_files):
        a, b = worked_files
        result = runner.invoke(main, ["sumset", a, b])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["measure_sum"]["fraction"] == "9/10"
        assert obj["superadditive"] is True

    def test_empty_rejected(self, runner, tmp_path):
        a = write_set(tmp_path / "a.json", [("0", "1")])
        e = tmp_path / "e.json"
        e.write_text('{"intervals": []}')
        result = runner.invoke(main, ["sumset", a, str(e)])
        assert result.exit_code == 1


class TestDecompose:
    def test_strict_depth(self, runner, tmp_path):
        path = write_set(tmp_path / "s.json", [("0", "3")])
        result = runner.invoke(main, ["decompose", path, "--period", "3/2"])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["k_max"] == 3
        assert obj["residual"]["fraction"] == "0"

    def test_bad_period(self, runner, tmp_path):
        path = write_set(tmp_path / "s.json", [("0", "1")])
        result = runner.invoke(main, ["decompose", path, "--period", "0"])
        assert result.exit_code == 1


class TestCheckRuzsa:
    def test_worked_pair_is_tight(self, runner, worked_files):
        a, b = worked_files
        result = runner.invoke(main, ["check-ruzsa", a, b])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["ruzsa"]["holds"] and obj["ruzsa"]["tight"]
        assert obj["dichotomy"]["holds"]
        assert obj["refined"]["holds"] is not False

    def test_point_b(self, runner, tmp_path):
        a = write_set(tmp_path / "a.json", [("0", "1")])
        b = write_set(tmp_path / "b.json", [("2", "2")])
        result = runner.invoke(main, ["check-ruzsa", a, b])
        assert result.exit_code == 1
        assert "cannot form the bound" in result.output or result.output


class TestCheckStructure:
    def test_worked_pass(self, runner, worked_files):
        a, b = worked_files
        result = runner.invoke(main, ["check-structure", a, b])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["overall"] == "pass"
        assert obj["epsilon"]["fraction"] == "0"

    def test_fat_pair_out_of_scope(self, runner, tmp_path):
        a = write_set(tmp_path / "a.json", [("0", "1")])
        b = write_set(tmp_path / "b.json", [("0", "1")])
        result = runner.invoke(main, ["check-structure", a, b])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["overall"] == "out_of_scope"

    def test_explore_flag(self, runner, tmp_path):
        a = write_set(tmp_path / "a.json", [("0", "1")])
        b = write_set(tmp_path / "b.json", [("0", "1")])
        result = runner.invoke(main, ["check-structure", a, b, "--explore"])
        assert result.exit_code == 0
        assert json.loads(result.output)["overall"] == "explored"

    def test_degenerate_pair_is_an_error(self, runner, tmp_path):
        a = write_set(tmp_path / "a.json", [("0", "1")])
        b = write_set(tmp_path / "b.json", [("1", "1")])
        result = runner.invoke(main, ["check-structure", a, b])
        assert result.exit_code == 1


class TestGenerateExtremal:
    def test_zero_residual(self, runner):
        result = runner.invoke(
            main,
            [
                "generate-extremal",
                "--k", "3",
                "--delta", "1/3",
                "--b", "1/10",
                "--eps", "1/100",
                "--eps-prime", "1/200",
                "--i", "2",
            ],
        )
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["excess_residual"]["fraction"] == "0"
        assert obj["measure_b"]["fraction"] == "1/10"

    def test_rejects_oversized_share(self, runner):
        result = runner.invoke(
            main,
            ["generate-extremal", "--k", "2", "--delta", "1/2", "--b", "1/5",
             "--eps", "1/100", "--eps-prime", "1/50"],
        )
        assert result.exit_code == 1


class TestCorpusCommand:
    def test_equality_corpus(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"seed": 7, "mode": "equality"}))
        result = runner.invoke(main, ["corpus", "--spec", str(spec), "-n", "3"])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["schema"] == "corpus-result/1"
        assert obj["aggregates"]["overall"] == {"pass": 3}

    def test_csv_output(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"seed": 7, "mode": "equality"}))
        result = runner.invoke(main, ["corpus", "--spec", str(spec), "-n", "2", "--out", "csv"])
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 3

    def test_bad_spec(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"seed": 1, "mode": "chaotic"}))
        result = runner.invoke(main, ["corpus", "--spec", str(spec)])
        assert result.exit_code == 1


class TestSweepCommand:
    def test_rows(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"seed": 21, "epsilon_grid": ["0", "1/1000"]}))
        result = runner.invoke(main, ["sweep", "--spec", str(spec)])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert obj["schema"] == "sweep-result/1"
        assert len(obj["rows"]) == 4

    def test_missing_grid(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"seed": 21}))
        result = runner.invoke(main, ["sweep", "--spec", str(spec)])
        assert result.exit_code == 1
        assert "epsilon_grid" in result.output


class TestLogging:
    def test_log_env_is_accepted(self, runner, tmp_path):
        path = write_set(tmp_path / "s.json", [("0", "1")])
        result = runner.invoke(main, ["measure", path], env={"SUMSET_LOG": "debug"})
        assert result.exit_code == 0
