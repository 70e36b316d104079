"""Feature: Running Experiments with Isofoliate"""

import json
from pathlib import Path

import pytest
from assertpy import assert_that
from click import Command
from click.testing import CliRunner

from isofoliate.cli import main


@pytest.fixture
def runner() -> CliRunner:
    """Fixture providing a Click CLI test runner."""
    return CliRunner()


def find(name: str) -> str:
    """Path to a configuration fixture."""
    return str(Path(__file__).parent / "fixtures" / name)


def summary(directory: Path) -> dict:
    return json.loads((directory / "summary.json").read_text())


class TestHelp:
    """Scenario: Asking for help"""

    def test_cli_help(self, runner: CliRunner) -> None:
        result = runner.invoke(main, args=["--help"])

        assert_that(result).has_exit_code(0)
        assert_that(result.output).contains("Usage: main [OPTIONS] [COMMAND]")
        assert_that(result.output).contains("Run an isofoliate experiment or the acceptance suite.")
        assert_that(result.output).contains("bray-chart", "--threads")


class TestValidRuns:
    """Scenario Outline: Successful experiments"""

    def test_bray_chart_from_yaml(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["--config", find("bray_chart.yml"), "--out", str(tmp_path)])

        assert_that(result).has_exit_code(0)
        assert_that(result.output).contains("PASS", "bray-chart: all")
        chart = summary(tmp_path)["reports"]["chart"]
        assert_that(chart["alpha"]).is_close_to((0.99 / 1.01) ** (2.0 / 3.0), 1e-10)
        assert_that(chart["alpha"]).is_close_to(0.98674, 1e-4)
        assert_that((tmp_path / "chart.csv").read_text()).starts_with("s,rho,u\n")
        assert_that(summary(tmp_path)["reports"]).contains_key("gain_1.25", "gain_2", "expansion")

    def test_positional_command_overrides_file(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(
            main,
            args=["hawking-profile", "--config", find("bray_chart.yml"), "--out", str(tmp_path)],
        )

        assert_that(result).has_exit_code(0)
        assert_that(summary(tmp_path)["command"]).is_equal_to("hawking-profile")

    def test_subcommand_option(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-s", "hawking-profile", "-o", str(tmp_path)])

        assert_that(result).has_exit_code(0)
        assert_that(tmp_path / "hawking.csv").exists()

    def test_hawking_profile_from_flat_file(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-c", find("hawking.cfg"), "-o", str(tmp_path)])

        assert_that(result).has_exit_code(0)
        data = summary(tmp_path)
        assert_that(data["passed"]).is_true()
        assert_that(data["reports"]["schwarzschild"]["masses"]).is_length(4)
        assert_that((tmp_path / "hawking.dat").read_text()).starts_with("# r mass")

    def test_verbose(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["--verbose", "-c", find("hawking.cfg"), "-o", str(tmp_path)])

        assert_that(result).has_exit_code(0)
        assert_that(result.output).contains("Parsing configuration:", "hawking.cfg")
        assert_that(result.output).contains("Running hawking-profile into", "Wrote ", "summary.json")
        assert_that(result.output).contains("schwarzschild profile")

    def test_threads_option(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-c", find("hawking.cfg"), "-o", str(tmp_path), "-j", "2"])

        assert_that(result).has_exit_code(0)

    def test_regime_warning(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-c", find("inside_horizon.yml"), "-o", str(tmp_path)])

        assert_that(result.output).contains("surface.radius = 0.8: radius below 20")


class TestErrorCases:
    """Scenario Outline: Error Cases"""

    def test_invalid_configuration(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-c", find("invalid.yml"), "-o", str(tmp_path)])

        assert_that(result).has_exit_code(2)
        assert_that(result.output).contains("Error parsing configuration", "Found 2 error(s).")
        assert_that(result.output).contains("0 < gamma <= 1", "at `grid.resolution`")
        assert_that(list(tmp_path.iterdir())).is_empty()

    def test_malformed_flat_file(self, runner: CliRunner) -> None:
        result = runner.invoke(main, args=["-c", find("malformed.cfg")])

        assert_that(result).has_exit_code(2)
        assert_that(result.output).contains("Line 2: expected `key = value`")

    def test_iso_mass_needs_dimension_three(self, runner: CliRunner) -> None:
        result = runner.invoke(main, args=["-c", find("iso_mass_n4.yml")])

        assert_that(result).has_exit_code(2)
        assert_that(result.output).contains("only defined for n = 3")

    @pytest.mark.parametrize("args", [["plot"], ["-c", "nonexistent.yml"], ["-j", "0"]])
    def test_bad_arguments(self, runner: CliRunner, args: list[str]) -> None:
        assert isinstance(main, Command)

        result = runner.invoke(main, args=args)

        assert_that(result).has_exit_code(2)

    def test_failed_check(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-c", find("strict_slopes.yml"), "-o", str(tmp_path)])

        assert_that(result).has_exit_code(1)
        assert_that(result.output).contains("FAIL", "check(s) failed.")
        assert_that(summary(tmp_path)["passed"]).is_false()

    def test_numerical_failure(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, args=["-c", find("inside_horizon.yml"), "-o", str(tmp_path)])

        assert_that(result).has_exit_code(1)
        assert_that(result.output).contains("The mean curvature of S_r is not positive", "failure.json")
        record = json.loads((tmp_path / "failure.json").read_text())
        assert_that(record).contains_entry({"kind": "precondition"})
        assert_that(record["details"]).contains_entry({"r": 0.8})
        assert_that(tmp_path / "summary.json").does_not_exist()
