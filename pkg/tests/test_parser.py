"""Feature: Parsing Experiment Configurations"""

from pathlib import Path

from assertpy import assert_that

from isofoliate.domain.enums import CommandName
from isofoliate.parser import ConfigParser

NO_ENVIRONMENT: dict[str, str] = {}


class TestSuccessfulParsing:
    """Scenario: Valid configurations"""

    parser = ConfigParser()

    def test_empty_content_gives_defaults(self) -> None:
        result = self.parser.parse("", environ=NO_ENVIRONMENT)

        assert_that(result.success).is_true()
        assert_that(result.config.command).is_equal_to(CommandName.ACCEPTANCE)
        assert_that(result.errors).is_empty()
        assert_that(result.diagnostics).is_empty()

    def test_flat_content(self) -> None:
        result = self.parser.parse("command = cmc-solve\nsurface.radius = 200\n", flat=True, environ=NO_ENVIRONMENT)

        assert_that(result.config.command).is_equal_to(CommandName.CMC_SOLVE)
        assert_that(result.config.surface.radius).is_equal_to(200.0)

    def test_environment_overrides_file(self) -> None:
        result = self.parser.parse("threads: 2\n", environ={"ISOFOLIATE_THREADS": "4"})

        assert_that(result.config.threads).is_equal_to(4)

    def test_command_line_overrides_environment(self) -> None:
        result = self.parser.parse(
            "command: iso-mass\n",
            environ={"ISOFOLIATE_OUTPUT": "from-env"},
            overrides={"command": "bray-chart", "output": Path("from-cli"), "threads": None},
        )

        assert_that(result.config.command).is_equal_to(CommandName.BRAY_CHART)
        assert_that(result.config.output).is_equal_to(Path("from-cli"))
        assert_that(result.config.threads).is_equal_to(1)

    def test_diagnostics_are_collected(self) -> None:
        result = self.parser.parse("grid:\n  colatitudes: 8\n", environ=NO_ENVIRONMENT)

        assert_that(result.success).is_true()
        assert_that(result.diagnostics).extracting("key").is_equal_to(["grid.colatitudes"])


class TestFailedParsing:
    """Scenario: Invalid configurations"""

    parser = ConfigParser()

    def test_validation_errors_keep_line_map(self) -> None:
        content = "command: bray-chart\nmanifold:\n  dimension: 2\n"

        result = self.parser.parse(content, environ=NO_ENVIRONMENT)

        assert_that(result.success).is_false()
        assert_that(result.config).is_none()
        assert_that(result.errors).is_length(1)
        assert_that(result.errors[0]["loc"]).is_equal_to(("manifold",))
        assert_that(result.line_map).contains_entry({"manifold.dimension": 3})

    def test_broken_yaml(self) -> None:
        result = self.parser.parse("manifold: [1, 2", environ=NO_ENVIRONMENT)

        assert_that(result.success).is_false()
        assert_that(result.errors[0]["type"]).is_equal_to("yaml_error")
        assert_that(result.errors[0]["loc"]).is_empty()
        assert_that(result.errors[0]["msg"]).starts_with("Error parsing configuration:")

    def test_malformed_flat_line(self) -> None:
        result = self.parser.parse("threads\n", flat=True, environ=NO_ENVIRONMENT)

        assert_that(result.errors[0]["msg"]).contains("Line 1: expected `key = value`")

    def test_iso_mass_in_dimension_four(self) -> None:
        result = self.parser.parse("command: iso-mass\nmanifold:\n  dimension: 4\n", environ=NO_ENVIRONMENT)

        assert_that(result.success).is_false()
        assert_that(result.errors[0]["msg"]).contains("only defined for n = 3")
