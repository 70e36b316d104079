"""Isofoliate CLI implementation."""

import os
from pathlib import Path
from typing import NoReturn

import click
from pydantic_core import ErrorDetails

from isofoliate.domain.config import ExperimentConfig
from isofoliate.domain.enums import CommandName
from isofoliate.domain.errors import LabError
from isofoliate.domain.results import ExperimentResult
from isofoliate.formatter import Formatter
from isofoliate.lab.acceptance import run_acceptance
from isofoliate.lab.experiments import RECIPES
from isofoliate.logger import Logger
from isofoliate.parser import ConfigParser, ParsingResult
from isofoliate.writers import ArtifactWriter

FLAT_SUFFIXES = (".cfg", ".conf", ".txt", ".ini")
DEFAULTS_LABEL = "<defaults>"


class ErrorHandler:
    """Handles formatting and logging of configuration errors."""

    def __init__(self, formatter: Formatter, logger: Logger) -> None:
        """Initialize the error handler.

        Args:
            formatter: Formatter instance for styling output.
            logger: Logger instance for outputting messages.

        """
        self.formatter = formatter
        self.logger = logger

    def handle(self, result: ParsingResult, source: str) -> NoReturn:
        """Log every configuration error and stop with exit status 2.

        Args:
            result: Parsing result containing errors.
            source: Path or label of the configuration being validated.

        """
        self.logger.error(
            f"Error parsing configuration {source}. Found {len(result.errors)} error(s).{os.linesep}",
        )
        for error in result.errors:
            msg = self._format_error(error, source, result.line_map)
            self.logger.log(msg, os.linesep)

        msg = f"invalid configuration {source}"
        raise click.UsageError(msg)

    def _format_error(self, error: ErrorDetails, source: str, line_map: dict[str, int]) -> str:
        """Format a Pydantic error for display.

        Args:
            error: Error details from Pydantic validation.
            source: Path or label of the configuration.
            line_map: Dictionary mapping dotted keys to line numbers.

        Returns:
            Formatted error message.

        """
        msg = error["msg"]
        loc = error["loc"]
        message = f"{self.formatter.bold(msg)} {os.linesep}  --> {self.formatter.warning(source)}"

        if not loc:
            return message

        location = ".".join(str(segment) for segment in loc)
        return f"{message}:{self._get_line_info(location, line_map)} at `{location}`"

    def _get_line_info(self, location: str, line_map: dict[str, int]) -> int:
        """Line of the longest dotted prefix of the location found in the line map, or 0.

        Settings from the environment or the command line have no line.
        """
        path_parts = location.split(".")
        for i in range(len(path_parts), 0, -1):
            partial_path = ".".join(path_parts[:i])
            if partial_path in line_map:
                return line_map[partial_path]
        return 0


class Isofoliate:
    """Isofoliate CLI for running experiments and the acceptance suite."""

    def __init__(self, verbose: bool) -> None:
        """Initialize the CLI.

        Args:
            verbose: Whether to log progress lines.

        """
        self.formatter = Formatter()
        self.logger = Logger(self.formatter)
        self.parser = ConfigParser()
        self.error_handler = ErrorHandler(self.formatter, self.logger)
        self.set_options(verbose=verbose)

    def set_options(self, **kwargs: bool) -> None:
        """Set logger options dynamically.

        Args:
            **kwargs: CLI option flags (e.g., verbose=True).

        """
        for key, value in kwargs.items():
            setattr(self.logger, key, value)

    def run(self, config_path: Path | None, overrides: dict[str, object]) -> None:
        """Load the configuration, run the requested subcommand, and write its artifacts.

        Args:
            config_path: Optional configuration file; YAML unless it has a flat-text suffix.
            overrides: Command-line values for top-level configuration keys.

        Raises:
            click.exceptions.Exit: With status 1 when a check fails.

        """
        config = self._load(config_path, overrides)
        writer = ArtifactWriter(config.output)

        self.logger.progress(f"Running {config.command} into {config.output}")

        try:
            result = self._dispatch(config)
        except LabError as error:
            self._fail(writer, error)

        paths = writer.write(result)
        for check in result.checks:
            self.logger.check(check)
        for path in paths:
            self.logger.progress(f"Wrote {path}")

        if not result.passed:
            failed = sum(not check.passed for check in result.checks)
            self.logger.error(f"{config.command}: {failed} of {len(result.checks)} check(s) failed.")
            raise click.exceptions.Exit(1)
        self.logger.success(f"{config.command}: all {len(result.checks)} check(s) passed.")

    def _load(self, config_path: Path | None, overrides: dict[str, object]) -> ExperimentConfig:
        if config_path is None:
            content, flat, source = "", False, DEFAULTS_LABEL
        else:
            content, flat, source = config_path.read_text(), config_path.suffix in FLAT_SUFFIXES, str(config_path)

        self.logger.progress(f"Parsing configuration: {source}")

        result = self.parser.parse(content, flat=flat, overrides=overrides)
        if not result.success or result.config is None:
            self.error_handler.handle(result, source)

        for diagnostic in result.diagnostics:
            self.logger.diagnostic(diagnostic)
        return result.config

    def _dispatch(self, config: ExperimentConfig) -> ExperimentResult:
        if config.command is CommandName.ACCEPTANCE:
            return run_acceptance(config.acceptance.criteria, config.threads, self.logger.progress)
        return RECIPES[config.command](config, self.logger.progress)

    def _fail(self, writer: ArtifactWriter, error: LabError) -> NoReturn:
        path = writer.write_failure(error)
        self.logger.fatal(f"{error.message}. Failure record written to {path}")


@click.command()
@click.argument("command", type=click.Choice([name.value for name in CommandName]), required=False)
@click.option("--config", "-c", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", "-o", type=click.Path(file_okay=False, path_type=Path), help="Output directory.")
@click.option("--threads", "-j", type=click.IntRange(min=1), help="Worker threads for ladder entries.")
@click.option(
    "--subcommand",
    "-s",
    type=click.Choice([name.value for name in CommandName]),
    help="Experiment to run (same as COMMAND).",
)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output.")
def main(  # noqa: PLR0913
    command: str | None,
    config_path: Path | None,
    out: Path | None,
    threads: int | None,
    subcommand: str | None,
    verbose: bool,
) -> None:
    """Run an isofoliate experiment or the acceptance suite."""
    cli = Isofoliate(verbose=verbose)
    cli.run(config_path, {"command": subcommand or command, "output": out, "threads": threads})
