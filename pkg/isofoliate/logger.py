"""Console logger for run progress, check verdicts, and failures."""

from typing import NoReturn

from click import Abort, echo

from isofoliate.domain.config import Diagnostic
from isofoliate.domain.results import Check
from isofoliate.formatter import Formatter


class Logger:
    """The only writer to the console; lab modules report through callbacks and return values."""

    def __init__(self, formatter: Formatter, *, verbose: bool = False) -> None:
        """Initialize the logger.

        Args:
            formatter: Styles every message.
            verbose: Whether `progress` lines are shown.

        """
        self.formatter = formatter
        self.verbose = verbose

    def log(self, *messages: str) -> None:
        """Write the messages on one line, keeping ANSI styles."""
        echo(" ".join(messages), color=True)

    def info(self, string: str) -> None:
        """Progress and file paths."""
        self.log(self.formatter.info(string))

    def progress(self, string: str) -> None:
        """An info line shown only in verbose mode."""
        if self.verbose:
            self.info(string)

    def success(self, string: str) -> None:
        """A passed run."""
        self.log(self.formatter.success(string))

    def warning(self, string: str) -> None:
        """Something worth a look that does not stop the run."""
        self.log(self.formatter.warning(string))

    def diagnostic(self, diagnostic: Diagnostic) -> None:
        """Warn about a parameter outside the verified regime."""
        self.warning(f"{diagnostic.key} = {diagnostic.value:g}: {diagnostic.message}")

    def check(self, check: Check) -> None:
        """One PASS/FAIL line with the measured value and its threshold."""
        value = "n/a" if check.value is None else f"{check.value:.6g}"
        self.log(self.formatter.verdict(check.passed), f"{check.name}: {value} (threshold {check.threshold:.3g})")

    def error(self, string: str) -> None:
        """A failed run or an invalid configuration."""
        self.log(self.formatter.fatal(string))

    def fatal(self, string: str) -> NoReturn:
        """Log the message and abort with exit status 1."""
        self.error(string)
        raise Abort
