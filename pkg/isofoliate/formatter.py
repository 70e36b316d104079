"""Colour and style for console messages."""

from colorama import Fore, Style


def _paint(style: str, string: str) -> str:
    return f"{style}{string}{Style.RESET_ALL}"


class Formatter:
    """Formatter for CLI output messages."""

    def info(self, string: str) -> str:
        """Progress and file paths."""
        return _paint(Fore.BLUE, string)

    def success(self, string: str) -> str:
        """A passed check or run."""
        return _paint(Fore.GREEN, string)

    def warning(self, string: str) -> str:
        """Regime diagnostics and source locations."""
        return _paint(Fore.YELLOW, string)

    def fatal(self, string: str) -> str:
        """Failed checks, invalid configurations, numerical failures."""
        return self.bold(_paint(Fore.RED, string))

    def bold(self, string: str) -> str:
        """Emphasis."""
        return _paint(Style.BRIGHT, string)

    def verdict(self, passed: bool) -> str:  # noqa: FBT001
        """PASS in green or FAIL in bold red."""
        return self.success("PASS") if passed else self.fatal("FAIL")
