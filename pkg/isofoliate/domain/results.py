"""Pass/fail checks and run summaries produced by the experiment recipes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from pydantic import ConfigDict, Field

from .base import ReportModel
from .enums import CommandName

__all__ = [
    "Check",
    "ExperimentResult",
    "Row",
    "RunSummary",
]

type Row = dict[str, float | int | str | None]


class Check(ReportModel):
    """A measured value compared against its threshold."""

    name: str
    value: float | None
    threshold: float
    passed: bool

    @classmethod
    def at_most(cls, name: str, value: float, threshold: float) -> Check:
        """Pass when value <= threshold."""
        return cls(name=name, value=value, threshold=threshold, passed=bool(value <= threshold))

    @classmethod
    def at_least(cls, name: str, value: float, threshold: float) -> Check:
        """Pass when value >= threshold."""
        return cls(name=name, value=value, threshold=threshold, passed=bool(value >= threshold))

    @classmethod
    def near(cls, name: str, value: float | None, target: float, tolerance: float) -> Check:
        """Pass when |value - target| <= tolerance; a missing value fails."""
        passed = value is not None and abs(value - target) <= tolerance
        return cls(name=name, value=value, threshold=tolerance, passed=passed)

    @classmethod
    def holds(cls, name: str, condition: bool) -> Check:  # noqa: FBT001
        """A boolean property."""
        return cls(name=name, value=float(condition), threshold=1.0, passed=bool(condition))


class RunSummary(ReportModel):
    """The JSON summary of one subcommand run."""

    model_config = ConfigDict(extra="forbid", frozen=True, ser_json_inf_nan="constants")

    command: CommandName
    passed: bool
    checks: tuple[Check, ...]
    reports: dict[str, Any]
    runtimes: dict[str, float] = Field(default_factory=dict)


@dataclass
class ExperimentResult:
    """Summary plus the tables a run writes as CSV and plot data."""

    command: CommandName
    checks: list[Check] = field(default_factory=list)
    reports: dict[str, Any] = field(default_factory=dict)
    tables: dict[str, list[Row]] = field(default_factory=dict)
    runtimes: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Whether every check passed."""
        return all(check.passed for check in self.checks)

    def add_report(self, name: str, report: ReportModel) -> None:
        """Store a report in its JSON form."""
        self.reports[name] = report.model_dump(mode="json")

    def summary(self) -> RunSummary:
        """Freeze the result into its JSON summary."""
        return RunSummary(
            command=self.command,
            passed=self.passed,
            checks=tuple(self.checks),
            reports=self.reports,
            runtimes=self.runtimes,
        )
