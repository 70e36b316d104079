"""Exceptions raised by the numerical modules."""

from __future__ import annotations

from typing import Any

from .enums import ErrorMessage

__all__ = [
    "ChartError",
    "ContinuationStalledError",
    "ConvergenceError",
    "DegenerateGeometryError",
    "IntegrationError",
    "LabError",
    "NoHorizonError",
    "PreconditionError",
    "SingularOperatorError",
    "StepSizeError",
    "UnsupportedConfigurationError",
]


class LabError(Exception):
    """Base class for numerical failures.

    Every failure carries a message from `ErrorMessage` and free-form details that
    end up in the machine-readable failure record written by the CLI.
    """

    kind = "lab-error"

    def __init__(self, message: ErrorMessage | str, **details: Any) -> None:
        """Initialize the error.

        Args:
            message: Human-readable failure message.
            **details: Numeric context (radii, residuals, last good parameters).

        """
        super().__init__(str(message))
        self.message = str(message)
        self.details = details

    def record(self) -> dict[str, Any]:
        """Return the failure as a JSON-serializable dictionary."""
        return {
            "kind": self.kind,
            "message": self.message,
            "details": {key: _plain(value) for key, value in self.details.items()},
        }


class NoHorizonError(LabError):
    """The mass is not positive, so there is no horizon."""

    kind = "no-horizon"


class ChartError(LabError):
    """Bray chart data is inconsistent (non-positive gap, bad matching)."""

    kind = "chart"


class IntegrationError(LabError):
    """An ODE integration or quadrature failed."""

    kind = "integration"


class SingularOperatorError(LabError):
    """A linearized operator is numerically singular."""

    kind = "singular-operator"


class ConvergenceError(LabError):
    """An iterative solver exhausted its iterations."""

    kind = "convergence"


class ContinuationStalledError(LabError):
    """Continuation step halving reached the minimum step."""

    kind = "continuation-stalled"


class UnsupportedConfigurationError(LabError):
    """The requested geometry or grid mode is outside what is implemented."""

    kind = "unsupported"


class PreconditionError(LabError):
    """An operation precondition does not hold."""

    kind = "precondition"


class DegenerateGeometryError(LabError):
    """An embedding or metric matrix degenerates."""

    kind = "degenerate-geometry"


class StepSizeError(LabError):
    """A finite-difference step underflowed."""

    kind = "step-size"


def _plain(value: Any) -> Any:
    """Coerce numpy scalars and sequences into JSON-friendly values."""
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value
