"""Regression, extrapolation, and parallel sweep helpers shared by the experiments."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from isofoliate.domain.enums import ErrorMessage
from isofoliate.domain.errors import PreconditionError

__all__ = [
    "PowerLawFit",
    "loglog_slope",
    "parallel_map",
    "richardson",
    "tail_limsup",
]


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit log|y| = slope log x + log constant."""

    slope: float
    constant: float

    def __call__(self, x: float) -> float:
        """Evaluate the fitted power law."""
        return self.constant * x**self.slope


def loglog_slope(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> PowerLawFit:
    """Fit |y| ~ constant * x^slope.

    Raises:
        PreconditionError: Fewer than two usable points.

    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    usable = (x > 0.0) & (y > 0.0)
    if np.count_nonzero(usable) < 2:  # noqa: PLR2004
        raise PreconditionError(ErrorMessage.INSUFFICIENT_SWEEP, points=int(np.count_nonzero(usable)))
    slope, intercept = np.polyfit(np.log(x[usable]), np.log(y[usable]), 1)
    return PowerLawFit(slope=float(slope), constant=float(np.exp(intercept)))


def richardson(
    radii: Sequence[float] | np.ndarray,
    values: Sequence[float] | np.ndarray,
    order: int = 2,
) -> tuple[float, float]:
    """Extrapolate values(r) to r -> infinity with a polynomial in 1/r.

    The last ``order + 1`` points are interpolated exactly. The error estimate is the
    distance to the extrapolant one order lower.

    Returns:
        The limit and its error estimate.

    Raises:
        PreconditionError: Fewer than two points.

    """
    inverse = 1.0 / np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 2:  # noqa: PLR2004
        raise PreconditionError(ErrorMessage.INSUFFICIENT_SWEEP, points=int(values.shape[0]))

    def extrapolate(degree: int) -> float:
        degree = min(degree, values.shape[0] - 1)
        window = slice(values.shape[0] - degree - 1, None)
        coefficients = np.polyfit(inverse[window], values[window], degree)
        return float(coefficients[-1])

    limit = extrapolate(order)
    lower = extrapolate(order - 1) if order > 0 else values[-1]
    return float(limit), float(abs(limit - lower))


def tail_limsup(
    radii: Sequence[float] | np.ndarray,
    values: Sequence[float] | np.ndarray,
    order: int = 2,
) -> float:
    """Largest Richardson extrapolant over the tail windows of the ladder."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    minimum = min(order + 1, values.shape[0])
    ends = range(max(minimum, 2), values.shape[0] + 1)
    candidates = [richardson(radii[:end], values[:end], order)[0] for end in ends]
    return float(max(candidates)) if candidates else float(values[-1])


def parallel_map[T, R](func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Apply ``func`` to every item on a thread pool, preserving input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))
