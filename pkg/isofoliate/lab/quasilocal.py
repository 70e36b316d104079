"""Generalized Hawking mass of centered spheres in rotationally symmetric metrics.

For a rotationally symmetric metric on (a, b) x S^{n-1} the centered spheres {r} have area
A(r) and mean curvature H(r), and the metric has scalar curvature R(r). The Hawking mass

    m(r) = kappa (A/omega)^((n-2)/(n-1)) (1 - (A/omega)^(2/(n-1)) H^2 / (n-1)^2)

is non-decreasing wherever A is non-decreasing and R >= 0. With kappa = 1/2 it equals m
on every centered sphere of Schwarzschild of mass m; kappa = 1 is the raw normalization.

With y = (A/omega)^(1/(n-1)) H / (n-1) the last factor is 1 - y^2 = g (2 - g) for the gap
g = 1 - y. Far out y is close to 1, so profiles with a closed form carry g directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Self

import numpy as np
from scipy.interpolate import CubicSpline

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import ErrorMessage, Provenance
from isofoliate.domain.errors import PreconditionError
from isofoliate.domain.manifold import ManifoldSpec

from .schwarzschild import (
    sphere_area_schwarzschild,
    sphere_mean_curvature_gap_schwarzschild,
    sphere_mean_curvature_schwarzschild,
    unit_sphere_area,
)

__all__ = [
    "HAWKING_NORMALIZATION",
    "HawkingReport",
    "ProfileFlags",
    "RotProfile",
    "hawking_mass",
    "hawking_profile",
]

HAWKING_NORMALIZATION = 0.5
MONOTONE_TOLERANCE = 1e-10
STENCIL_POINTS = 5
TABLE_HEADER = "r A H R"


@dataclass(frozen=True)
class ProfileFlags:
    """Sampled checks a profile must pass before its Hawking mass can be expected to be monotone."""

    area_non_decreasing: bool
    scalar_non_negative: bool

    @property
    def verified(self) -> bool:
        """Whether both checks hold."""
        return self.area_non_decreasing and self.scalar_non_negative


@dataclass(frozen=True)
class RotProfile:
    """Tabulated A(r), H(r), R(r) of a rotationally symmetric metric on (a, b) x S^{n-1}.

    ``gap`` holds 1 - (A/omega)^(1/(n-1)) H / (n-1) when it is known in closed form.
    """

    dimension: int
    radii: np.ndarray
    area: np.ndarray
    mean_curvature: np.ndarray
    scalar_curvature: np.ndarray
    provenance: Provenance = Provenance.USER
    gap: np.ndarray | None = None

    @property
    def interval(self) -> tuple[float, float]:
        """The sampled radial interval (a, b)."""
        return float(self.radii[0]), float(self.radii[-1])

    @classmethod
    def schwarzschild(cls, spec: ManifoldSpec, radii: np.ndarray) -> Self:
        """Centered coordinate spheres of exact Schwarzschild."""
        radii = np.asarray(radii, dtype=float)
        return cls(
            dimension=spec.dimension,
            radii=radii,
            area=np.array([sphere_area_schwarzschild(spec, r) for r in radii]),
            mean_curvature=np.array([sphere_mean_curvature_schwarzschild(spec, r) for r in radii]),
            scalar_curvature=np.zeros_like(radii),
            provenance=Provenance.SCHWARZSCHILD,
            gap=np.array([sphere_mean_curvature_gap_schwarzschild(spec, r) for r in radii]),
        )

    @classmethod
    def cone(cls, n: int, alpha: float, radii: np.ndarray) -> Self:
        """The cone alpha^-2 ds^2 + alpha^(2/(n-1)) s^2 g_{S^{n-1}}, whose volume density is s^(n-1)."""
        s = np.asarray(radii, dtype=float)
        omega = unit_sphere_area(n)
        return cls(
            dimension=n,
            radii=s,
            area=alpha * s ** (n - 1) * omega,
            mean_curvature=alpha * (n - 1) / s,
            scalar_curvature=(n - 1) * (n - 2) * s**-2 * (alpha ** (-2.0 / (n - 1)) - alpha**2),
            provenance=Provenance.CONE,
            gap=np.full_like(s, -np.expm1(n / (n - 1) * np.log(alpha))),
        )

    @classmethod
    def euclidean(cls, n: int, radii: np.ndarray) -> Self:
        """Round spheres in flat space."""
        r = np.asarray(radii, dtype=float)
        return cls(
            dimension=n,
            radii=r,
            area=unit_sphere_area(n) * r ** (n - 1),
            mean_curvature=(n - 1) / r,
            scalar_curvature=np.zeros_like(r),
            provenance=Provenance.EUCLIDEAN,
            gap=np.zeros_like(r),
        )

    @classmethod
    def read_table(cls, path: Path, n: int) -> Self:
        """Load a whitespace table with columns r, A, H, R."""
        r, area, mean, scalar = np.loadtxt(path, comments="#", unpack=True, ndmin=2)
        return cls(dimension=n, radii=r, area=area, mean_curvature=mean, scalar_curvature=scalar)

    def write_table(self, path: Path) -> None:
        """Write the profile as a whitespace table with columns r, A, H, R."""
        table = np.column_stack([self.radii, self.area, self.mean_curvature, self.scalar_curvature])
        np.savetxt(path, table, fmt="%.17g", header=TABLE_HEADER)

    def check(self) -> ProfileFlags:
        """Sample A non-decreasing and R >= 0 up to rounding."""
        area_scale = float(np.max(np.abs(self.area)))
        scalar_scale = float(np.max(np.abs(self.scalar_curvature)))
        return ProfileFlags(
            area_non_decreasing=bool(np.all(np.diff(self.area) >= -MONOTONE_TOLERANCE * area_scale)),
            scalar_non_negative=bool(np.all(self.scalar_curvature >= -MONOTONE_TOLERANCE * scalar_scale)),
        )


class HawkingReport(ReportModel):
    """Hawking masses along a profile with the monotonicity diagnostics."""

    provenance: Provenance
    normalization: float
    radii: tuple[float, ...]
    masses: tuple[float, ...]
    max_violation: float
    min_slope: float
    monotone: bool


def hawking_mass(
    n: int,
    area: float | np.ndarray,
    mean_curvature: float | np.ndarray,
    *,
    gap: float | np.ndarray | None = None,
    raw: bool = False,
) -> float | np.ndarray:
    """Hawking mass of a sphere with area A and mean curvature H.

    Args:
        n: Ambient dimension.
        area: Area A > 0.
        mean_curvature: Mean curvature H.
        gap: 1 - (A/omega)^(1/(n-1)) H / (n-1) when known without cancellation; H is then unused.
        raw: Use normalization 1 instead of 1/2.

    Raises:
        PreconditionError: A <= 0.

    """
    area = np.asarray(area, dtype=float)
    if np.any(area <= 0.0):
        raise PreconditionError(ErrorMessage.PRECONDITION, area=area)
    scaled = area / unit_sphere_area(n)
    if gap is None:
        gap = 1.0 - scaled ** (1.0 / (n - 1)) * np.asarray(mean_curvature, dtype=float) / (n - 1)
    gap = np.asarray(gap, dtype=float)
    kappa = 1.0 if raw else HAWKING_NORMALIZATION
    mass = kappa * scaled ** ((n - 2) / (n - 1)) * gap * (2.0 - gap)
    return float(mass) if mass.ndim == 0 else mass


def _derivative(radii: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Derivative of the interpolating quartic over five neighbouring samples."""
    count = radii.shape[0]
    if count < STENCIL_POINTS:
        return np.gradient(values, radii)
    result = np.empty(count)
    half = STENCIL_POINTS // 2
    for index in range(count):
        start = min(max(index - half, 0), count - STENCIL_POINTS)
        window = slice(start, start + STENCIL_POINTS)
        local = np.polynomial.Polynomial.fit(radii[window], values[window], STENCIL_POINTS - 1)
        result[index] = local.deriv()(radii[index])
    return result


def hawking_profile(profile: RotProfile, radii: np.ndarray | None = None, *, raw: bool = False) -> HawkingReport:
    """Hawking masses at sample radii and the largest downward step between neighbours.

    Samples off the stored table are interpolated with cubic splines.

    Raises:
        PreconditionError: The profile fails its area or scalar curvature check.

    """
    flags = profile.check()
    if not flags.verified:
        raise PreconditionError(
            ErrorMessage.UNVERIFIED_PROFILE,
            area_non_decreasing=flags.area_non_decreasing,
            scalar_non_negative=flags.scalar_non_negative,
        )
    if radii is None:
        radii, area, mean, gap = profile.radii, profile.area, profile.mean_curvature, profile.gap
    else:
        radii = np.asarray(radii, dtype=float)
        area = CubicSpline(profile.radii, profile.area)(radii)
        mean = CubicSpline(profile.radii, profile.mean_curvature)(radii)
        gap = None if profile.gap is None else CubicSpline(profile.radii, profile.gap)(radii)

    masses = np.atleast_1d(hawking_mass(profile.dimension, area, mean, gap=gap, raw=raw))
    drops = masses[:-1] - masses[1:]
    violation = float(max(np.max(drops, initial=0.0), 0.0))
    scale = max(float(np.max(np.abs(masses))), 1.0)
    return HawkingReport(
        provenance=profile.provenance,
        normalization=1.0 if raw else HAWKING_NORMALIZATION,
        radii=tuple(float(r) for r in radii),
        masses=tuple(float(m) for m in masses),
        max_violation=violation,
        min_slope=float(np.min(_derivative(radii, masses))),
        monotone=violation <= MONOTONE_TOLERANCE * scale,
    )
