"""Isoperimetric profiles and isoperimetric mass of three-dimensional ends.

The quasi-mass of a region of volume V and boundary area A is

    m(V, A) = 2 / A (V - A^(3/2) / (6 sqrt(pi))),

which vanishes on Euclidean balls. The isoperimetric mass takes its limsup along an
exhaustion; here the exhaustion is by coordinate balls about the origin, which gives a lower
bound for the sup over all exhaustions. The modified mass evaluates the same quantity on the
isoperimetric profile A_g(V), bounded above by the least area among trial balls of volume V.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import ErrorMessage, ProfileSource
from isofoliate.domain.errors import IntegrationError, PreconditionError, UnsupportedConfigurationError
from isofoliate.domain.manifold import ManifoldSpec

from .bray_chart import effective_deficit
from .fitting import parallel_map, richardson, tail_limsup
from .grid import SphereGrid
from .metric import MetricField
from .schwarzschild import (
    NODES_PER_DECADE,
    composite_gauss_legendre,
    schwarzschild_volume,
    sphere_area_schwarzschild,
    unit_sphere_area,
)
from .surface import build_surface

__all__ = [
    "MassEstimate",
    "ProfileComparison",
    "ProfilePoint",
    "VolumeBoundCheck",
    "coordinate_ball",
    "dominates",
    "euclidean_profile_area",
    "iso_mass_exhaustion",
    "isoperimetric_envelope",
    "modified_iso_mass",
    "profile_deficits",
    "quasi_mass",
    "schwarzschild_profile",
    "volume_lower_bound_check",
]

ISO_MASS_DIMENSION = 3
CORE_RADIUS = 1.0
BRACKET_GROWTH = 2.0
BRACKET_MARGIN = 1e-9
MAX_BRACKET_STEPS = 200
RADIUS_TOLERANCE = 1e-13
ENVELOPE_SHIFT = 0.05
QUASI_MASS_ROUNDING = 1e-11


class ProfilePoint(ReportModel):
    """A point (V, A) of an isoperimetric profile with the radius and center of its ball."""

    volume: float
    area: float
    radius: float
    source: ProfileSource = ProfileSource.CENTERED_SPHERE
    dimension: int = ISO_MASS_DIMENSION
    center: tuple[float, ...] | None = None


class MassEstimate(ReportModel):
    """Quasi-masses along an exhaustion and the extrapolated mass."""

    radii: tuple[float, ...]
    volumes: tuple[float, ...]
    areas: tuple[float, ...]
    quasi_masses: tuple[float, ...]
    mass: float
    error: float
    modified: bool = False


class ProfileComparison(ReportModel):
    """Centered Schwarzschild profile against the Euclidean profile and off-center competitors."""

    points: tuple[ProfilePoint, ...]
    competitors: tuple[ProfilePoint, ...]
    euclidean_areas: tuple[float, ...]
    below_euclidean: bool
    beats_competitors: bool


class VolumeBoundCheck(ReportModel):
    """Replay of V >= (m_tilde / 4) A where the quasi-mass exceeds m_tilde / 2."""

    mass: float
    checked: int
    min_margin: float | None
    holds: bool


def quasi_mass(volume: float, area: float) -> float:
    """2/A (V - A^(3/2) / (6 sqrt(pi)))."""
    return 2.0 / area * (volume - area**1.5 / (6.0 * math.sqrt(math.pi)))


def euclidean_profile_area(n: int, volume: float) -> float:
    """Area omega (n V / omega)^((n-1)/n) of the Euclidean ball of volume V."""
    omega = unit_sphere_area(n)
    return omega * (n * volume / omega) ** ((n - 1) / n)


def _require_three_dimensions(n: int) -> None:
    if n != ISO_MASS_DIMENSION:
        raise UnsupportedConfigurationError(ErrorMessage.ISO_MASS_DIMENSION, dimension=n)


def _centered_radius(m: float, n: int, volume: float) -> float:
    """Radius r with Schwarzschild volume V between the horizon and S_r."""
    inner = (m / 2.0) ** (1.0 / (n - 2)) if m > 0.0 else 0.0
    upper = max(inner, 1.0)
    for _ in range(MAX_BRACKET_STEPS):
        upper *= BRACKET_GROWTH
        if schwarzschild_volume(m, n, upper) > volume:
            return brentq(lambda r: schwarzschild_volume(m, n, r) - volume, inner, upper, xtol=1e-14 * upper)
    raise IntegrationError(ErrorMessage.PRECONDITION, volume=volume, reason="bisection bracket not found")


def schwarzschild_profile(m: float, n: int, volumes: tuple[float, ...]) -> list[ProfilePoint]:
    """Centered spheres of exact Schwarzschild at the requested volumes outside the horizon.

    Raises:
        PreconditionError: A non-positive volume.
        IntegrationError: No bisection bracket for r.

    """
    if any(volume <= 0.0 for volume in volumes):
        raise PreconditionError(ErrorMessage.PRECONDITION, volumes=list(volumes))
    spec = ManifoldSpec(dimension=n, mass=m)
    points = []
    for volume in volumes:
        radius = _centered_radius(m, n, volume)
        points.append(
            ProfilePoint(volume=volume, area=sphere_area_schwarzschild(spec, radius), radius=radius, dimension=n),
        )
    return points


def profile_deficits(
    m: float,
    n: int,
    volumes: tuple[float, ...],
    offset: float = 1.5,
    tau: float = 1.25,
) -> ProfileComparison:
    """Compare the centered profile with Euclidean balls and with off-center balls of equal volume.

    Off-center competitors sit at |p| = ``offset`` r and are skipped where they would meet the
    horizon ball. Without mass there is no horizon and no competitors are built.
    """
    points = schwarzschild_profile(m, n, volumes)
    euclidean = [euclidean_profile_area(n, point.volume) for point in points]
    competitors = []
    for point in points if m > 0.0 else ():
        try:
            check = effective_deficit(m, n, point.radius, offset * point.radius, tau)
        except UnsupportedConfigurationError:
            continue
        competitors.append(
            ProfilePoint(
                volume=point.volume,
                area=check.area_boundary,
                radius=point.radius,
                source=ProfileSource.OFF_CENTER_COMPETITOR,
                dimension=n,
            ),
        )
    by_volume = {point.volume: point.area for point in points}
    return ProfileComparison(
        points=tuple(points),
        competitors=tuple(competitors),
        euclidean_areas=tuple(euclidean),
        below_euclidean=all(point.area < area for point, area in zip(points, euclidean, strict=True)),
        beats_competitors=all(by_volume[other.volume] <= other.area for other in competitors),
    )


def _core_radius(m: float, n: int) -> float:
    """Radius max(r_h, 1) of the ball about q that counts with its Schwarzschild volume."""
    horizon = (m / 2.0) ** (1.0 / (n - 2)) if m > 0.0 else 0.0
    return max(horizon, CORE_RADIUS)


def _closed_form(metric: MetricField, center: np.ndarray) -> bool:
    return metric.is_schwarzschild and bool(np.array_equal(center, metric.translation))


def _ball_volume(metric: MetricField, radius: float, grid: SphereGrid, center: np.ndarray) -> float:
    """Volume of the coordinate ball B_r(c) outside the horizon.

    The ball about q of exact Schwarzschild uses the closed form. Otherwise the ball
    B_a(q), a = max(r_h, 1), counts with its Schwarzschild volume, which ignores any
    perturbation inside it, and the rest is integrated with sqrt(det g) along rays from q,
    logarithmically mapped between a and the exit point on S_r(c).

    Raises:
        PreconditionError: B_r(c) does not contain B_a(q).

    """
    m, n = metric.mass, metric.dimension
    if _closed_form(metric, center):
        return schwarzschild_volume(m, n, radius)
    q = metric.translation
    core = _core_radius(m, n)
    offset = q - center
    if float(np.linalg.norm(offset)) + core >= radius:
        raise PreconditionError(ErrorMessage.PRECONDITION, radius=radius, reason="ball misses the core about q")
    along = grid.directions @ offset
    reach = -along + np.sqrt(along**2 + radius**2 - float(offset @ offset))
    log_ratio = np.log(reach / core)
    panels = max(1, math.ceil(math.log10(float(np.max(reach)) / core)))
    t, weights = composite_gauss_legendre(0.0, 1.0, NODES_PER_DECADE * panels)
    s = core * np.exp(t[:, None] * log_ratio[None, :])
    points = q + s[..., None] * grid.directions[None, :, :]
    density = np.sqrt(np.linalg.det(metric.metric(points)))
    shell = float(np.einsum("t,k,tk,tk,k->", weights, grid.weights, density, s**n, log_ratio))
    return schwarzschild_volume(m, n, core) + shell


def _ball_area(metric: MetricField, radius: float, grid: SphereGrid, center: np.ndarray) -> float:
    if _closed_form(metric, center):
        return sphere_area_schwarzschild(metric.spec, radius)
    return build_surface(grid, radius, np.zeros(grid.size), metric, center).area


def coordinate_ball(
    metric: MetricField,
    radius: float,
    grid: SphereGrid | None = None,
    center: np.ndarray | None = None,
) -> ProfilePoint:
    """Volume and boundary area of the coordinate ball B_r(c), about the origin by default.

    Raises:
        UnsupportedConfigurationError: n != 3.
        PreconditionError: B_r(c) does not contain B_a(q), a = max(r_h, 1).

    """
    _require_three_dimensions(metric.dimension)
    grid = grid or SphereGrid.full()
    center = np.zeros(metric.dimension) if center is None else np.asarray(center, dtype=float)
    return ProfilePoint(
        volume=_ball_volume(metric, radius, grid, center),
        area=_ball_area(metric, radius, grid, center),
        radius=radius,
        source=ProfileSource.CENTERED_SPHERE
        if np.array_equal(center, metric.translation)
        else ProfileSource.OFF_CENTER_COMPETITOR,
        center=tuple(float(x) for x in center),
    )


def _ball_radius(metric: MetricField, volume: float, grid: SphereGrid, center: np.ndarray, guess: float) -> float:
    """Radius of the coordinate ball about ``center`` with volume V, bracketed from ``guess``."""
    if _closed_form(metric, center):
        return _centered_radius(metric.mass, metric.dimension, volume)
    floor = float(np.linalg.norm(metric.translation - center)) + _core_radius(metric.mass, metric.dimension)

    def excess(radius: float) -> float:
        return _ball_volume(metric, radius, grid, center) - volume

    lower, upper = max(guess / BRACKET_GROWTH, floor * (1.0 + BRACKET_MARGIN)), max(guess, floor * BRACKET_GROWTH)
    for _ in range(MAX_BRACKET_STEPS):
        if excess(upper) > 0.0:
            break
        lower, upper = upper, upper * BRACKET_GROWTH
    else:
        raise IntegrationError(ErrorMessage.PRECONDITION, volume=volume, reason="bisection bracket not found")
    if excess(lower) > 0.0:
        raise IntegrationError(ErrorMessage.PRECONDITION, volume=volume, reason="volume below the smallest ball")
    return brentq(excess, lower, upper, xtol=RADIUS_TOLERANCE * upper)


def _trial_ball(
    metric: MetricField,
    volume: float,
    guess: float,
    center: np.ndarray,
    grid: SphereGrid,
) -> ProfilePoint:
    radius = _ball_radius(metric, volume, grid, center, guess)
    point = coordinate_ball(metric, radius, grid, center)
    return point.model_copy(update={"volume": volume})


def isoperimetric_envelope(
    metric: MetricField,
    exhaustion: MassEstimate,
    grid: SphereGrid | None = None,
    shifts: tuple[float, ...] = (ENVELOPE_SHIFT,),
    threads: int = 1,
) -> list[ProfilePoint]:
    """Upper bound for A_g(V) at the exhaustion volumes: the least area among trial balls of volume V.

    The trial balls sit about q and about q + shift r e_1 for each shift, r being the
    exhaustion radius. The exhaustion balls themselves are not candidates, so an envelope
    that does not beat them shows up as a modified quasi-mass below the plain one.

    Raises:
        UnsupportedConfigurationError: n != 3 or an axisymmetric grid.

    """
    _require_three_dimensions(metric.dimension)
    grid = grid or SphereGrid.full()
    grid.require_full()
    q = metric.translation
    axis = np.eye(metric.dimension)[0]
    offsets = [0.0, *(shift for shift in shifts if shift != 0.0)]
    trials = [
        (volume, radius, q + offset * radius * axis)
        for volume, radius in zip(exhaustion.volumes, exhaustion.radii, strict=True)
        for offset in offsets
    ]
    balls = parallel_map(lambda trial: _trial_ball(metric, *trial, grid), trials, threads)
    count = len(offsets)
    return [
        min(balls[start : start + count], key=lambda ball: ball.area) for start in range(0, len(balls), count)
    ]


def iso_mass_exhaustion(
    metric: MetricField,
    radii: tuple[float, ...],
    grid: SphereGrid | None = None,
    threads: int = 1,
) -> MassEstimate:
    """Quasi-masses of coordinate balls about the origin and their Richardson limit in 1/r.

    Raises:
        UnsupportedConfigurationError: n != 3.
        PreconditionError: The radii are not increasing, or a ball misses the core about q.

    """
    _require_three_dimensions(metric.dimension)
    if any(a >= b for a, b in zip(radii[:-1], radii[1:], strict=True)):
        raise PreconditionError(ErrorMessage.LADDER_NOT_INCREASING, radii=list(radii))
    grid = grid or SphereGrid.full()
    balls = parallel_map(lambda r: coordinate_ball(metric, r, grid), radii, threads)
    masses = [quasi_mass(ball.volume, ball.area) for ball in balls]
    limit, error = richardson(radii, masses) if len(radii) >= 2 else (masses[-1], math.inf)  # noqa: PLR2004
    return MassEstimate(
        radii=tuple(float(r) for r in radii),
        volumes=tuple(ball.volume for ball in balls),
        areas=tuple(ball.area for ball in balls),
        quasi_masses=tuple(masses),
        mass=limit,
        error=error,
    )


def modified_iso_mass(profile: list[ProfilePoint]) -> MassEstimate:
    """Quasi-masses on the isoperimetric profile and their limsup over tail extrapolants.

    Raises:
        UnsupportedConfigurationError: The profile is not three-dimensional.

    """
    for point in profile:
        _require_three_dimensions(point.dimension)
    radii = [point.radius for point in profile]
    masses = [quasi_mass(point.volume, point.area) for point in profile]
    limit = tail_limsup(radii, masses)
    _, error = richardson(radii, masses) if len(radii) >= 2 else (limit, math.inf)  # noqa: PLR2004
    return MassEstimate(
        radii=tuple(radii),
        volumes=tuple(point.volume for point in profile),
        areas=tuple(point.area for point in profile),
        quasi_masses=tuple(masses),
        mass=limit,
        error=error,
        modified=True,
    )


def dominates(modified: MassEstimate, plain: MassEstimate) -> bool:
    """Whether each modified quasi-mass is at least the plain one at the same volume, up to rounding.

    quasi_mass cancels two terms of size V/A, so rounding is measured on that scale.
    """
    return all(
        after >= before - QUASI_MASS_ROUNDING * volume / area
        for before, after, volume, area in zip(
            plain.quasi_masses, modified.quasi_masses, plain.volumes, plain.areas, strict=True
        )
    )


def volume_lower_bound_check(estimate: MassEstimate) -> VolumeBoundCheck:
    """Check V >= (m_tilde / 4) A at every ladder point whose quasi-mass exceeds m_tilde / 2."""
    mass = estimate.mass
    margins = [
        volume - mass / 4.0 * area
        for volume, area, quasi in zip(estimate.volumes, estimate.areas, estimate.quasi_masses, strict=True)
        if quasi > mass / 2.0
    ]
    return VolumeBoundCheck(
        mass=mass,
        checked=len(margins),
        min_margin=min(margins) if margins else None,
        holds=mass > 0.0 and all(margin >= 0.0 for margin in margins),
    )
