"""Center of mass of asymptotically even ends.

The center is the flux limit

    C_l = 1 / (2 m (n-1) omega) lim_r int_{S_r} Y_(l) . x/r dA_delta,
    Y_(l)^j = x_l (g_ij,i - g_ii,j) - (g_jl - g_ii delta_lj),

evaluated on a radius ladder and extrapolated in 1/r. Off-center coordinate spheres give
an alternative boundary expression through the first-order expansion of their mean
curvature, and CMC leaves give the Euclidean centroids a(V) that converge to C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import ErrorMessage
from isofoliate.domain.errors import ConvergenceError, PreconditionError, UnsupportedConfigurationError

from .cmc import foliation_sweep
from .fitting import loglog_slope, parallel_map, richardson
from .grid import SphereGrid
from .metric import MetricField
from .schwarzschild import unit_sphere_area
from .surface import GraphSurface, build_surface

__all__ = [
    "AlternativeCenterReport",
    "CenterConvergenceReport",
    "CenterReport",
    "ExpansionReport",
    "SphereFit",
    "adm_center",
    "alternative_center_check",
    "alternative_center_integral",
    "centroid",
    "com_convergence_experiment",
    "divergence_identity",
    "expansion_sweep",
    "fit_sphere",
    "mean_curvature_expansion",
]

MIN_LARGEST_RADIUS = 100.0
FIT_TOLERANCE = 0.1
FIT_STEP_TOLERANCE = 1e-14
NON_EVEN_WARNING = "The metric is not asymptotically even; the center-of-mass limit may not exist"


class CenterReport(ReportModel):
    """Extrapolated center of mass with the per-radius flux integrals."""

    center: tuple[float, ...]
    error: tuple[float, ...]
    radii: tuple[float, ...]
    partials: tuple[tuple[float, ...], ...]
    even: bool
    warning: str | None = None


class AlternativeCenterReport(ReportModel):
    """Off-center boundary integrals compared with m (n-1) omega (p_l - C_l)."""

    component: int
    offset: tuple[float, ...]
    radii: tuple[float, ...]
    integrals: tuple[float, ...]
    predicted: float
    residuals: tuple[float, ...]
    slope: float | None
    predicted_slope: float


class ExpansionReport(ReportModel):
    """First-order terms of H - (n-1)/r on S_r(p) and the remainder against the exact H."""

    radius: float
    terms: tuple[float, ...]
    exact: float
    remainder: float


class CenterConvergenceReport(ReportModel):
    """Euclidean centroids a(V) of CMC leaves against the flux center C."""

    radii: tuple[float, ...]
    centroids: tuple[tuple[float, ...], ...]
    center: tuple[float, ...]
    distances: tuple[float, ...]
    slope: float | None


@dataclass(frozen=True)
class SphereFit:
    """Least-squares sphere through the nodes of a surface.

    Attributes:
        center: Fitted center p.
        radius: Fitted radius r.
        deviation: Radial deviation v = |x - p| - r at the surface nodes.
        scaled_norm: sup(r^-1 |v| + |Dv|).
        defect: sup|h_0| + sup|H - mean H| of the surface.
        bound_constant: scaled_norm / (r defect), or None for an umbilic CMC surface.
        radius_in_range: (n-1) / (2 mean H) < r < 2 (n-1) / mean H.

    """

    center: np.ndarray
    radius: float
    deviation: np.ndarray
    scaled_norm: float
    defect: float
    bound_constant: float | None
    radius_in_range: bool


def _require_full_grid(metric: MetricField, grid: SphereGrid) -> None:
    grid.require_full()
    if grid.dimension != metric.dimension:
        raise UnsupportedConfigurationError(ErrorMessage.FULL_GRID_DIMENSION, dimension=metric.dimension)


def _flux(metric: MetricField, grid: SphereGrid, radius: float) -> np.ndarray:
    """int_{S_r} Y_(l) . x/r dA_delta for every l."""
    n = metric.dimension
    x = radius * grid.directions
    jet = metric.jet(x)
    g, dg = jet.g, jet.dg
    divergence = np.einsum("niij->nj", dg)
    gradient_trace = np.einsum("njii->nj", dg)
    trace = np.einsum("nii->n", g)
    normal = grid.directions
    first = x * np.einsum("nj,nj->n", divergence - gradient_trace, normal)[:, None]
    second = np.einsum("njl,nj->nl", g, normal) - trace[:, None] * normal
    integrand = first - second
    return radius ** (n - 1) * np.einsum("n,nl->l", grid.weights, integrand)


def adm_center(
    metric: MetricField,
    radii: tuple[float, ...],
    grid: SphereGrid | None = None,
    threads: int = 1,
) -> CenterReport:
    """Center of mass by sphere quadrature on a radius ladder and Richardson extrapolation.

    Args:
        metric: Metric with positive mass.
        radii: Increasing radii, the largest at least 100.
        grid: Full n = 3 sphere grid; the default grid when omitted.
        threads: Worker threads for the ladder.

    Returns:
        The center, its extrapolation error, and the per-radius values.

    Raises:
        PreconditionError: Non-increasing ladder, too small radii, or zero mass.

    """
    grid = grid or SphereGrid.full()
    _require_full_grid(metric, grid)
    increasing = len(radii) >= 2 and all(a < b for a, b in zip(radii[:-1], radii[1:], strict=True))  # noqa: PLR2004
    if metric.mass <= 0.0 or not increasing or radii[-1] < MIN_LARGEST_RADIUS:
        raise PreconditionError(ErrorMessage.PRECONDITION, radii=list(radii), mass=metric.mass)

    n = metric.dimension
    normalization = 2.0 * metric.mass * (n - 1) * unit_sphere_area(n)
    partials = np.asarray(parallel_map(lambda r: _flux(metric, grid, r) / normalization, radii, threads))
    limits = [richardson(radii, partials[:, component]) for component in range(n)]
    even = metric.spec.is_even
    return CenterReport(
        center=tuple(limit for limit, _ in limits),
        error=tuple(error for _, error in limits),
        radii=tuple(float(r) for r in radii),
        partials=tuple(tuple(float(v) for v in row) for row in partials),
        even=even,
        warning=None if even else NON_EVEN_WARNING,
    )


def _offset_sphere(metric: MetricField, p: np.ndarray, radius: float, grid: SphereGrid) -> GraphSurface:
    return build_surface(grid, radius, np.zeros(grid.size), metric, p)


def alternative_center_integral(
    metric: MetricField,
    p: np.ndarray | tuple[float, ...],
    radius: float,
    component: int,
    grid: SphereGrid | None = None,
    gamma1: float = 1.0,
) -> float:
    """Evaluate int_{S_r(p)} (x_l - p_l)(H - (n-1)/r) dA_delta with the exact H.

    Raises:
        PreconditionError: r < 1 or |p| > r^(1 - gamma1).

    """
    grid = grid or SphereGrid.full()
    _require_full_grid(metric, grid)
    p = np.asarray(p, dtype=float)
    if radius < 1.0 or np.linalg.norm(p) > radius ** (1.0 - gamma1):
        raise PreconditionError(ErrorMessage.PRECONDITION, radius=radius, offset=p)
    surface = _offset_sphere(metric, p, radius, grid)
    n = metric.dimension
    weights = surface.euclidean_weights
    displacement = surface.embedding[:, component] - p[component]
    return float(np.dot(weights, displacement * (surface.mean_curvature - (n - 1) / radius)))


def alternative_center_check(
    metric: MetricField,
    center: tuple[float, ...],
    p: np.ndarray | tuple[float, ...],
    radii: tuple[float, ...],
    component: int,
    grid: SphereGrid | None = None,
    gamma1: float = 1.0,
) -> AlternativeCenterReport:
    """Compare the off-center integrals with m (n-1) omega (p_l - C_l) along a ladder.

    The predicted decay of the residual is max(1 - gamma - gamma1, -min(gamma, gamma1)).
    """
    n, gamma = metric.dimension, metric.spec.gamma
    p = np.asarray(p, dtype=float)
    predicted = metric.mass * (n - 1) * unit_sphere_area(n) * (p[component] - center[component])
    integrals = [alternative_center_integral(metric, p, r, component, grid, gamma1) for r in radii]
    residuals = [abs(value - predicted) for value in integrals]
    usable = len(radii) >= 2 and min(residuals) > 0.0  # noqa: PLR2004
    return AlternativeCenterReport(
        component=component,
        offset=tuple(float(v) for v in p),
        radii=tuple(float(r) for r in radii),
        integrals=tuple(integrals),
        predicted=predicted,
        residuals=tuple(residuals),
        slope=loglog_slope(radii, residuals).slope if usable else None,
        predicted_slope=max(1.0 - gamma - gamma1, -min(gamma, gamma1)),
    )


def _perturbation_terms(metric: MetricField, points: np.ndarray, p: np.ndarray, radius: float) -> dict[str, np.ndarray]:
    """h = g - delta, its derivatives, and rho = (x - p)/|x - p| at the nodes."""
    jet = metric.jet(points)
    n = metric.dimension
    return {
        "h": jet.g - np.eye(n),
        "dh": jet.dg,
        "rho": (points - p) / radius,
    }


def mean_curvature_expansion(
    metric: MetricField,
    p: np.ndarray | tuple[float, ...],
    radius: float,
    grid: SphereGrid | None = None,
) -> ExpansionReport:
    """First-order expansion of H on S_r(p) in h = g - delta.

    H - (n-1)/r = 1/2 h_ij,k rho_i rho_j rho_k + 1/2 h_ii,j rho_j - h_ij,i rho_j
                  + (n+1)/2 h_ij rho_i rho_j / r - h_ii / r + E.

    Returns:
        Sup norms of the five terms, of the exact difference, and of the remainder E.

    """
    grid = grid or SphereGrid.full()
    _require_full_grid(metric, grid)
    p = np.asarray(p, dtype=float)
    n = metric.dimension
    surface = _offset_sphere(metric, p, radius, grid)
    fields = _perturbation_terms(metric, surface.embedding, p, radius)
    h, dh, rho = fields["h"], fields["dh"], fields["rho"]

    terms = (
        0.5 * np.einsum("nkij,ni,nj,nk->n", dh, rho, rho, rho),
        0.5 * np.einsum("njii,nj->n", dh, rho),
        -np.einsum("niij,nj->n", dh, rho),
        0.5 * (n + 1) * np.einsum("nij,ni,nj->n", h, rho, rho) / radius,
        -np.einsum("nii->n", h) / radius,
    )
    exact = surface.mean_curvature - (n - 1) / radius
    remainder = exact - np.sum(terms, axis=0)
    return ExpansionReport(
        radius=radius,
        terms=tuple(float(np.max(np.abs(term))) for term in terms),
        exact=float(np.max(np.abs(exact))),
        remainder=float(np.max(np.abs(remainder))),
    )


def expansion_sweep(
    metric: MetricField,
    p: np.ndarray | tuple[float, ...],
    radii: tuple[float, ...],
    grid: SphereGrid | None = None,
) -> tuple[list[ExpansionReport], float]:
    """Expansion reports along a ladder and the fitted decay slope of the remainder."""
    reports = [mean_curvature_expansion(metric, p, r, grid) for r in radii]
    return reports, loglog_slope(radii, [report.remainder for report in reports]).slope


def divergence_identity(
    metric: MetricField,
    p: np.ndarray | tuple[float, ...],
    radius: float,
    component: int,
    grid: SphereGrid | None = None,
) -> tuple[float, float]:
    """Both sides of the integration by parts for the cubic term of the expansion.

    1/2 int (x_l - p_l) h_ij,k rho_i rho_j rho_k
        = 1/2 int h_il rho_i + (x_l - p_l)(h_ii / r - (n+1) h_ij rho_i rho_j / r + h_ij,j rho_i).
    """
    grid = grid or SphereGrid.full()
    _require_full_grid(metric, grid)
    p = np.asarray(p, dtype=float)
    n = metric.dimension
    points = p + radius * grid.directions
    fields = _perturbation_terms(metric, points, p, radius)
    h, dh, rho = fields["h"], fields["dh"], fields["rho"]
    weights = radius ** (n - 1) * grid.weights
    displacement = points[:, component] - p[component]

    lhs = 0.5 * np.einsum("nkij,ni,nj,nk->n", dh, rho, rho, rho) * displacement
    rhs = 0.5 * (
        np.einsum("ni,ni->n", h[:, :, component], rho)
        + displacement
        * (
            np.einsum("nii->n", h) / radius
            - (n + 1) * np.einsum("nij,ni,nj->n", h, rho, rho) / radius
            + np.einsum("njij,ni->n", dh, rho)
        )
    )
    return float(np.dot(weights, lhs)), float(np.dot(weights, rhs))


def centroid(surface: GraphSurface) -> np.ndarray:
    """Euclidean centroid a(V) = int x dA_delta / A_delta of a surface."""
    weights = surface.euclidean_weights
    return weights @ surface.embedding / np.sum(weights)


def fit_sphere(surface: GraphSurface, tolerance: float = FIT_TOLERANCE) -> SphereFit:
    """Fit a coordinate sphere to a surface by Gauss-Newton on center and radius.

    The residual is the radial deviation |x - p| - r weighted by the Euclidean area.

    Raises:
        PreconditionError: sup|h_0| + sup|H - mean H| exceeds ``tolerance`` times mean H.
        ConvergenceError: The least-squares fit did not converge.

    """
    n = surface.dimension
    mean = surface.mean(surface.mean_curvature)
    defect = float(
        np.max(np.sqrt(surface.traceless_squared)) + np.max(np.abs(surface.mean_curvature - mean)),
    )
    if mean <= 0.0 or defect > tolerance * mean:
        raise PreconditionError(ErrorMessage.PRECONDITION, defect=defect, mean_curvature=mean)

    points = surface.embedding
    scale = np.sqrt(surface.euclidean_weights / np.sum(surface.euclidean_weights))

    def residual(parameters: np.ndarray) -> np.ndarray:
        return scale * (np.linalg.norm(points - parameters[:n], axis=-1) - parameters[n])

    def jacobian(parameters: np.ndarray) -> np.ndarray:
        offset = points - parameters[:n]
        unit = offset / np.linalg.norm(offset, axis=-1, keepdims=True)
        return scale[:, None] * np.concatenate([-unit, -np.ones((points.shape[0], 1))], axis=1)

    start_center = centroid(surface)
    start_radius = float(np.average(np.linalg.norm(points - start_center, axis=-1), weights=scale**2))
    result = least_squares(
        residual,
        np.append(start_center, start_radius),
        jac=jacobian,
        method="lm",
        xtol=FIT_STEP_TOLERANCE,
        ftol=FIT_STEP_TOLERANCE,
        gtol=FIT_STEP_TOLERANCE,
    )
    if not result.success:
        raise ConvergenceError(ErrorMessage.FIT_NOT_CONVERGED, status=result.status)

    center, radius = result.x[:n], float(result.x[n])
    deviation = np.linalg.norm(points - center, axis=-1) - radius
    d_deviation = surface.gradient(deviation)
    euclidean_inverse = np.linalg.inv(np.einsum("nai,nbi->nab", surface.tangents, surface.tangents))
    slope = np.sqrt(np.einsum("na,nab,nb->n", d_deviation, euclidean_inverse, d_deviation))
    scaled_norm = float(np.max(np.abs(deviation) / radius + slope))
    return SphereFit(
        center=center,
        radius=radius,
        deviation=deviation,
        scaled_norm=scaled_norm,
        defect=defect,
        bound_constant=scaled_norm / (radius * defect) if defect > 0.0 else None,
        radius_in_range=(n - 1) / (2.0 * mean) < radius < 2.0 * (n - 1) / mean,
    )


def com_convergence_experiment(
    metric: MetricField,
    leaf_radii: tuple[float, ...],
    center_radii: tuple[float, ...],
    grid: SphereGrid | None = None,
    threads: int = 1,
) -> tuple[CenterConvergenceReport, CenterReport]:
    """Solve CMC leaves, take their Euclidean centroids, and compare with the flux center.

    Leaves are parametrized by the radius R of the coordinate sphere they bifurcate from,
    which fixes the enclosed volume V.
    """
    grid = grid or SphereGrid.full()
    center = adm_center(metric, center_radii, grid, threads)
    surfaces, _ = foliation_sweep(metric, leaf_radii, grid, threads)
    centroids = [centroid(surface) for surface in surfaces]
    target = np.asarray(center.center)
    distances = [float(np.linalg.norm(a - target)) for a in centroids]
    usable = len(leaf_radii) >= 2 and min(distances) > 0.0  # noqa: PLR2004
    report = CenterConvergenceReport(
        radii=tuple(float(r) for r in leaf_radii),
        centroids=tuple(tuple(float(v) for v in a) for a in centroids),
        center=center.center,
        distances=tuple(distances),
        slope=loglog_slope(leaf_radii, distances).slope if usable else None,
    )
    return report, center
