"""Constant mean curvature graph spheres: Newton solves, continuation, and spectra.

Functions are expanded in the grid's spectral basis. The Jacobi operator
L = -Lap - (|h|^2 + Rc(nu, nu)) is discretized by Galerkin projection with the induced
area form; its stiffness and mass matrices are symmetric up to quadrature error. The Newton
linearization of u -> H(u) is L applied to the normal speed g(theta, nu) Y of a basis
variation Y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import ErrorMessage
from isofoliate.domain.errors import (
    ChartError,
    ContinuationStalledError,
    ConvergenceError,
    DegenerateGeometryError,
    PreconditionError,
    SingularOperatorError,
)

from .fitting import loglog_slope, parallel_map
from .grid import SphereGrid
from .hypersurface import simons_balance
from .metric import MetricField
from .schwarzschild import sphere_mean_curvature_schwarzschild, unit_sphere_area
from .surface import GraphSurface, build_surface, class_norm, geometric_bounds

__all__ = [
    "CmcSolution",
    "ContinuationReport",
    "CurvatureEstimateReport",
    "FoliationReport",
    "NewtonReport",
    "SpectrumReport",
    "continuation_path",
    "curvature_estimate_check",
    "foliation_sweep",
    "jacobi_spectrum",
    "laplacian_spectrum",
    "newton_solve_cmc",
    "schwarzschild_target",
    "simons_residual",
]

NEWTON_TOLERANCE = 1e-10
MAX_ITERATIONS = 40
MAX_HALVINGS = 30
SINGULAR_RCOND = 1e-9
SPECTRUM_TOLERANCE = 1e-3
CONTINUATION_STEPS = 4
MIN_CONTINUATION_STEP = 1.0 / 1024.0
ROUNDING_FLOOR = 1e-13
GEOMETRY_FAILURES = (ChartError, DegenerateGeometryError)


class NewtonReport(ReportModel):
    """Diagnostics of one Newton solve."""

    radius: float
    target: float
    iterations: int
    residuals: tuple[float, ...]
    step_norms: tuple[float, ...]
    halvings: int
    kernel_dimension: int
    quadratic_constant: float
    converged: bool
    sup_u: float
    class_norm: float


class CmcSolution(NamedTuple):
    """A solved surface and the Newton diagnostics that produced it."""

    surface: GraphSurface
    report: NewtonReport


class ContinuationReport(ReportModel):
    """Diagnostics of a metric-path continuation from g_m to g."""

    radius: float
    target: float
    t_values: tuple[float, ...]
    derivative_norms: tuple[float, ...]
    newton_iterations: tuple[int, ...]
    halvings: int
    class_norm: float


class SpectrumReport(ReportModel):
    """Jacobi and Laplacian eigenvalues of a surface with their predicted values."""

    radius: float
    eigenvalues: tuple[float, ...]
    mu0: float
    mu1: float
    lambda1: float
    laplacian_first: float
    predicted_mu0: float
    predicted_lambda1: float
    predicted_laplacian_first: float
    lambda1_ratio: float | None
    mu0_error_ratio: float | None
    asymmetry: float
    projector_defect: float
    converged: bool | None = None
    refined_lambda1: float | None = None
    refined_resolution: int | None = None


class FoliationReport(ReportModel):
    """Leaves of the CMC foliation solved along a radius ladder."""

    radii: tuple[float, ...]
    targets: tuple[float, ...]
    class_norms: tuple[float, ...]
    sup_traceless: tuple[float, ...]
    derivative_norms: tuple[float, ...]
    areas: tuple[float, ...]
    slope: float | None
    derivative_slope: float | None
    within_bounds: bool


class CurvatureEstimateReport(ReportModel):
    """Fit of sup|h_0| against R across solved leaves."""

    radii: tuple[float, ...]
    sup_traceless: tuple[float, ...]
    slope: float | None
    constant: float | None
    umbilic: bool
    scaled_mean_curvature_range: tuple[float, float]
    within_bounds: bool


@dataclass(frozen=True)
class _Galerkin:
    """Weak forms of the Jacobi operator on a surface."""

    surface: GraphSurface

    def stiffness(self, trial: np.ndarray, trial_gradient: np.ndarray) -> np.ndarray:
        """K_ab = int <grad Y_a, grad psi_b> - q Y_a psi_b dA for trial functions psi_b."""
        s = self.surface
        grid = s.grid
        weights = s.area_weights
        flux = np.einsum("nij,njb->nib", s.induced_inverse, trial_gradient)
        test = grid.basis_gradient * weights[:, None, None]
        gradient_part = np.einsum("nia,nib->ab", test, flux)
        potential_part = grid.basis.T @ ((weights * s.potential)[:, None] * trial)
        return gradient_part - potential_part

    def jacobi(self) -> np.ndarray:
        """Stiffness matrix of L on the basis itself."""
        grid = self.surface.grid
        return self.stiffness(grid.basis, grid.basis_gradient)

    def laplacian(self) -> np.ndarray:
        """Stiffness matrix of -Lap."""
        s = self.surface
        flux = np.einsum("nij,njb->nib", s.induced_inverse, s.grid.basis_gradient)
        return np.einsum("nia,nib->ab", s.grid.basis_gradient * s.area_weights[:, None, None], flux)

    def mass(self) -> np.ndarray:
        """Mass matrix int Y_a Y_b dA."""
        basis = self.surface.grid.basis
        return basis.T @ (self.surface.area_weights[:, None] * basis)

    def linearization(self) -> np.ndarray:
        """Jacobian of the weak residual with respect to the graph coefficients."""
        s = self.surface
        grid = s.grid
        speed = s.radial_speed
        d_speed, _ = grid.derivatives(speed)
        trial = speed[:, None] * grid.basis
        trial_gradient = d_speed[:, :, None] * grid.basis[:, None, :] + speed[:, None, None] * grid.basis_gradient
        return self.stiffness(trial, trial_gradient)

    def residual(self, target: float) -> np.ndarray:
        """F_a = int Y_a (H - H_target) dA."""
        s = self.surface
        return s.grid.basis.T @ (s.area_weights * (s.mean_curvature - target))


def schwarzschild_target(metric: MetricField, radius: float) -> float:
    """Mean curvature of the centered coordinate sphere S_R in the unperturbed model."""
    base = metric.spec.with_perturbation(amplitude=0.0)
    return sphere_mean_curvature_schwarzschild(base, radius)


def _sup_residual(surface: GraphSurface, target: float) -> float:
    return float(np.max(np.abs(surface.mean_curvature - target)))


def _quadratic_constant(residuals: list[float], target: float) -> float:
    relative = [value / target for value in residuals]
    ratios = [
        after / before**2
        for before, after in zip(relative[:-1], relative[1:], strict=True)
        if before > ROUNDING_FLOOR and after > ROUNDING_FLOOR
    ]
    return float(max(ratios[-3:], default=0.0))


def newton_solve_cmc(
    metric: MetricField,
    target: float,
    initial: GraphSurface,
    tolerance: float = NEWTON_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
) -> CmcSolution:
    """Solve H(u) = H_target for the graph function u by damped Newton iteration.

    The step solves J dc = -F in the least-squares sense, so exact kernels (translations
    of a Euclidean sphere) are handled by the minimal-norm step. Each step is halved
    until the nodal residual decreases.

    Raises:
        SingularOperatorError: The iteration stalls and the linearization has a kernel.
        ConvergenceError: Damping or iterations exhausted.

    """
    grid = initial.grid
    radius, center = initial.radius, initial.center
    surface = build_surface(grid, radius, initial.u, metric, center)
    coefficients = grid.coefficients(surface.u)
    residual = _sup_residual(surface, target)
    residuals, steps = [residual], []
    halvings = 0
    kernel = 0

    while residual > tolerance * abs(target):
        if len(steps) >= max_iterations:
            raise ConvergenceError(ErrorMessage.NEWTON_DIVERGED, iterations=len(steps), residual=residual)
        galerkin = _Galerkin(surface)
        jacobian = galerkin.linearization()
        singular = scipy.linalg.svdvals(jacobian)
        kernel = int(np.count_nonzero(singular < SINGULAR_RCOND * singular[0]))
        step = scipy.linalg.lstsq(jacobian, -galerkin.residual(target), cond=SINGULAR_RCOND)[0]

        factor = 1.0
        for _ in range(MAX_HALVINGS + 1):
            candidate = coefficients + factor * step
            try:
                trial = build_surface(grid, radius, grid.nodal(candidate), metric, center)
            except GEOMETRY_FAILURES:
                trial = None
            if trial is not None and _sup_residual(trial, target) < residual:
                break
            factor *= 0.5
            halvings += 1
        else:
            if kernel:
                raise SingularOperatorError(ErrorMessage.SINGULAR_JACOBI, kernel_dimension=kernel, residual=residual)
            raise ConvergenceError(ErrorMessage.NEWTON_DIVERGED, iterations=len(steps), residual=residual)

        coefficients, surface = candidate, trial
        residual = _sup_residual(surface, target)
        residuals.append(residual)
        steps.append(float(factor * np.linalg.norm(step)))

    report = NewtonReport(
        radius=radius,
        target=target,
        iterations=len(steps),
        residuals=tuple(residuals),
        step_norms=tuple(steps),
        halvings=halvings,
        kernel_dimension=kernel,
        quadratic_constant=_quadratic_constant(residuals, abs(target)),
        converged=True,
        sup_u=float(np.max(np.abs(surface.u))),
        class_norm=class_norm(grid, radius, surface.u),
    )
    return CmcSolution(surface, report)


def continuation_path(
    metric: MetricField,
    target: float,
    grid: SphereGrid,
    radius: float,
    steps: int = CONTINUATION_STEPS,
    min_step: float = MIN_CONTINUATION_STEP,
) -> tuple[GraphSurface, ContinuationReport]:
    """Follow H(u_t; g_t) = H_target along g_t = t g_m + (1 - t) g from t = 1 to t = 0.

    The path starts at u = 0 over the sphere centered at the translation q, which solves
    the problem exactly for g_m. A failed Newton solve halves the step in t.

    Raises:
        ContinuationStalledError: The step in t fell below ``min_step``.

    """
    center = metric.translation
    scale, step = 0.0, 1.0 / steps
    surface = build_surface(grid, radius, np.zeros(grid.size), metric.with_scale(0.0), center)
    t_values, derivatives, iterations = [1.0], [], []
    halvings = 0

    while scale < 1.0:
        next_scale = min(1.0, scale + step)
        try:
            solution = newton_solve_cmc(metric.with_scale(next_scale), target, surface)
        except (ConvergenceError, SingularOperatorError, *GEOMETRY_FAILURES) as error:
            step *= 0.5
            halvings += 1
            if step < min_step:
                raise ContinuationStalledError(
                    ErrorMessage.CONTINUATION_STALLED, last_good_t=1.0 - scale, cause=str(error)
                ) from error
            continue
        rate = (solution.surface.u - surface.u) / (next_scale - scale)
        derivatives.append(class_norm(grid, radius, rate))
        iterations.append(solution.report.iterations)
        surface, scale = solution.surface, next_scale
        t_values.append(1.0 - scale)

    report = ContinuationReport(
        radius=radius,
        target=target,
        t_values=tuple(t_values),
        derivative_norms=tuple(derivatives),
        newton_iterations=tuple(iterations),
        halvings=halvings,
        class_norm=class_norm(grid, radius, surface.u),
    )
    return surface, report


def _spectrum_of(surface: GraphSurface, k: int) -> dict[str, float | tuple[float, ...]]:
    galerkin = _Galerkin(surface)
    jacobi = galerkin.jacobi()
    asymmetry = float(np.max(np.abs(jacobi - jacobi.T)) / np.max(np.abs(jacobi)))
    jacobi = 0.5 * (jacobi + jacobi.T)
    mass = galerkin.mass()
    eigenvalues = scipy.linalg.eigh(jacobi, mass, eigvals_only=True)

    constant = surface.grid.coefficients(np.ones(surface.grid.size))
    moments = mass @ constant
    projector = np.eye(constant.shape[0]) - np.outer(constant, moments) / (moments @ constant)
    defect = float(np.max(np.abs(projector @ projector - projector)))
    complement = scipy.linalg.null_space(moments[None, :])
    restricted = scipy.linalg.eigh(
        complement.T @ jacobi @ complement, complement.T @ mass @ complement, eigvals_only=True
    )

    laplacian = galerkin.laplacian()
    laplacian_values = scipy.linalg.eigh(0.5 * (laplacian + laplacian.T), mass, eigvals_only=True)
    return {
        "eigenvalues": tuple(float(value) for value in eigenvalues[:k]),
        "mu0": float(eigenvalues[0]),
        "mu1": float(eigenvalues[1]),
        "lambda1": float(restricted[0]),
        "laplacian_first": float(laplacian_values[1]),
        "asymmetry": asymmetry,
        "projector_defect": defect,
    }


def jacobi_spectrum(
    surface: GraphSurface,
    k: int = 6,
    *,
    check_refinement: bool = False,
    refined_resolution: int | None = None,
) -> SpectrumReport:
    """Lowest Jacobi eigenvalues, lambda_1 on mean-zero functions, and their predictions.

    Predictions for a coordinate sphere of radius R in Schwarzschild of mass m:
    mu_0 = -H^2/(n-1) + (n-1)(n-2) m / R^n and lambda_1 = n(n-1) m / R^n.

    Args:
        surface: A built surface.
        k: Number of eigenvalues to report (at least 3).
        check_refinement: Recompute lambda_1 on the refined grid and flag disagreement.
        refined_resolution: Colatitudes of the refined grid; 4/3 of the surface grid when omitted.

    Raises:
        PreconditionError: k < 3, or the refined grid is not finer.

    """
    if k < 3:  # noqa: PLR2004
        raise PreconditionError(ErrorMessage.PRECONDITION, k=k)
    n, m, radius = surface.dimension, surface.metric.mass, surface.radius
    values = _spectrum_of(surface, k)
    mean = surface.mean(surface.mean_curvature)
    mass_term = (n - 1) * (n - 2) * m / radius**n
    predicted_mu0 = -(mean**2) / (n - 1) + mass_term
    predicted_lambda1 = n * (n - 1) * m / radius**n
    areal = (surface.area / unit_sphere_area(n)) ** (1.0 / (n - 1))

    converged, refined, resolution = None, None, None
    if check_refinement:
        fine_grid = surface.grid.refined(refined_resolution)
        resolution = fine_grid.shape[0]
        fine = build_surface(
            fine_grid, radius, surface.grid.transfer(surface.u, fine_grid), surface.metric, surface.center
        )
        refined = _spectrum_of(fine, k)["lambda1"]
        scale = max(abs(refined), abs(predicted_lambda1), ROUNDING_FLOOR / radius**2)
        converged = abs(refined - values["lambda1"]) <= SPECTRUM_TOLERANCE * scale

    return SpectrumReport(
        radius=radius,
        predicted_mu0=predicted_mu0,
        predicted_lambda1=predicted_lambda1,
        predicted_laplacian_first=(n - 1) / areal**2,
        lambda1_ratio=values["lambda1"] / predicted_lambda1 if m > 0.0 else None,
        mu0_error_ratio=abs(values["mu0"] - predicted_mu0) / mass_term if m > 0.0 else None,
        converged=converged,
        refined_lambda1=refined,
        refined_resolution=resolution,
        **values,
    )


def laplacian_spectrum(surface: GraphSurface, k: int = 6) -> tuple[float, ...]:
    """Lowest Galerkin eigenvalues of -Lap on the surface."""
    galerkin = _Galerkin(surface)
    laplacian = galerkin.laplacian()
    values = scipy.linalg.eigh(0.5 * (laplacian + laplacian.T), galerkin.mass(), eigvals_only=True)
    return tuple(float(value) for value in values[:k])


def simons_residual(surface: GraphSurface) -> float:
    """Relative max-norm residual of the Simons identity for |h_0|^2 (full n = 3 grid)."""
    return simons_balance(surface).residual


def _solve_leaf(metric: MetricField, grid: SphereGrid, radius: float) -> tuple[GraphSurface, float]:
    target = schwarzschild_target(metric, radius)
    if metric.is_schwarzschild:
        initial = build_surface(grid, radius, np.zeros(grid.size), metric, metric.translation)
        return newton_solve_cmc(metric, target, initial).surface, 0.0
    surface, report = continuation_path(metric, target, grid, radius)
    return surface, max(report.derivative_norms, default=0.0)


def foliation_sweep(
    metric: MetricField,
    radii: tuple[float, ...],
    grid: SphereGrid,
    threads: int = 1,
) -> tuple[list[GraphSurface], FoliationReport]:
    """Solve the CMC leaf with H = H_{g_m}(S_R) for every radius of the ladder.

    Reports ||u||_B and sup ||du/dt||_B along the ladder with their fitted slopes in R.
    """
    leaves = parallel_map(lambda radius: _solve_leaf(metric, grid, radius), radii, threads)
    surfaces = [surface for surface, _ in leaves]
    norms = [class_norm(grid, s.radius, s.u) for s in surfaces]
    derivative_norms = [derivative for _, derivative in leaves]
    bounds = [geometric_bounds(s) for s in surfaces]
    fit_norms = len(radii) >= 2 and min(norms) > 0.0  # noqa: PLR2004
    fit_derivatives = len(radii) >= 2 and min(derivative_norms) > 0.0  # noqa: PLR2004
    report = FoliationReport(
        radii=tuple(float(r) for r in radii),
        targets=tuple(schwarzschild_target(metric, r) for r in radii),
        class_norms=tuple(norms),
        sup_traceless=tuple(float(np.max(np.sqrt(s.traceless_squared))) for s in surfaces),
        derivative_norms=tuple(derivative_norms),
        areas=tuple(s.area for s in surfaces),
        slope=loglog_slope(radii, norms).slope if fit_norms else None,
        derivative_slope=loglog_slope(radii, derivative_norms).slope if fit_derivatives else None,
        within_bounds=all(b.within_bounds for b in bounds),
    )
    return surfaces, report


def curvature_estimate_check(surfaces: list[GraphSurface], gamma: float = 1.0) -> CurvatureEstimateReport:
    """Fit sup|h_0| against R over solved leaves and check the mean curvature bounds.

    The constant is max sup|h_0| R^(n-1+gamma) over the sweep. A sweep whose leaves are
    umbilic to rounding (exact Schwarzschild) reports no slope.

    Raises:
        PreconditionError: Fewer than two leaves.

    """
    if len(surfaces) < 2:  # noqa: PLR2004
        raise PreconditionError(ErrorMessage.INSUFFICIENT_SWEEP, points=len(surfaces))
    n = surfaces[0].dimension
    radii = [s.radius for s in surfaces]
    sup = [float(np.max(np.sqrt(s.traceless_squared))) for s in surfaces]
    umbilic = all(value <= 1e-8 * r ** (1 - n) for value, r in zip(sup, radii, strict=True))
    bounds = [geometric_bounds(s) for s in surfaces]
    fit = None if umbilic else loglog_slope(radii, sup)
    return CurvatureEstimateReport(
        radii=tuple(radii),
        sup_traceless=tuple(sup),
        slope=fit.slope if fit else None,
        constant=max(value * r ** (n - 1 + gamma) for value, r in zip(sup, radii, strict=True)) if fit else None,
        umbilic=umbilic,
        scaled_mean_curvature_range=(
            min(b.min_scaled_mean_curvature for b in bounds),
            max(b.max_scaled_mean_curvature for b in bounds),
        ),
        within_bounds=all(b.within_bounds for b in bounds),
    )
