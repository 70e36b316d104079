"""Subcommand recipes: turn an `ExperimentConfig` into checks, reports, and tables.

Recipes never write to the console. Progress goes through the optional callback and
everything else comes back in the `ExperimentResult`.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from isofoliate.domain.config import ExperimentConfig
from isofoliate.domain.enums import CommandName, CurvatureMethod
from isofoliate.domain.results import Check, ExperimentResult, Row

from .bray_chart import (
    DeficitSweep,
    deficit_sweep,
    expansion_errors,
    gain_check,
    quadratic_form_bounds,
    solve_chart,
    solve_matching,
)
from .cmc import (
    continuation_path,
    curvature_estimate_check,
    foliation_sweep,
    jacobi_spectrum,
    newton_solve_cmc,
    schwarzschild_target,
)
from .curvature import curvature_at, perturbation_decay_report
from .grid import SphereGrid
from .iso_mass import (
    dominates,
    iso_mass_exhaustion,
    isoperimetric_envelope,
    modified_iso_mass,
    profile_deficits,
    volume_lower_bound_check,
)
from .mass_center import alternative_center_check, com_convergence_experiment
from .metric import MetricField
from .quasilocal import RotProfile, hawking_profile
from .schwarzschild import schwarzschild_volume
from .surface import GraphSurface, build_surface

__all__ = [
    "RECIPES",
    "Progress",
    "build_grid",
    "build_metric",
    "curvature_agreement",
    "deficit_floor_check",
    "run_bray_chart",
    "run_center_of_mass",
    "run_cmc_solve",
    "run_foliation_sweep",
    "run_hawking_profile",
    "run_iso_mass",
    "run_jacobi_spectrum",
    "run_report_geometry",
    "run_volume_comparison",
]

type Progress = Callable[[str], None]

EUCLIDEAN_KERNEL_TOLERANCE = 1e-8
ALTERNATIVE_OFFSET = 0.5


def _quiet(_: str) -> None:
    return None


def build_metric(config: ExperimentConfig) -> MetricField:
    """The metric selected by the manifold section and the pattern seed."""
    return MetricField(config.manifold, config.seed)


def build_grid(config: ExperimentConfig) -> SphereGrid:
    """Full grid for n = 3, axisymmetric grid otherwise."""
    n = config.manifold.dimension
    if n == 3:  # noqa: PLR2004
        return SphereGrid.full(config.grid.colatitudes, config.grid.longitudes)
    return SphereGrid.axisymmetric(n, config.grid.axisymmetric_nodes)


def _sample_directions(n: int) -> np.ndarray:
    """Coordinate axes and the normalized diagonal."""
    return np.vstack([np.eye(n), np.full((1, n), 1.0 / np.sqrt(n))])


def curvature_agreement(metric: MetricField, radii: tuple[float, ...]) -> tuple[float, list[Row]]:
    """Largest relative difference between two curvature evaluations along the radius ladder.

    Exact Schwarzschild compares the closed form with finite differences; perturbed metrics
    compare finite differences with the exact-derivative jet.
    """
    reference, candidate = (
        (CurvatureMethod.CLOSED_FORM, CurvatureMethod.FINITE_DIFFERENCE)
        if metric.is_schwarzschild
        else (CurvatureMethod.JET, CurvatureMethod.FINITE_DIFFERENCE)
    )
    directions = _sample_directions(metric.dimension)
    rows: list[Row] = []
    worst = 0.0
    for radius in radii:
        points = metric.translation + radius * directions
        exact = curvature_at(metric, points, reference)
        approximate = curvature_at(metric, points, candidate)
        scale = float(np.max(np.abs(exact.riemann)))
        error = float(np.max(np.abs(exact.riemann - approximate.riemann))) / scale if scale > 0.0 else 0.0
        worst = max(worst, error)
        normal = directions / np.sqrt(np.einsum("ni,nij,nj->n", directions, exact.metric, directions))[:, None]
        rows.append(
            {
                "r": radius,
                "riemann_norm": scale,
                "ricci_normal": float(np.einsum("i,ij,j->", normal[0], exact.ricci[0], normal[0])),
                "scalar": float(np.max(np.abs(exact.scalar))),
                "relative_error": error,
            },
        )
    return worst, rows


def run_report_geometry(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Curvature along the radius ladder, cross-checked between evaluation paths."""
    metric = build_metric(config)
    result = ExperimentResult(CommandName.REPORT_GEOMETRY)
    progress(f"curvature on {len(config.ladders.radii)} radii")
    error, rows = curvature_agreement(metric, config.ladders.radii)
    result.tables["curvature"] = rows
    result.checks.append(Check.at_most("curvature relative error", error, config.tolerances.curvature))
    if not metric.is_schwarzschild:
        decay = perturbation_decay_report(metric, config.ladders.radii, seed=config.seed)
        result.add_report("decay", decay)
        result.checks.append(Check.holds("perturbation decay within C", decay.within_bounds))
    result.reports["volumes"] = {
        str(r): schwarzschild_volume(metric.mass, metric.dimension, r) for r in config.ladders.radii
    }
    return result


def run_hawking_profile(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Hawking mass on the centered Schwarzschild profile and on the matched Bray cone."""
    spec = config.manifold.with_perturbation(amplitude=0.0)
    n, m = spec.dimension, spec.mass
    radii = np.asarray(config.ladders.profile_radii)
    result = ExperimentResult(CommandName.HAWKING_PROFILE)

    progress("schwarzschild profile")
    schwarzschild = hawking_profile(RotProfile.schwarzschild(spec, radii))
    masses = np.asarray(schwarzschild.masses)
    variation = float(np.max(np.abs(masses - m))) / (m if m > 0.0 else 1.0)
    result.add_report("schwarzschild", schwarzschild)
    result.checks.append(Check.at_most("hawking mass relative variation", variation, config.tolerances.hawking))

    if m > 0.0:
        progress("cone profile")
        alpha, _ = solve_matching(m, n, config.surface.radius)
        cone = hawking_profile(RotProfile.cone(n, alpha, radii))
        result.add_report("cone", cone)
        result.checks.append(Check.holds("hawking mass monotone on the cone", cone.monotone))

    result.tables["hawking"] = [
        {"r": float(r), "mass": mass} for r, mass in zip(radii, schwarzschild.masses, strict=True)
    ]
    return result


def run_bray_chart(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Bray chart of S_R, its sandwich and gain checks, and the expansion error slopes."""
    n, m, radius = config.manifold.dimension, config.manifold.mass, config.surface.radius
    result = ExperimentResult(CommandName.BRAY_CHART)

    progress(f"chart at r = {radius:g}")
    chart = solve_chart(m, n, radius)
    result.add_report("chart", chart.header())
    result.tables["chart"] = [
        {"s": float(s), "rho": float(rho), "u": float(u)} for s, rho, u in zip(chart.s, chart.rho, chart.u, strict=True)
    ]
    bounds = quadratic_form_bounds(chart)
    result.add_report("quadratic_form", bounds)
    result.checks.append(Check.holds("metric sandwich", bounds.holds))
    for tau in config.ladders.taus:
        gain = gain_check(chart, tau)
        result.add_report(f"gain_{tau:g}", gain)
        result.checks.append(Check.at_least(f"gain at tau = {tau:g}", gain.gain, 0.0))

    radii = config.ladders.chart_radii
    if len(radii) >= 2:  # noqa: PLR2004
        progress("expansion errors")
        errors = expansion_errors(m, n, radii)
        result.add_report("expansion", errors)
        tolerance = config.tolerances.chart_slope
        result.checks.append(Check.near("alpha error slope", errors.alpha_slope, errors.predicted_slope, tolerance))
        result.checks.append(Check.near("c error slope", errors.c_slope, errors.predicted_slope, tolerance))
    return result


def deficit_floor_check(sweep: DeficitSweep, fraction: float) -> Check:
    """Smallest normalized deficit against ``fraction`` of the smallest one at the innermost radius."""
    floor = sweep.ratio_floor(fraction)
    if sweep.min_ratio is None or floor is None:
        return Check.holds("normalized deficit bounded below", False)  # noqa: FBT003
    return Check.at_least("normalized deficit bounded below", sweep.min_ratio, floor)


def run_volume_comparison(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Off-center deficits over (r, |p|/r, tau) and the profile against its competitors."""
    n, m = config.manifold.dimension, config.manifold.mass
    ladders = config.ladders
    result = ExperimentResult(CommandName.VOLUME_COMPARISON)

    progress(f"{len(ladders.radii) * len(ladders.offsets) * len(ladders.taus)} competitors")
    sweep = deficit_sweep(m, n, ladders.radii, ladders.offsets, ladders.taus, config.threads)
    result.add_report("sweep", sweep)
    result.tables["deficits"] = [
        {
            "r": check.r,
            "offset": check.offset / check.r,
            "tau": check.tau,
            "deficit": check.deficit,
            "eta": check.eta,
            "ratio": check.ratio,
        }
        for check in sweep.checks
    ]
    result.checks.append(Check.holds("all deficits positive", sweep.all_positive))
    if sweep.min_ratio is not None:
        result.checks.append(deficit_floor_check(sweep, config.tolerances.deficit_floor))

    comparison = profile_deficits(m, n, ladders.volumes)
    result.add_report("profile", comparison)
    result.checks.append(Check.holds("centered profile beats competitors", comparison.beats_competitors))
    return result


def _seed_surface(config: ExperimentConfig, grid: SphereGrid) -> np.ndarray:
    surface = config.surface
    if surface.seed_amplitude == 0.0:
        return np.zeros(grid.size)
    return surface.seed_amplitude * surface.radius * grid.mode_values(surface.seed_degree)


def run_cmc_solve(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """One CMC leaf: Newton from a seeded graph, or continuation for perturbed metrics."""
    metric, grid = build_metric(config), build_grid(config)
    radius = config.surface.radius
    target = schwarzschild_target(metric, radius)
    result = ExperimentResult(CommandName.CMC_SOLVE)

    if metric.is_schwarzschild:
        progress(f"newton at R = {radius:g}")
        initial = build_surface(grid, radius, _seed_surface(config, grid), metric, metric.translation)
        solution = newton_solve_cmc(metric, target, initial, tolerance=config.tolerances.newton)
        surface, report = solution.surface, solution.report
        result.add_report("newton", report)
        result.tables["newton"] = [
            {"iteration": index, "residual": residual, "step": step}
            for index, (residual, step) in enumerate(zip(report.residuals, (0.0, *report.step_norms), strict=True))
        ]
    else:
        progress(f"continuation at R = {radius:g}")
        surface, path = continuation_path(metric, target, grid, radius)
        result.add_report("continuation", path)
        result.tables["continuation"] = [
            {"t": t, "derivative_norm": norm}
            for t, norm in zip(path.t_values[1:], path.derivative_norms, strict=True)
        ]

    residual = float(np.max(np.abs(surface.mean_curvature - target)))
    result.reports["residual"] = residual
    result.reports["sup_u"] = float(np.max(np.abs(surface.u)))
    result.checks.append(Check.at_most("mean curvature residual", residual, config.tolerances.newton * abs(target)))
    return result


def _leaf(config: ExperimentConfig, metric: MetricField, grid: SphereGrid) -> GraphSurface:
    radius = config.surface.radius
    if metric.is_schwarzschild:
        return build_surface(grid, radius, np.zeros(grid.size), metric, metric.translation)
    surfaces, _ = foliation_sweep(metric, (radius,), grid)
    return surfaces[0]


def run_jacobi_spectrum(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Jacobi and Laplacian spectra of the leaf at R against their predictions."""
    metric, grid = build_metric(config), build_grid(config)
    result = ExperimentResult(CommandName.JACOBI_SPECTRUM)
    progress(f"spectrum at R = {config.surface.radius:g}")
    surface = _leaf(config, metric, grid)
    refined = config.grid.refined_colatitudes if grid.is_full else None
    spectrum = jacobi_spectrum(
        surface,
        config.surface.eigenvalues,
        check_refinement=True,
        refined_resolution=refined,
    )
    result.add_report("spectrum", spectrum)
    result.tables["spectrum"] = [
        {"index": index, "eigenvalue": value} for index, value in enumerate(spectrum.eigenvalues)
    ]

    tolerance = config.tolerances.spectrum
    if spectrum.lambda1_ratio is None:
        bound = EUCLIDEAN_KERNEL_TOLERANCE / spectrum.radius**2
        result.checks.append(Check.at_most("euclidean lambda_1", abs(spectrum.lambda1), bound))
    else:
        result.checks.append(Check.near("lambda_1 ratio", spectrum.lambda1_ratio, 1.0, tolerance))
        result.checks.append(Check.at_most("mu_0 error ratio", spectrum.mu0_error_ratio or 0.0, tolerance))
    if spectrum.converged is not None:
        result.checks.append(Check.holds("lambda_1 converged under refinement", spectrum.converged))
    return result


def run_foliation_sweep(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Leaves along the radius ladder, their ||u||_B scaling, and the curvature estimate."""
    metric, grid = build_metric(config), build_grid(config)
    radii = config.ladders.radii
    result = ExperimentResult(CommandName.FOLIATION_SWEEP)
    progress(f"{len(radii)} leaves")
    surfaces, report = foliation_sweep(metric, radii, grid, config.threads)
    estimate = curvature_estimate_check(surfaces, config.manifold.gamma)
    result.add_report("foliation", report)
    result.add_report("curvature_estimate", estimate)
    result.tables["foliation"] = [
        {"R": r, "class_norm": norm, "sup_traceless": sup, "area": area}
        for r, norm, sup, area in zip(report.radii, report.class_norms, report.sup_traceless, report.areas, strict=True)
    ]
    result.checks.append(Check.holds("geometric bounds", report.within_bounds))
    result.checks.append(Check.holds("curvature estimate", estimate.within_bounds))
    if report.slope is not None:
        gamma = config.manifold.gamma
        result.checks.append(Check.near("class norm slope", report.slope, -gamma, config.tolerances.slope))
    return result


def run_center_of_mass(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Flux center, leaf centroids, and the off-center integral identity."""
    metric, grid = build_metric(config), build_grid(config)
    ladders = config.ladders
    result = ExperimentResult(CommandName.CENTER_OF_MASS)

    progress("center of mass")
    convergence, center = com_convergence_experiment(metric, ladders.radii, ladders.center_radii, grid, config.threads)
    result.add_report("center", center)
    result.add_report("convergence", convergence)
    result.tables["center"] = [
        {"r": r, **{f"c{index + 1}": value for index, value in enumerate(partial)}}
        for r, partial in zip(center.radii, center.partials, strict=True)
    ]
    tolerance = config.tolerances.center
    if metric.is_schwarzschild:
        expected = metric.translation
        flux_error = float(np.linalg.norm(np.asarray(center.center) - expected))
        leaf_error = float(np.linalg.norm(np.asarray(convergence.centroids[-1]) - expected))
        result.checks.append(Check.at_most("flux center error", flux_error, tolerance))
        result.checks.append(Check.at_most("largest leaf centroid error", leaf_error, tolerance))
    elif convergence.slope is not None:
        result.checks.append(Check.at_most("leaf centroid distance slope", convergence.slope, 0.0))

    progress("off-center integral identity")
    offset = np.zeros(metric.dimension)
    offset[0] = ALTERNATIVE_OFFSET
    alternative = alternative_center_check(metric, center.center, offset, ladders.center_radii, 0, grid)
    result.add_report("alternative", alternative)
    if alternative.slope is not None:
        tolerance = config.tolerances.slope
        result.checks.append(
            Check.near("off-center residual slope", alternative.slope, alternative.predicted_slope, tolerance),
        )
    return result


def run_iso_mass(config: ExperimentConfig, progress: Progress = _quiet) -> ExperimentResult:
    """Isoperimetric mass along coordinate balls and on the trial-ball envelope at matched volumes."""
    metric, grid = build_metric(config), build_grid(config)
    result = ExperimentResult(CommandName.ISO_MASS)

    progress(f"exhaustion on {len(config.ladders.mass_radii)} radii")
    plain = iso_mass_exhaustion(metric, config.ladders.mass_radii, grid, config.threads)
    progress("isoperimetric envelope")
    envelope = isoperimetric_envelope(metric, plain, grid, threads=config.threads)
    modified = modified_iso_mass(envelope)
    result.add_report("iso_mass", plain)
    result.add_report("modified", modified)
    result.add_report("volume_bound", volume_lower_bound_check(modified))
    result.tables["iso_mass"] = [
        {
            "r": r,
            "volume": volume,
            "area": area,
            "quasi_mass": quasi,
            "envelope_area": point.area,
            "envelope_source": str(point.source),
            "modified_quasi_mass": modified_quasi,
        }
        for r, volume, area, quasi, point, modified_quasi in zip(
            plain.radii, plain.volumes, plain.areas, plain.quasi_masses, envelope, modified.quasi_masses, strict=True
        )
    ]

    if metric.is_schwarzschild:
        result.checks.append(Check.near("iso mass", plain.mass, metric.mass, config.tolerances.iso_mass))
    result.checks.append(Check.holds("modified mass dominates at matched volumes", dominates(modified, plain)))
    result.checks.append(
        Check.at_least("modified minus plain limit", modified.mass - plain.mass, -config.tolerances.iso_mass),
    )
    return result


RECIPES: dict[CommandName, Callable[[ExperimentConfig, Progress], ExperimentResult]] = {
    CommandName.REPORT_GEOMETRY: run_report_geometry,
    CommandName.HAWKING_PROFILE: run_hawking_profile,
    CommandName.BRAY_CHART: run_bray_chart,
    CommandName.VOLUME_COMPARISON: run_volume_comparison,
    CommandName.CMC_SOLVE: run_cmc_solve,
    CommandName.JACOBI_SPECTRUM: run_jacobi_spectrum,
    CommandName.FOLIATION_SWEEP: run_foliation_sweep,
    CommandName.CENTER_OF_MASS: run_center_of_mass,
    CommandName.ISO_MASS: run_iso_mass,
}
