"""Acceptance suite: ten desk-scale checks of the numerical modules.

Every criterion has fixed parameters, so two runs produce identical numbers. A subset can
be selected by number; wall-clock runtimes are reported next to their budgets but do not
decide pass or fail.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from isofoliate.domain.enums import CommandName, Parity, ProfileSource
from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.domain.results import Check, ExperimentResult

from .bray_chart import deficit_sweep, expansion_errors, gain_check, solve_chart, solve_matching
from .cmc import foliation_sweep, jacobi_spectrum, newton_solve_cmc, schwarzschild_target, simons_residual
from .experiments import Progress, curvature_agreement, deficit_floor_check
from .grid import SphereGrid
from .iso_mass import dominates, iso_mass_exhaustion, isoperimetric_envelope, modified_iso_mass
from .mass_center import alternative_center_check, com_convergence_experiment
from .metric import MetricField
from .quasilocal import RotProfile, hawking_profile
from .surface import build_surface

__all__ = [
    "CRITERIA",
    "Criterion",
    "run_acceptance",
]

MASS = 2.0
CURVATURE_RADII = (2.0, 5.0, 10.0, 20.0, 50.0, 100.0)
CHART_RADII = (1e2, 10**2.5, 1e3)
DEFICIT_RADII = (50.0, 100.0, 200.0)
DEFICIT_OFFSETS = (1.5, 2.0)
DEFICIT_TAUS = (1.25, 1.5, 2.0)
DEFICIT_FLOOR = 0.5
SEED_FRACTION = 0.05
CONTINUATION_RADII = (50.0, 100.0, 200.0, 400.0)
CONTINUATION_AMPLITUDE = 0.01
SIMONS_LEVELS = (12, 16, 24)
SIMONS_ORDER = 4.0
SIMONS_FLOOR = 1e-9
CENTER_RADII = (100.0, 200.0, 400.0, 800.0)
LEAF_RADII = (50.0, 100.0, 200.0, 400.0)
MASS_RADII = (125.0, 250.0, 500.0, 1000.0)

type Outcome = tuple[list[Check], dict[str, Any]]


@dataclass(frozen=True)
class Criterion:
    """One numbered acceptance criterion with its runtime budget in seconds."""

    number: int
    title: str
    budget: float
    run: Callable[[int], Outcome]


def _curvature_oracle(_: int) -> Outcome:
    checks, errors = [], {}
    for n in (3, 4, 5):
        error, _ = curvature_agreement(MetricField(ManifoldSpec(dimension=n, mass=MASS)), CURVATURE_RADII)
        errors[str(n)] = error
        checks.append(Check.at_most(f"closed form vs finite differences, n = {n}", error, 1e-6))
    return checks, {"relative_errors": errors}


def _hawking_mass(_: int) -> Outcome:
    checks, variations = [], {}
    radii = np.geomspace(2.0, 100.0, 16)
    for n in (3, 4, 5, 6):
        spec = ManifoldSpec(dimension=n, mass=MASS)
        masses = np.asarray(hawking_profile(RotProfile.schwarzschild(spec, radii)).masses)
        variation = float(np.max(np.abs(masses - MASS))) / MASS
        variations[str(n)] = variation
        checks.append(Check.at_most(f"constant on Schwarzschild spheres, n = {n}", variation, 1e-10))
        alpha, _ = solve_matching(MASS, n, 100.0)
        cone = hawking_profile(RotProfile.cone(n, alpha, radii))
        checks.append(Check.at_most(f"monotone on the cone, n = {n}", cone.max_violation, 0.0))
    return checks, {"variations": variations}


def _bray_chart(_: int) -> Outcome:
    checks, details = [], {}
    for n in (3, 4):
        errors = expansion_errors(MASS, n, CHART_RADII)
        details[f"expansion_{n}"] = errors.model_dump(mode="json")
        checks.append(Check.near(f"alpha error slope, n = {n}", errors.alpha_slope, errors.predicted_slope, 0.2))
        checks.append(Check.near(f"c error slope, n = {n}", errors.c_slope, errors.predicted_slope, 0.2))
    chart = solve_chart(MASS, 3, 1e3)
    for tau in (1.5, 2.0):
        gain = gain_check(chart, tau)
        details[f"gain_{tau:g}"] = gain.model_dump(mode="json")
        checks.append(Check.at_least(f"gain positive, tau = {tau:g}", gain.gain, 0.0))
        checks.append(Check.at_most(f"gain vs leading term, tau = {tau:g}", gain.relative_error, 0.1))
    return checks, details


def _volume_comparison(threads: int) -> Outcome:
    sweep = deficit_sweep(MASS, 3, DEFICIT_RADII, DEFICIT_OFFSETS, DEFICIT_TAUS, threads)
    checks = [Check.holds("every deficit positive", sweep.all_positive)]
    checks.append(deficit_floor_check(sweep, DEFICIT_FLOOR))
    details = {
        "min_ratio": sweep.min_ratio,
        "ratio_floor": sweep.ratio_floor(DEFICIT_FLOOR),
        "growth_exponents": list(sweep.growth_exponents),
    }
    return checks, details


def _cmc_uniqueness(_: int) -> Outcome:
    metric = MetricField(ManifoldSpec(mass=MASS))
    radius = 20.0 * (MASS / 2.0)
    grid = SphereGrid.full()
    target = schwarzschild_target(metric, radius)
    checks, sups = [], {}
    for degree, order in ((1, 0), (1, 1), (2, 0), (3, 2)):
        seed = SEED_FRACTION * radius * grid.mode_values(degree, order)
        initial = build_surface(grid, radius, seed, metric)
        report = newton_solve_cmc(metric, target, initial, tolerance=1e-12).report
        sups[f"{degree},{order}"] = report.sup_u
        checks.append(Check.at_most(f"seed l = {degree}, m = {order} returns to S_R", report.sup_u, 1e-8))
    return checks, {"sup_u": sups}


def _jacobi_spectrum(_: int) -> Outcome:
    grid = SphereGrid.full()
    euclidean_radius = 10.0
    flat = build_surface(grid, euclidean_radius, np.zeros(grid.size), MetricField.euclidean(3))
    flat_spectrum = jacobi_spectrum(flat)
    radius = 1e3
    sphere = build_surface(grid, radius, np.zeros(grid.size), MetricField(ManifoldSpec(mass=MASS)))
    spectrum = jacobi_spectrum(sphere)
    checks = [
        Check.at_most("euclidean lambda_1", abs(flat_spectrum.lambda1), 1e-8 / euclidean_radius**2),
        Check.near("schwarzschild lambda_1 ratio", spectrum.lambda1_ratio, 1.0, 0.05),
        Check.at_most("mu_0 error against the mass term", spectrum.mu0_error_ratio or math.inf, 0.05),
    ]
    details = {"euclidean": flat_spectrum.model_dump(mode="json"), "schwarzschild": spectrum.model_dump(mode="json")}
    return checks, details


def _continuation_scaling(threads: int) -> Outcome:
    checks, slopes = [], {}
    grid = SphereGrid.full()
    for gamma in (0.5, 1.0):
        spec = ManifoldSpec(mass=MASS, gamma=gamma).with_perturbation(
            amplitude=CONTINUATION_AMPLITUDE,
            parity=Parity.MIXED,
        )
        _, report = foliation_sweep(MetricField(spec), CONTINUATION_RADII, grid, threads)
        slopes[str(gamma)] = report.slope
        checks.append(Check.near(f"class norm slope, gamma = {gamma:g}", report.slope, -gamma, 0.3))
    return checks, {"slopes": slopes}


def _simons_order(_: int) -> Outcome:
    metric = MetricField(ManifoldSpec(mass=MASS))
    center = np.array([0.0, 0.0, 3.0])
    residuals = []
    for colatitudes in SIMONS_LEVELS:
        grid = SphereGrid.full(colatitudes)
        residuals.append(simons_residual(build_surface(grid, 5.0, np.zeros(grid.size), metric, center)))
    checks = []
    levels = zip(SIMONS_LEVELS[:-1], SIMONS_LEVELS[1:], residuals[:-1], residuals[1:], strict=True)
    for coarse, fine, coarse_residual, fine_residual in levels:
        if fine_residual <= SIMONS_FLOOR:
            checks.append(Check.at_most(f"residual at {fine} colatitudes", fine_residual, SIMONS_FLOOR))
            continue
        order = math.log(coarse_residual / fine_residual) / math.log(fine / coarse)
        checks.append(Check.at_least(f"observed order {coarse} -> {fine}", order, SIMONS_ORDER))
    return checks, {"levels": list(SIMONS_LEVELS), "residuals": residuals}


def _center_of_mass(threads: int) -> Outcome:
    metric = MetricField(ManifoldSpec(mass=MASS, translation=(1.0, 0.0, 0.0)))
    grid = SphereGrid.full()
    convergence, center = com_convergence_experiment(metric, LEAF_RADII, CENTER_RADII, grid, threads)
    expected = np.array([1.0, 0.0, 0.0])
    alternative = alternative_center_check(metric, center.center, (0.5, 0.0, 0.0), CENTER_RADII, 0, grid)
    checks = [
        Check.at_most("flux center", float(np.linalg.norm(np.asarray(center.center) - expected)), 1e-2),
        Check.at_most("leaf centroid", float(np.linalg.norm(np.asarray(convergence.centroids[-1]) - expected)), 1e-2),
        Check.near("off-center residual slope", alternative.slope, alternative.predicted_slope, 0.3),
    ]
    return checks, {"center": list(center.center), "alternative_slope": alternative.slope}


def _iso_mass(threads: int) -> Outcome:
    metric = MetricField(ManifoldSpec(mass=MASS))
    schwarzschild = iso_mass_exhaustion(metric, MASS_RADII, threads=threads)
    euclidean = iso_mass_exhaustion(MetricField.euclidean(3), MASS_RADII, threads=threads)
    envelope = isoperimetric_envelope(metric, schwarzschild, threads=threads)
    modified = modified_iso_mass(envelope)
    checks = [
        Check.near("schwarzschild iso mass", schwarzschild.mass, MASS, 1e-3),
        Check.at_most("euclidean iso mass", abs(euclidean.mass), 1e-10),
        Check.holds("modified dominates plain at matched volumes", dominates(modified, schwarzschild)),
        Check.at_least("modified minus plain limit", modified.mass - schwarzschild.mass, -1e-3),
        Check.holds(
            "centered balls beat shifted balls",
            all(point.source is ProfileSource.CENTERED_SPHERE for point in envelope),
        ),
    ]
    return checks, {"schwarzschild": schwarzschild.mass, "euclidean": euclidean.mass, "modified": modified.mass}


CRITERIA: dict[int, Criterion] = {
    criterion.number: criterion
    for criterion in (
        Criterion(1, "curvature oracle agreement", 10.0, _curvature_oracle),
        Criterion(2, "hawking mass", 5.0, _hawking_mass),
        Criterion(3, "bray chart", 30.0, _bray_chart),
        Criterion(4, "effective volume comparison", 120.0, _volume_comparison),
        Criterion(5, "cmc uniqueness", 60.0, _cmc_uniqueness),
        Criterion(6, "jacobi spectrum", 120.0, _jacobi_spectrum),
        Criterion(7, "continuation scaling", 300.0, _continuation_scaling),
        Criterion(8, "simons identity", 60.0, _simons_order),
        Criterion(9, "center of mass", 300.0, _center_of_mass),
        Criterion(10, "isoperimetric mass", 30.0, _iso_mass),
    )
}


def run_acceptance(criteria: tuple[int, ...], threads: int = 1, progress: Progress | None = None) -> ExperimentResult:
    """Run the selected criteria in order and collect their checks, details, and runtimes."""
    result = ExperimentResult(CommandName.ACCEPTANCE)
    rows = []
    for number in sorted(set(criteria)):
        criterion = CRITERIA[number]
        if progress is not None:
            progress(f"criterion {number}: {criterion.title}")
        start = time.perf_counter()
        checks, details = criterion.run(threads)
        elapsed = time.perf_counter() - start
        for check in checks:
            result.checks.append(check.model_copy(update={"name": f"[{number}] {check.name}"}))
        result.reports[str(number)] = details
        result.runtimes[str(number)] = elapsed
        rows.append(
            {
                "criterion": number,
                "title": criterion.title,
                "passed": int(all(check.passed for check in checks)),
                "budget": criterion.budget,
            },
        )
    result.tables["acceptance"] = rows
    return result
