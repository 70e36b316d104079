"""Feature: Constant mean curvature surfaces and the Jacobi operator"""

import numpy as np
import pytest
from assertpy import assert_that

from isofoliate.domain.errors import PreconditionError
from isofoliate.lab.cmc import (
    continuation_path,
    curvature_estimate_check,
    foliation_sweep,
    jacobi_spectrum,
    laplacian_spectrum,
    newton_solve_cmc,
    schwarzschild_target,
)
from isofoliate.lab.grid import SphereGrid
from isofoliate.lab.metric import MetricField
from isofoliate.lab.schwarzschild import sphere_mean_curvature_schwarzschild
from isofoliate.lab.surface import build_surface


@pytest.fixture
def coarse() -> SphereGrid:
    return SphereGrid.full(12)


class TestNewton:
    """Scenario: Newton iteration for H(u) = H_target"""

    def test_coordinate_sphere_needs_no_iteration(self, coarse: SphereGrid, schwarzschild: MetricField) -> None:
        initial = build_surface(coarse, 20.0, np.zeros(coarse.size), schwarzschild)

        report = newton_solve_cmc(schwarzschild, schwarzschild_target(schwarzschild, 20.0), initial).report

        assert_that(report.iterations).is_equal_to(0)
        assert_that(report.converged).is_true()

    @pytest.mark.parametrize(("degree", "order"), [(1, 0), (2, 0), (3, 2)])
    def test_perturbed_seed_returns_to_the_sphere(
        self,
        coarse: SphereGrid,
        schwarzschild: MetricField,
        degree: int,
        order: int,
    ) -> None:
        radius = 20.0
        seed = 0.05 * radius * coarse.mode_values(degree, order)
        initial = build_surface(coarse, radius, seed, schwarzschild)

        solution = newton_solve_cmc(schwarzschild, schwarzschild_target(schwarzschild, radius), initial, 1e-12)

        assert_that(solution.report.sup_u).is_less_than(1e-8)
        assert_that(solution.report.iterations).is_less_than_or_equal_to(12)
        assert_that(list(solution.report.residuals)).is_sorted(reverse=True)

    def test_target_ignores_the_perturbation(self, perturbed: MetricField) -> None:
        expected = sphere_mean_curvature_schwarzschild(perturbed.spec.with_perturbation(amplitude=0.0), 50.0)

        assert_that(schwarzschild_target(perturbed, 50.0)).is_close_to(expected, 1e-15)


class TestContinuation:
    """Scenario: Following the metric path from g_m to g"""

    def test_reaches_the_perturbed_metric(self, coarse: SphereGrid, perturbed: MetricField) -> None:
        target = schwarzschild_target(perturbed, 50.0)

        surface, report = continuation_path(perturbed, target, coarse, 50.0)

        assert_that(report.t_values[0]).is_equal_to(1.0)
        assert_that(report.t_values[-1]).is_equal_to(0.0)
        assert_that(report.derivative_norms).is_length(len(report.t_values) - 1)
        assert_that(report.class_norm).is_greater_than(0.0).is_less_than(0.1)
        assert_that(float(np.max(np.abs(surface.mean_curvature - target)))).is_less_than(1e-9 * target)


class TestSpectrum:
    """Scenario: Jacobi and Laplacian spectra of spheres"""

    def test_euclidean_sphere(self, coarse: SphereGrid, euclidean: MetricField) -> None:
        surface = build_surface(coarse, 10.0, np.zeros(coarse.size), euclidean)

        report = jacobi_spectrum(surface)

        assert_that(abs(report.lambda1)).is_less_than(1e-10)
        assert_that(report.mu0).is_close_to(-0.02, 1e-12)
        assert_that(report.mu0).is_close_to(report.predicted_mu0, 1e-12)
        assert_that(report.lambda1_ratio).is_none()
        assert_that(report.projector_defect).is_less_than(1e-12)

    def test_schwarzschild_lambda1_matches_the_mass_term(self, coarse: SphereGrid, schwarzschild: MetricField) -> None:
        surface = build_surface(coarse, 1e3, np.zeros(coarse.size), schwarzschild)

        report = jacobi_spectrum(surface, check_refinement=True)

        assert_that(report.lambda1_ratio).is_close_to(1.0, 0.05)
        assert_that(report.mu0_error_ratio).is_less_than(0.05)
        assert_that(report.converged).is_true()
        assert_that(report.eigenvalues).is_length(6)

    def test_laplacian_of_round_sphere(self, coarse: SphereGrid, euclidean: MetricField) -> None:
        surface = build_surface(coarse, 2.0, np.zeros(coarse.size), euclidean)

        values = laplacian_spectrum(surface, k=5)

        assert_that(np.allclose(values, [0.0, 0.5, 0.5, 0.5, 1.5], atol=1e-10)).is_true()

    def test_requires_three_eigenvalues(self, coarse: SphereGrid, euclidean: MetricField) -> None:
        surface = build_surface(coarse, 10.0, np.zeros(coarse.size), euclidean)

        assert_that(jacobi_spectrum).raises(PreconditionError).when_called_with(surface, 2)


class TestFoliation:
    """Scenario: Leaves along a radius ladder"""

    def test_schwarzschild_leaves_are_coordinate_spheres(self, coarse: SphereGrid, schwarzschild: MetricField) -> None:
        surfaces, report = foliation_sweep(schwarzschild, (20.0, 40.0, 80.0), coarse)

        assert_that(surfaces).is_length(3)
        assert_that(max(report.class_norms)).is_less_than(1e-10)
        assert_that(report.within_bounds).is_true()
        assert_that(list(report.areas)).is_sorted()

    def test_curvature_estimate_on_umbilic_leaves(self, coarse: SphereGrid, schwarzschild: MetricField) -> None:
        surfaces, _ = foliation_sweep(schwarzschild, (20.0, 40.0), coarse)

        report = curvature_estimate_check(surfaces)

        assert_that(report.umbilic).is_true()
        assert_that(report.slope).is_none()
        assert_that(report.within_bounds).is_true()

    def test_curvature_estimate_needs_two_leaves(self, coarse: SphereGrid, schwarzschild: MetricField) -> None:
        surfaces, _ = foliation_sweep(schwarzschild, (20.0,), coarse)

        assert_that(curvature_estimate_check).raises(PreconditionError).when_called_with(surfaces)

    def test_parallel_sweep_matches_serial(self, coarse: SphereGrid, perturbed: MetricField) -> None:
        _, serial = foliation_sweep(perturbed, (50.0, 100.0), coarse)
        _, parallel = foliation_sweep(perturbed, (50.0, 100.0), coarse, threads=2)

        assert_that(np.allclose(parallel.class_norms, serial.class_norms, rtol=1e-12)).is_true()
        assert_that(serial.slope).is_not_none()
