"""Feature: Graph surfaces over coordinate spheres"""

import math

import numpy as np
import pytest
from assertpy import assert_that

from isofoliate.domain.errors import DegenerateGeometryError, UnsupportedConfigurationError
from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.lab.grid import SphereGrid
from isofoliate.lab.metric import MetricField
from isofoliate.lab.schwarzschild import sphere_area_schwarzschild, sphere_mean_curvature_schwarzschild
from isofoliate.lab.surface import build_surface, class_norm, geometric_bounds


class TestRoundSpheres:
    """Scenario: Round spheres in flat space"""

    def test_area_and_mean_curvature(self, grid: SphereGrid, euclidean: MetricField) -> None:
        surface = build_surface(grid, 2.0, np.zeros(grid.size), euclidean)

        assert_that(surface.area).is_close_to(16.0 * math.pi, 1e-10)
        assert_that(np.allclose(surface.mean_curvature, 1.0, atol=1e-11)).is_true()
        assert_that(float(np.max(surface.traceless_squared))).is_less_than(1e-20)

    def test_constant_graph_is_a_larger_sphere(self, grid: SphereGrid, euclidean: MetricField) -> None:
        surface = build_surface(grid, 2.0, np.full(grid.size, 1.0), euclidean)

        assert_that(surface.area).is_close_to(36.0 * math.pi, 1e-10)
        assert_that(np.allclose(surface.mean_curvature, 2.0 / 3.0, atol=1e-11)).is_true()

    def test_surface_laplacian(self, grid: SphereGrid, euclidean: MetricField) -> None:
        surface = build_surface(grid, 2.0, np.zeros(grid.size), euclidean)
        values = grid.mode_values(1)

        assert_that(np.allclose(surface.laplacian(values), -0.5 * values, atol=1e-10)).is_true()

    def test_off_center_euclidean_area(self, grid: SphereGrid, schwarzschild: MetricField) -> None:
        surface = build_surface(grid, 5.0, np.zeros(grid.size), schwarzschild, center=np.array([0.0, 0.0, 3.0]))

        assert_that(surface.euclidean_area).is_close_to(100.0 * math.pi, 1e-9)
        assert_that(surface.area).is_greater_than(surface.euclidean_area)


class TestSchwarzschildSpheres:
    """Scenario: Centered spheres agree with the closed forms"""

    def test_full_grid(self, grid: SphereGrid, schwarzschild: MetricField) -> None:
        surface = build_surface(grid, 3.0, np.zeros(grid.size), schwarzschild)

        assert_that(surface.area).is_close_to(sphere_area_schwarzschild(schwarzschild.spec, 3.0), 1e-9)
        expected = sphere_mean_curvature_schwarzschild(schwarzschild.spec, 3.0)
        assert_that(np.allclose(surface.mean_curvature, expected, rtol=1e-10)).is_true()

    @pytest.mark.parametrize("n", [4, 5])
    def test_axisymmetric_grid(self, n: int) -> None:
        metric = MetricField(ManifoldSpec(dimension=n, mass=2.0))
        grid = SphereGrid.axisymmetric(n, 16)

        surface = build_surface(grid, 3.0, np.zeros(grid.size), metric)

        assert_that(surface.area).is_close_to(sphere_area_schwarzschild(metric.spec, 3.0), 1e-8)
        expected = sphere_mean_curvature_schwarzschild(metric.spec, 3.0)
        assert_that(np.allclose(surface.mean_curvature, expected, rtol=1e-10)).is_true()

    def test_large_spheres_satisfy_geometric_bounds(self, grid: SphereGrid, schwarzschild: MetricField) -> None:
        report = geometric_bounds(build_surface(grid, 100.0, np.zeros(grid.size), schwarzschild))

        assert_that(report.within_bounds).is_true()
        assert_that(report.scaled_curvature).is_greater_than(0.0)


class TestRejections:
    """Scenario: Degenerate or unsupported surfaces"""

    def test_collapsed_graph(self, grid: SphereGrid, euclidean: MetricField) -> None:
        u = np.full(grid.size, -2.0)

        assert_that(build_surface).raises(DegenerateGeometryError).when_called_with(grid, 2.0, u, euclidean)

    def test_axisymmetric_needs_axial_center(self) -> None:
        metric = MetricField(ManifoldSpec(dimension=4, mass=2.0))
        grid = SphereGrid.axisymmetric(4, 12)

        assert_that(build_surface).raises(UnsupportedConfigurationError).when_called_with(
            grid,
            5.0,
            np.zeros(grid.size),
            metric,
            np.array([1.0, 0.0, 0.0, 0.0]),
        )


class TestClassNorm:
    """Scenario: Scaled C^2 norm of graph functions"""

    def test_constant_function(self, grid: SphereGrid) -> None:
        assert_that(class_norm(grid, 10.0, np.full(grid.size, 0.5))).is_close_to(0.05, 1e-12)

    def test_zero_function(self, grid: SphereGrid) -> None:
        assert_that(class_norm(grid, 10.0, np.zeros(grid.size))).is_close_to(0.0, 1e-15)
