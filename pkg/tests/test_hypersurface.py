"""Feature: Gauss, Codazzi, and Simons identities on surfaces"""

import numpy as np
from assertpy import assert_that

from isofoliate.domain.errors import UnsupportedConfigurationError
from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.lab.cmc import simons_residual
from isofoliate.lab.grid import SphereGrid
from isofoliate.lab.hypersurface import ExtrinsicCalculus, gauss_codazzi_residual, simons_balance
from isofoliate.lab.metric import MetricField
from isofoliate.lab.surface import build_surface

OFF_CENTER = np.array([0.0, 0.0, 2.0])


class TestGaussCodazzi:
    """Scenario: Structure equations of embedded surfaces"""

    def test_round_sphere(self, grid: SphereGrid, euclidean: MetricField) -> None:
        residual = gauss_codazzi_residual(build_surface(grid, 2.0, np.zeros(grid.size), euclidean))

        assert_that(residual.codazzi).is_less_than(1e-10)
        assert_that(residual.gauss / residual.gauss_scale).is_less_than(1e-10)

    def test_off_center_schwarzschild_sphere(self, schwarzschild: MetricField) -> None:
        grid = SphereGrid.full(24)
        surface = build_surface(grid, 5.0, np.zeros(grid.size), schwarzschild, OFF_CENTER)

        residual = gauss_codazzi_residual(surface)

        assert_that(residual.codazzi / residual.codazzi_scale).is_less_than(1e-6)
        assert_that(residual.gauss / residual.gauss_scale).is_less_than(1e-6)


class TestContractions:
    """Scenario: Full contractions of tangential tensors"""

    def test_metric_traces_to_surface_dimension(self, grid: SphereGrid, schwarzschild: MetricField) -> None:
        calculus = ExtrinsicCalculus(build_surface(grid, 5.0, np.zeros(grid.size), schwarzschild, OFF_CENTER))

        traces = calculus.inner(calculus.metric_lower, calculus.metric_lower)

        assert_that(traces.shape).is_equal_to((grid.size,))
        assert_that(np.allclose(traces, 2.0, atol=1e-10)).is_true()

    def test_traceless_norm_matches_chart_components(self, grid: SphereGrid, schwarzschild: MetricField) -> None:
        surface = build_surface(grid, 5.0, np.zeros(grid.size), schwarzschild, OFF_CENTER)
        calculus = ExtrinsicCalculus(surface)

        norm = calculus.inner(calculus.traceless, calculus.traceless)

        assert_that(float(np.max(surface.traceless_squared))).is_greater_than(0.0)
        assert_that(np.allclose(norm, surface.traceless_squared, rtol=1e-9, atol=1e-14)).is_true()


class TestSimons:
    """Scenario: Simons identity for the traceless second fundamental form"""

    def test_umbilic_sphere_balances_trivially(self, grid: SphereGrid, schwarzschild: MetricField) -> None:
        balance = simons_balance(build_surface(grid, 10.0, np.zeros(grid.size), schwarzschild))

        assert_that(float(np.max(np.abs(balance.lhs - balance.rhs)))).is_less_than(1e-10)

    def test_residual_decreases_with_resolution(self, schwarzschild: MetricField) -> None:
        residuals = []
        for colatitudes in (8, 16):
            grid = SphereGrid.full(colatitudes)
            residuals.append(simons_residual(build_surface(grid, 5.0, np.zeros(grid.size), schwarzschild, OFF_CENTER)))

        assert_that(residuals[1]).is_less_than(residuals[0])
        assert_that(residuals[1]).is_less_than(1e-2)

    def test_off_center_leaf_balances(self, schwarzschild: MetricField) -> None:
        grid = SphereGrid.full(24)
        balance = simons_balance(build_surface(grid, 5.0, np.zeros(grid.size), schwarzschild, OFF_CENTER))

        assert_that(balance.scale).is_greater_than(0.0)
        assert_that(balance.lhs.shape).is_equal_to((grid.size,))
        assert_that(balance.residual).is_less_than(1e-3)

    def test_needs_full_grid(self) -> None:
        metric = MetricField(ManifoldSpec(dimension=4, mass=2.0))
        grid = SphereGrid.axisymmetric(4, 12)
        surface = build_surface(grid, 5.0, np.zeros(grid.size), metric)

        assert_that(ExtrinsicCalculus).raises(UnsupportedConfigurationError).when_called_with(surface)
