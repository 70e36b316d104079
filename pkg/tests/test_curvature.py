"""Feature: Curvature of the metric"""

import numpy as np
import pytest
from assertpy import assert_that

from isofoliate.domain.enums import CurvatureMethod, Parity
from isofoliate.domain.errors import PreconditionError, StepSizeError
from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.lab.curvature import (
    curvature_at,
    curvature_decomposition,
    kulkarni_nomizu,
    perturbation_decay_report,
)
from isofoliate.lab.metric import MetricField

POINTS = np.array([[2.0, 0.0, 0.0], [0.0, -3.0, 4.0], [10.0, 10.0, 1.0]])


class TestSchwarzschildCurvature:
    """Scenario: Closed form against the numerical paths"""

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_scalar_flat(self, n: int) -> None:
        metric = MetricField(ManifoldSpec(dimension=n, mass=2.0))
        x = np.zeros(n)
        x[0], x[-1] = 2.0, 1.5

        sample = curvature_at(metric, x)

        assert_that(float(abs(sample.scalar))).is_less_than(1e-12)
        assert_that(sample.method).is_equal_to(CurvatureMethod.CLOSED_FORM)

    @pytest.mark.parametrize("method", [CurvatureMethod.JET, CurvatureMethod.FINITE_DIFFERENCE])
    def test_numerical_paths_match_closed_form(self, schwarzschild: MetricField, method: CurvatureMethod) -> None:
        exact = curvature_at(schwarzschild, POINTS)
        numeric = curvature_at(schwarzschild, POINTS, method)

        scale = float(np.max(np.abs(exact.riemann)))
        assert_that(float(np.max(np.abs(numeric.riemann - exact.riemann))) / scale).is_less_than(1e-6)

    def test_radial_ricci_is_negative(self, schwarzschild: MetricField) -> None:
        x = np.array([3.0, 0.0, 0.0])
        sample = curvature_at(schwarzschild, x)
        g = sample.metric
        radial = x / np.linalg.norm(x) / np.sqrt(g[0, 0])

        assert_that(float(sample.ricci_along(radial))).is_less_than(0.0)

    def test_riemann_symmetries(self, schwarzschild: MetricField) -> None:
        assert_that(curvature_at(schwarzschild, POINTS).symmetry_defect()).is_less_than(1e-12)

    def test_translated_curvature(self) -> None:
        spec = ManifoldSpec(dimension=3, mass=2.0, translation=(1.0, 2.0, 0.0))
        shifted = curvature_at(MetricField(spec), np.array([4.0, 2.0, 0.0]))
        centered = curvature_at(MetricField(ManifoldSpec(dimension=3, mass=2.0)), np.array([3.0, 0.0, 0.0]))

        assert_that(np.allclose(shifted.riemann, centered.riemann, rtol=1e-12)).is_true()

    def test_closed_form_rejects_perturbation(self, perturbed: MetricField) -> None:
        assert_that(curvature_at).raises(PreconditionError).when_called_with(
            perturbed,
            POINTS[0],
            CurvatureMethod.CLOSED_FORM,
        )

    def test_stencil_must_stay_in_chart(self, schwarzschild: MetricField) -> None:
        assert_that(curvature_at).raises(StepSizeError).when_called_with(
            schwarzschild,
            np.array([0.501, 0.0, 0.0]),
            CurvatureMethod.FINITE_DIFFERENCE,
        )


class TestPerturbedCurvature:
    """Scenario: Curvature of perturbed metrics"""

    def test_jet_matches_finite_differences(self, perturbed: MetricField) -> None:
        jet = curvature_at(perturbed, POINTS, CurvatureMethod.JET)
        numeric = curvature_at(perturbed, POINTS, CurvatureMethod.FINITE_DIFFERENCE)

        scale = float(np.max(np.abs(jet.riemann)))
        assert_that(float(np.max(np.abs(numeric.riemann - jet.riemann))) / scale).is_less_than(1e-6)

    def test_default_method_is_finite_difference(self, perturbed: MetricField) -> None:
        assert_that(curvature_at(perturbed, POINTS[0]).method).is_equal_to(CurvatureMethod.FINITE_DIFFERENCE)


class TestDecomposition:
    """Scenario: Ricci and Weyl parts"""

    def test_round_sphere_form(self) -> None:
        g = np.eye(3)
        riemann = 0.5 * kulkarni_nomizu(g, g)

        assert_that(riemann[0, 1, 1, 0]).is_close_to(1.0, 1e-15)
        assert_that(riemann[0, 1, 0, 1]).is_close_to(-1.0, 1e-15)

    @pytest.mark.parametrize("n", [3, 4])
    def test_schwarzschild_is_conformally_flat(self, n: int) -> None:
        metric = MetricField(ManifoldSpec(dimension=n, mass=2.0))
        x = np.full(n, 1.5)

        decomposition = curvature_decomposition(curvature_at(metric, x))

        assert_that(float(np.max(np.abs(decomposition.weyl)))).is_less_than(1e-12)
        assert_that(decomposition.reconstruction_error).is_less_than(1e-12)


class TestDecay:
    """Scenario: Decay of the perturbation"""

    def test_even_perturbation_within_bounds(self, perturbed: MetricField) -> None:
        report = perturbation_decay_report(perturbed, (10.0, 100.0, 1000.0))

        assert_that(report.within_bounds).is_true()
        assert_that(max(report.evenness_ratio)).is_close_to(0.0, 1e-12)

    def test_odd_perturbation_breaks_evenness(self) -> None:
        spec = ManifoldSpec(dimension=3, mass=2.0).with_perturbation(amplitude=0.01, parity=Parity.ODD)

        report = perturbation_decay_report(MetricField(spec), (10.0, 100.0, 1000.0))

        assert_that(report.evenness_ratio[2]).is_greater_than(10.0 * report.evenness_ratio[0])
