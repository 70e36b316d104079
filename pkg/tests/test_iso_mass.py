"""Feature: Isoperimetric mass"""

import math

import numpy as np
import pytest
from assertpy import assert_that

from isofoliate.domain.enums import ProfileSource
from isofoliate.domain.errors import PreconditionError, UnsupportedConfigurationError
from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.lab.grid import SphereGrid
from isofoliate.lab.iso_mass import (
    ProfilePoint,
    coordinate_ball,
    dominates,
    euclidean_profile_area,
    iso_mass_exhaustion,
    isoperimetric_envelope,
    modified_iso_mass,
    profile_deficits,
    quasi_mass,
    schwarzschild_profile,
    volume_lower_bound_check,
)
from isofoliate.lab.metric import MetricField
from isofoliate.lab.schwarzschild import schwarzschild_volume, sphere_area_schwarzschild

MASS_RADII = (125.0, 250.0, 500.0, 1000.0)
Q = np.array([10.0, 0.0, 0.0])


@pytest.fixture
def translated() -> MetricField:
    return MetricField(ManifoldSpec(dimension=3, mass=2.0, translation=(10.0, 0.0, 0.0)))


class TestQuasiMass:
    """Scenario: Quasi-mass of a region"""

    def test_euclidean_ball(self) -> None:
        assert_that(quasi_mass(4.0 * math.pi / 3.0 * 8.0, 16.0 * math.pi)).is_close_to(0.0, 1e-14)

    def test_euclidean_profile(self) -> None:
        assert_that(euclidean_profile_area(3, 4.0 * math.pi / 3.0)).is_close_to(4.0 * math.pi, 1e-13)


class TestExhaustion:
    """Scenario: Quasi-masses of centered coordinate balls"""

    def test_schwarzschild(self, schwarzschild: MetricField) -> None:
        estimate = iso_mass_exhaustion(schwarzschild, MASS_RADII)

        assert_that(estimate.mass).is_close_to(2.0, 1e-3)
        assert_that(estimate.modified).is_false()

    def test_euclidean(self, euclidean: MetricField) -> None:
        estimate = iso_mass_exhaustion(euclidean, MASS_RADII)

        assert_that(abs(estimate.mass)).is_less_than(1e-10)

    def test_translated_schwarzschild_by_quadrature(self) -> None:
        metric = MetricField(ManifoldSpec(dimension=3, mass=2.0, translation=(1.0, 0.0, 0.0)))

        estimate = iso_mass_exhaustion(metric, MASS_RADII, SphereGrid.full(12), threads=2)

        assert_that(estimate.mass).is_close_to(2.0, 1e-2)

    def test_only_three_dimensions(self) -> None:
        metric = MetricField(ManifoldSpec(dimension=4, mass=2.0))

        assert_that(iso_mass_exhaustion).raises(UnsupportedConfigurationError).when_called_with(metric, MASS_RADII)

    def test_ladder_must_increase(self, schwarzschild: MetricField) -> None:
        assert_that(iso_mass_exhaustion).raises(PreconditionError).when_called_with(schwarzschild, (500.0, 250.0))


class TestCoordinateBall:
    """Scenario: Coordinate balls about an arbitrary center"""

    def test_ball_about_q_is_closed_form(self, translated: MetricField) -> None:
        ball = coordinate_ball(translated, 50.0, center=Q)

        assert_that(ball.source).is_equal_to(ProfileSource.CENTERED_SPHERE)
        assert_that(ball.volume).is_equal_to(schwarzschild_volume(2.0, 3, 50.0))

    def test_quadrature_about_q_matches_closed_form(self, translated: MetricField, grid: SphereGrid) -> None:
        spec = ManifoldSpec(dimension=3, mass=2.0)
        volume = schwarzschild_volume(2.0, 3, 50.0)
        area = sphere_area_schwarzschild(spec, 50.0)

        ball = coordinate_ball(translated, 50.0, grid, Q + np.array([1e-9, 0.0, 0.0]))

        assert_that(ball.source).is_equal_to(ProfileSource.OFF_CENTER_COMPETITOR)
        assert_that(ball.volume).is_close_to(volume, 1e-8 * volume)
        assert_that(ball.area).is_close_to(area, 1e-8 * area)
        assert_that(ball.center).is_equal_to((10.0 + 1e-9, 0.0, 0.0))

    def test_ball_must_contain_the_core(self, translated: MetricField, grid: SphereGrid) -> None:
        assert_that(coordinate_ball).raises(PreconditionError).when_called_with(translated, 5.0, grid)


class TestProfile:
    """Scenario: Isoperimetric profile of Schwarzschild"""

    def test_profile_points_hit_the_volumes(self) -> None:
        points = schwarzschild_profile(2.0, 3, (1e3, 1e5))

        for point in points:
            assert_that(schwarzschild_volume(2.0, 3, point.radius)).is_close_to(point.volume, 1e-8 * point.volume)
            assert_that(point.source).is_equal_to(ProfileSource.CENTERED_SPHERE)

    def test_rejects_non_positive_volume(self) -> None:
        assert_that(schwarzschild_profile).raises(PreconditionError).when_called_with(2.0, 3, (1e3, 0.0))

    def test_centered_spheres_beat_competitors(self) -> None:
        comparison = profile_deficits(2.0, 3, (1e4, 1e5, 1e6))

        assert_that(comparison.below_euclidean).is_true()
        assert_that(comparison.beats_competitors).is_true()
        assert_that(comparison.competitors).is_not_empty()
        assert_that({point.source for point in comparison.competitors}).is_equal_to(
            {ProfileSource.OFF_CENTER_COMPETITOR},
        )

    def test_flat_profile_has_no_competitors(self) -> None:
        comparison = profile_deficits(0.0, 3, (1e3, 1e4))

        assert_that(comparison.competitors).is_empty()


class TestModifiedMass:
    """Scenario: Modified isoperimetric mass and the volume bound"""

    def test_envelope_keeps_centered_balls(self, schwarzschild: MetricField, grid: SphereGrid) -> None:
        plain = iso_mass_exhaustion(schwarzschild, MASS_RADII[:2], grid)

        envelope = isoperimetric_envelope(schwarzschild, plain, grid)
        modified = modified_iso_mass(envelope)

        assert_that({point.source for point in envelope}).is_equal_to({ProfileSource.CENTERED_SPHERE})
        assert_that(dominates(modified, plain)).is_true()
        assert_that(np.allclose(modified.quasi_masses, plain.quasi_masses, rtol=1e-8)).is_true()
        assert_that(modified.modified).is_true()

    def test_envelope_beats_balls_about_the_origin(self, translated: MetricField, grid: SphereGrid) -> None:
        plain = iso_mass_exhaustion(translated, (50.0, 100.0), grid)

        envelope = isoperimetric_envelope(translated, plain, grid)
        modified = modified_iso_mass(envelope)

        assert_that({point.source for point in envelope}).is_equal_to({ProfileSource.CENTERED_SPHERE})
        for before, after, ball in zip(plain.areas, modified.areas, envelope, strict=True):
            assert_that(after).is_less_than(before)
            assert_that(ball.center).is_equal_to((10.0, 0.0, 0.0))
        for before, after in zip(plain.quasi_masses, modified.quasi_masses, strict=True):
            assert_that(after).is_greater_than(before)
        assert_that(dominates(modified, plain)).is_true()

    def test_lower_quasi_mass_does_not_dominate(self, schwarzschild: MetricField) -> None:
        plain = iso_mass_exhaustion(schwarzschild, MASS_RADII[:2])
        lowered = plain.model_copy(update={"quasi_masses": (plain.quasi_masses[0] - 1e-3, plain.quasi_masses[1])})

        assert_that(dominates(lowered, plain)).is_false()
        assert_that(dominates(plain, lowered)).is_true()

    def test_only_three_dimensions(self) -> None:
        point = ProfilePoint(volume=1e3, area=5e2, radius=5.0, dimension=4)

        assert_that(modified_iso_mass).raises(UnsupportedConfigurationError).when_called_with([point])

    def test_volume_lower_bound(self, schwarzschild: MetricField) -> None:
        check = volume_lower_bound_check(iso_mass_exhaustion(schwarzschild, MASS_RADII))

        assert_that(check.holds).is_true()
        assert_that(check.checked).is_equal_to(4)
        assert_that(check.min_margin).is_greater_than(0.0)

    @pytest.mark.parametrize("mass", [0.0, -1.0])
    def test_volume_bound_needs_positive_mass(self, euclidean: MetricField, mass: float) -> None:
        estimate = iso_mass_exhaustion(euclidean, MASS_RADII).model_copy(update={"mass": mass})

        assert_that(volume_lower_bound_check(estimate).holds).is_false()
