"""Feature: Experiment Recipes"""

import numpy as np
import pytest
from assertpy import assert_that

from isofoliate.domain.config import ExperimentConfig
from isofoliate.domain.enums import CommandName, GridMode
from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.lab.bray_chart import DeficitSweep, OffCenterCheck
from isofoliate.lab.experiments import (
    RECIPES,
    build_grid,
    curvature_agreement,
    deficit_floor_check,
    run_cmc_solve,
    run_hawking_profile,
    run_iso_mass,
    run_jacobi_spectrum,
    run_report_geometry,
    run_volume_comparison,
)
from isofoliate.lab.metric import MetricField
from isofoliate.writers import table_columns


def config(**data: object) -> ExperimentConfig:
    return ExperimentConfig.model_validate(data)


def competitor(r: float, ratio: float) -> OffCenterCheck:
    return OffCenterCheck(
        m=2.0,
        n=3,
        r=r,
        offset=1.5 * r,
        tau=2.0,
        ball_radius=r,
        volume=1.0,
        area_boundary=1.0 + ratio,
        area_sphere=1.0,
        deficit=ratio,
        eta=1.0,
        ratio=ratio,
        isoperimetric_ratio=1.0,
    )


def sweep_of(*checks: OffCenterCheck) -> DeficitSweep:
    return DeficitSweep(
        checks=checks,
        min_ratio=min(check.ratio for check in checks),
        all_positive=True,
        growth_exponents=(),
    )


class TestRecipeTable:
    """Scenario: Every subcommand has a recipe"""

    def test_recipes_cover_all_experiments(self) -> None:
        expected = {name for name in CommandName if name is not CommandName.ACCEPTANCE}

        assert_that(set(RECIPES)).is_equal_to(expected)

    def test_build_grid(self) -> None:
        full = build_grid(config(grid={"colatitudes": 12}))
        axisymmetric = build_grid(config(manifold={"dimension": 4}, grid={"axisymmetric-nodes": 40}))

        assert_that(full.mode).is_equal_to(GridMode.FULL)
        assert_that(axisymmetric.mode).is_equal_to(GridMode.AXISYMMETRIC)
        assert_that(axisymmetric.size).is_equal_to(40)


class TestReportGeometry:
    """Scenario: Curvature along the radius ladder"""

    def test_curvature_agreement_rows(self) -> None:
        worst, rows = curvature_agreement(MetricField(ManifoldSpec(mass=2.0)), (10.0, 50.0))

        assert_that(worst).is_less_than(1e-6)
        assert_that(rows).is_length(2)
        assert_that(set(rows[0])).is_equal_to(set(table_columns()["curvature"]))
        assert_that(rows[0]["ricci_normal"]).is_negative()
        assert_that(rows[0]["scalar"]).is_less_than(1e-10)
        assert_that(rows[1]["riemann_norm"]).is_less_than(rows[0]["riemann_norm"])

    def test_perturbed_metric_reports_decay(self) -> None:
        result = run_report_geometry(
            config(
                command="report-geometry",
                manifold={"perturbation": {"amplitude": 0.01}},
                ladders={"radii": [20.0, 40.0]},
            ),
        )

        assert_that(result.reports).contains_key("decay", "volumes")
        assert_that(result.tables["curvature"]).is_length(2)
        assert_that([check.name for check in result.checks]).contains("perturbation decay within C")


class TestHawkingProfile:
    """Scenario: Hawking mass along centered spheres"""

    @pytest.mark.parametrize("dimension", [3, 5])
    def test_constant_on_schwarzschild(self, dimension: int) -> None:
        messages: list[str] = []

        result = run_hawking_profile(config(manifold={"dimension": dimension}), messages.append)

        assert_that(result.passed).is_true()
        assert_that(messages).is_equal_to(["schwarzschild profile", "cone profile"])
        assert_that(result.tables["hawking"]).is_length(6)
        assert_that(result.tables["hawking"][0]["mass"]).is_close_to(2.0, 1e-9)

    def test_massless_skips_cone(self) -> None:
        result = run_hawking_profile(config(manifold={"mass": 0.0}))

        assert_that(result.reports).does_not_contain_key("cone")
        assert_that(result.passed).is_true()


class TestVolumeComparison:
    """Scenario: Off-center competitors"""

    def test_deficit_table(self) -> None:
        result = run_volume_comparison(
            config(ladders={"radii": [50.0, 100.0], "offsets": [1.5], "taus": [2.0], "volumes": [1e3, 1e4]}),
        )

        rows = result.tables["deficits"]
        assert_that(rows).is_length(2)
        assert_that(rows).extracting("offset").is_equal_to([1.5, 1.5])
        assert_that(rows).extracting("r").is_equal_to([50.0, 100.0])
        assert_that(all(row["deficit"] > 0.0 for row in rows)).is_true()
        assert_that(result.reports).contains_key("sweep", "profile")

    def test_steady_ratios_are_bounded_below(self) -> None:
        check = deficit_floor_check(sweep_of(competitor(50.0, 0.4), competitor(100.0, 0.3)), 0.5)

        assert_that(check.passed).is_true()
        assert_that(check.threshold).is_close_to(0.2, 1e-15)

    def test_vanishing_positive_ratio_fails(self) -> None:
        check = deficit_floor_check(sweep_of(competitor(50.0, 0.4), competitor(100.0, 1e-6)), 0.5)

        assert_that(check.value).is_greater_than(0.0)
        assert_that(check.passed).is_false()

    def test_floor_is_configurable(self) -> None:
        tolerances = config(tolerances={"deficit-floor": 0.25}).tolerances
        sweep = sweep_of(competitor(50.0, 0.4), competitor(100.0, 0.15))

        assert_that(tolerances.deficit_floor).is_equal_to(0.25)
        assert_that(deficit_floor_check(sweep, 0.25).passed).is_true()
        assert_that(deficit_floor_check(sweep, 0.5).passed).is_false()


class TestCmcSolve:
    """Scenario: A single CMC leaf"""

    def test_newton_on_schwarzschild(self) -> None:
        result = run_cmc_solve(config(command="cmc-solve", grid={"colatitudes": 12}, surface={"radius": 50.0}))

        assert_that(result.passed).is_true()
        assert_that(result.tables).contains_key("newton")
        assert_that(result.tables["newton"][0]["step"]).is_equal_to(0.0)
        assert_that(result.reports["sup_u"]).is_less_than(1e-8)

    def test_seeded_newton_returns_to_sphere(self) -> None:
        result = run_cmc_solve(
            config(
                command="cmc-solve",
                grid={"colatitudes": 12},
                surface={"radius": 50.0, "seed-degree": 2, "seed-amplitude": 0.02},
            ),
        )

        assert_that(result.passed).is_true()
        assert_that(len(result.tables["newton"])).is_greater_than(1)
        assert_that(result.reports["sup_u"]).is_less_than(1e-6)
        assert_that(np.isfinite(result.reports["residual"])).is_true()


class TestJacobiSpectrum:
    """Scenario: Spectrum of a leaf checked under refinement"""

    def test_configured_refinement_is_used(self) -> None:
        result = run_jacobi_spectrum(
            config(
                command="jacobi-spectrum",
                grid={"colatitudes": 12, "refined-colatitudes": 18},
                surface={"radius": 1000.0},
            ),
        )

        assert_that(result.reports["spectrum"]["refined_resolution"]).is_equal_to(18)
        assert_that(result.reports["spectrum"]["converged"]).is_true()

    def test_default_refinement(self) -> None:
        result = run_jacobi_spectrum(
            config(command="jacobi-spectrum", grid={"colatitudes": 12}, surface={"radius": 1000.0}),
        )

        assert_that(result.reports["spectrum"]["refined_resolution"]).is_equal_to(16)


class TestIsoMass:
    """Scenario: Isoperimetric mass against the trial-ball envelope"""

    def test_translated_mass_gains_on_the_envelope(self) -> None:
        result = run_iso_mass(
            config(
                command="iso-mass",
                manifold={"dimension": 3, "mass": 2.0, "translation": [10.0, 0.0, 0.0]},
                grid={"colatitudes": 12},
                ladders={"mass-radii": [50.0, 100.0]},
                tolerances={"iso-mass": 0.2},
            ),
        )
        checks = {check.name: check for check in result.checks}
        rows = result.tables["iso_mass"]

        assert_that(checks["modified mass dominates at matched volumes"].passed).is_true()
        assert_that(list(rows[0])).is_equal_to(table_columns()["iso_mass"])
        for row in rows:
            assert_that(row["envelope_source"]).is_equal_to("centered-sphere")
            assert_that(row["modified_quasi_mass"]).is_greater_than(row["quasi_mass"])
