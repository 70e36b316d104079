"""Feature: Sweep Regression and Extrapolation"""

import threading

import numpy as np
import pytest
from assertpy import assert_that

from isofoliate.domain.errors import PreconditionError
from isofoliate.lab.fitting import loglog_slope, parallel_map, richardson, tail_limsup

RADII = np.array([10.0, 20.0, 40.0, 80.0, 160.0])


class TestPowerLawFit:
    """Scenario: Fitting a power law on a log-log scale"""

    def test_exact_power_law_is_recovered(self) -> None:
        fit = loglog_slope(RADII, 7.0 * RADII**-1.5)

        assert_that(fit.slope).is_close_to(-1.5, 1e-12)
        assert_that(fit.constant).is_close_to(7.0, 1e-9)
        assert_that(fit(100.0)).is_close_to(7.0e-3, 1e-12)

    def test_sign_is_ignored(self) -> None:
        fit = loglog_slope(RADII, -(RADII**2))

        assert_that(fit.slope).is_close_to(2.0, 1e-12)

    def test_zeros_are_dropped(self) -> None:
        values = RADII**-2
        values[0] = 0.0

        assert_that(loglog_slope(RADII, values).slope).is_close_to(-2.0, 1e-12)

    def test_single_usable_point_is_rejected(self) -> None:
        with pytest.raises(PreconditionError) as error:
            loglog_slope([1.0, 2.0], [0.0, 3.0])

        assert_that(error.value.details).contains_entry({"points": 1})


class TestRichardson:
    """Scenario: Extrapolating to infinite radius"""

    def test_polynomial_in_inverse_radius_is_exact(self) -> None:
        values = 2.0 + 3.0 / RADII + 5.0 / RADII**2

        limit, estimate = richardson(RADII, values, order=2)

        assert_that(limit).is_close_to(2.0, 1e-9)
        assert_that(estimate).is_greater_than(0.0)

    def test_order_zero_returns_last_value(self) -> None:
        limit, estimate = richardson(RADII, 1.0 / RADII, order=0)

        assert_that(limit).is_close_to(1.0 / 160.0, 1e-15)
        assert_that(estimate).is_close_to(0.0, 1e-15)

    def test_order_is_capped_by_the_number_of_points(self) -> None:
        limit, _ = richardson([10.0, 20.0], [1.3, 1.15], order=4)

        assert_that(limit).is_close_to(1.0, 1e-12)

    def test_single_point_is_rejected(self) -> None:
        with pytest.raises(PreconditionError):
            richardson([10.0], [1.0])

    def test_tail_limsup_of_exact_sequence(self) -> None:
        values = 2.0 + 3.0 / RADII + 5.0 / RADII**2

        assert_that(tail_limsup(RADII, values)).is_close_to(2.0, 1e-9)

    def test_tail_limsup_picks_largest_window(self) -> None:
        values = np.array([1.0, 1.0, 1.0, 1.0, 2.0])

        assert_that(tail_limsup(RADII, values, order=1)).is_greater_than(1.0)


class TestParallelMap:
    """Scenario: Running ladder entries on a thread pool"""

    def test_order_is_preserved(self) -> None:
        assert_that(parallel_map(lambda x: x * x, range(8), threads=4)).is_equal_to([x * x for x in range(8)])

    def test_serial_runs_on_calling_thread(self) -> None:
        names = parallel_map(lambda _: threading.current_thread().name, [1, 2], threads=1)

        assert_that(set(names)).is_equal_to({threading.current_thread().name})

    def test_empty_input(self) -> None:
        assert_that(parallel_map(str, [], threads=3)).is_empty()
