import math

import numpy as np
import pytest

from ri_tails.exceptions import DomainError, UsageError
from ri_tails.numerics import (
    bisect_threshold,
    golden_section_min,
    grid_then_golden_min,
    lin_grid,
    log_grid,
    ordered_map,
    top_decade_trend,
    validate_grid,
)


class TestGrids:
    def test_log_grid_endpoints(self):
        grid = log_grid(2.0, 1e6, 50)
        assert grid.size == 50
        assert grid[0] == pytest.approx(2.0)
        assert grid[-1] == pytest.approx(1e6)
        assert np.all(np.diff(grid) > 0)

    def test_lin_grid(self):
        np.testing.assert_allclose(lin_grid(0.0, 1.0, 5), [0.0, 0.25, 0.5, 0.75, 1.0])

    @pytest.mark.parametrize("args", [(0.0, 1.0, 10), (2.0, 1.0, 10), (1.0, 2.0, 1)])
    def test_log_grid_rejects_bad_bounds(self, args):
        with pytest.raises(UsageError):
            log_grid(*args)

    def test_validate_grid(self):
        np.testing.assert_array_equal(validate_grid([1, 2, 3]), [1.0, 2.0, 3.0])
        for bad in ([], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0], [1.0, math.inf]):
            with pytest.raises(UsageError):
                validate_grid(bad)


class TestBisectThreshold:
    def test_finds_cube_root(self):
        x = bisect_threshold(lambda u: u ** 3 >= 1000.0, 1e-12, 1e12, rtol=1e-12)
        assert x == pytest.approx(10.0, rel=1e-11)
        assert x ** 3 >= 1000.0

    def test_predicate_true_at_lower_end(self):
        assert bisect_threshold(lambda u: True, 0.5, 4.0) == 0.5

    def test_rejects_nonpositive_bracket(self):
        with pytest.raises(DomainError):
            bisect_threshold(lambda u: True, 0.0, 1.0)


class TestGoldenSection:
    def test_parabola(self):
        x, fx = golden_section_min(lambda y: (y - 0.3) ** 2, 0.0, 1.0, rtol=1e-12)
        assert x == pytest.approx(0.3, abs=1e-6)
        assert fx == pytest.approx(0.0, abs=1e-12)

    def test_endpoint_minimum(self):
        x, fx = golden_section_min(lambda y: y, 0.0, 10.0)
        assert x == 0.0
        assert fx == 0.0

    def test_grid_then_golden_never_worse_than_grid(self):
        f = lambda y: abs(y - 0.123456)
        grid = np.linspace(0.0, 1.0, 11)
        values = np.array([f(y) for y in grid])
        x, fx = grid_then_golden_min(f, grid, values, rtol=1e-12)
        assert fx <= values.min()
        assert x == pytest.approx(0.123456, abs=1e-8)

    def test_nan_grid_values_are_skipped(self):
        grid = np.array([0.0, 1.0, 2.0])
        values = np.array([np.nan, 1.0, 5.0])
        x, fx = grid_then_golden_min(lambda y: (y - 1.0) ** 2 + 1.0, grid, values)
        assert x == pytest.approx(1.0, abs=1e-6)


class TestOrderedMap:
    def test_order_independent_of_workers(self):
        grid = np.linspace(1.0, 100.0, 64)
        serial = ordered_map(math.sqrt, grid)
        threaded = ordered_map(math.sqrt, grid, workers=4)
        assert serial == threaded


class TestTopDecadeTrend:
    def test_growing_values(self):
        grid = log_grid(1.0, 1e6, 100)
        trend = top_decade_trend(grid, np.sqrt(grid))
        assert trend.monotone
        assert trend.factor == pytest.approx(math.sqrt(10.0), rel=1e-9)
        assert trend.grows_beyond(1.1)

    def test_decreasing_values_do_not_grow(self):
        grid = log_grid(1.0, 1e6, 100)
        assert not top_decade_trend(grid, 1.0 / grid).grows_beyond(1.1)

    def test_shrinking_direction(self):
        grid = log_grid(1.0, 1e6, 100)
        assert top_decade_trend(grid, 1.0 / grid, increasing=False).grows_beyond(1.1)
