import io
import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st

from infconv.exceptions import EmptyDomainError, ExtRealError, GridBoundsError, InsufficientDataError
from infconv.extreal import ExtReal, Grid, GridFn, interior_region, lipschitz_estimate, lsc_spot_check


def line(lo=0.0, hi=1.0, n=11):
    return Grid((lo,), (hi,), (n,))


class ExtRealTest(SimpleTestCase):
    def test_infinity_absorbs_addition(self):
        """Test that +inf plus anything stays +inf"""
        self.assertFalse((ExtReal(1.5) + ExtReal.inf()).is_finite)
        self.assertEqual(float(ExtReal(1.5) + 2.0), 3.5)

    def test_rejects_nan_and_negative_infinity(self):
        """Test that NaN and -inf are not extended reals"""
        with self.assertRaises(ExtRealError):
            ExtReal.of(math.nan)
        with self.assertRaises(ExtRealError):
            ExtReal.of(-math.inf)
        with self.assertRaises(ExtRealError):
            ExtReal(math.inf)

    def test_ordering(self):
        """Test that every real sits below +inf"""
        self.assertLess(ExtReal(1e300), ExtReal.inf())
        self.assertLessEqual(ExtReal.inf(), ExtReal.of(math.inf))
        self.assertEqual(str(ExtReal.inf()), 'inf')


class GridTest(SimpleTestCase):
    def test_parse_one_and_two_axes(self):
        """Test the lo:hi:n flag syntax"""
        grid = Grid.parse('-4:4:1601')
        self.assertEqual(grid.n, (1601,))
        self.assertAlmostEqual(grid.h[0], 0.005)
        plane = Grid.parse('0:1:2, 0:2:3')
        self.assertEqual(plane.dim, 2)
        self.assertEqual(plane.h, (1.0, 1.0))
        self.assertEqual(plane.describe(), '0:1:2,0:2:3')

    def test_parse_rejects_bad_axes(self):
        """Test that malformed or degenerate axes are rejected"""
        for text in ['0:1:1', '1:0:5', 'a:b:c', '0:1', '0:1:2.5', '0:1:2,0:1:2,0:1:2']:
            with self.subTest(text=text), self.assertRaises(ValidationError):
                Grid.parse(text)

    @override_settings(INFCONV={'GRID_POINT_CAP': 100})
    def test_point_cap(self):
        """Test that grids above the configured cap are rejected"""
        Grid((0.0,), (1.0,), (100,))
        with self.assertRaises(ValidationError):
            Grid((0.0,), (1.0,), (101,))

    def test_snap_and_locate(self):
        """Test nearest-point snapping and exact location"""
        grid = line()
        index, distance = grid.snap((0.33,))
        self.assertEqual(index, (3,))
        self.assertAlmostEqual(distance, 0.03)
        self.assertEqual(grid.locate((0.3,)), (3,))
        with self.assertRaises(GridBoundsError):
            grid.locate((0.33,))
        with self.assertRaises(GridBoundsError):
            grid.snap((1.5,))
        with self.assertRaises(GridBoundsError):
            grid.snap((0.5, 0.5))

    def test_margin(self):
        grid = Grid((0.0, 0.0), (1.0, 1.0), (11, 11))
        self.assertEqual(grid.margin((2, 7)), 2)
        self.assertEqual(grid.margin((0, 5)), 0)
        with self.assertRaises(GridBoundsError):
            grid.margin((11, 0))

    def test_points_are_c_ordered(self):
        grid = Grid((0.0, 0.0), (1.0, 2.0), (2, 3))
        points = grid.points()
        self.assertEqual(points.shape, (6, 2))
        np.testing.assert_allclose(points[grid.ravel((1, 2))], [1.0, 2.0])


class GridFnTest(SimpleTestCase):
    def test_rejects_nan_negative_infinity_and_empty(self):
        """Test the value invariants of sampled functions"""
        grid = line(n=3)
        with self.assertRaises(ExtRealError):
            GridFn(grid, [0.0, math.nan, 1.0])
        with self.assertRaises(ExtRealError):
            GridFn(grid, [0.0, -math.inf, 1.0])
        with self.assertRaises(EmptyDomainError):
            GridFn(grid, [math.inf] * 3)
        with self.assertRaises(ValidationError):
            GridFn(grid, [0.0, 1.0])

    def test_infinite_sites_and_immutability(self):
        """Test that +inf is tagged and stored values cannot be written"""
        g = GridFn(line(n=3), [0.0, math.inf, 2.0])
        self.assertFalse(g.eval((1,)).is_finite)
        self.assertEqual(g.value((2,)), 2.0)
        self.assertEqual(g.effective_domain(), [(0,), (2,)])
        self.assertEqual(g.min(), 0.0)
        with self.assertRaises(ValueError):
            g.values[0] = 5.0

    def test_csv_round_trip(self):
        """Test that CSV export keeps +inf and full precision"""
        grid = Grid((0.0, 0.0), (1.0, 1.0), (3, 4))
        values = np.arange(12, dtype=float).reshape(3, 4) / 7.0
        values[1, 2] = math.inf
        g = GridFn(grid, values)
        buffer = io.StringIO()
        g.to_csv(buffer)
        buffer.seek(0)
        self.assertEqual(GridFn.from_csv(grid, buffer), g)

    def test_csv_with_missing_column(self):
        grid = line(n=3)
        with self.assertRaises(ValidationError):
            GridFn.from_csv(grid, io.StringIO('x0,val\n0,1\n0.5,1\n1,1\n'))


class LipschitzTest(SimpleTestCase):
    def test_plane_estimate_uses_diagonals(self):
        """Test the adjacent-pair estimate on a linear function in 2D"""
        grid = Grid((0.0, 0.0), (1.0, 1.0), (11, 11))
        points = grid.points()
        g = GridFn(grid, (points[:, 0] + 2 * points[:, 1]).reshape(grid.shape))
        self.assertAlmostEqual(lipschitz_estimate(g), 3 / math.sqrt(2))

    def test_needs_two_finite_points(self):
        g = GridFn(line(n=3), [math.inf, 1.0, math.inf])
        with self.assertRaises(InsufficientDataError):
            lipschitz_estimate(g)

    def test_interior_region(self):
        grid = line(n=11)
        self.assertEqual(interior_region(grid, 3), (slice(3, 8),))
        with self.assertRaises(InsufficientDataError):
            interior_region(grid, 6)

    @given(slope=st.floats(min_value=-5.0, max_value=5.0, allow_nan=False))
    @settings(max_examples=30, deadline=None)
    def test_linear_slope_recovered(self, slope):
        """Test that a linear function's estimate equals its slope"""
        grid = line(-1.0, 1.0, 21)
        g = GridFn(grid, slope * grid.axis(0))
        self.assertAlmostEqual(lipschitz_estimate(g), abs(slope), delta=1e-9 * (1 + abs(slope)))


class LowerSemicontinuityTest(SimpleTestCase):
    def test_smooth_function_passes(self):
        grid = line(-1.0, 1.0, 21)
        report = lsc_spot_check(GridFn(grid, grid.axis(0) ** 2))
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.slack, 1.0)

    def test_spike_is_flagged(self):
        """Test that an isolated upward spike is reported"""
        values = np.zeros(11)
        values[5] = 100.0
        report = lsc_spot_check(GridFn(line(n=11), values))
        self.assertFalse(report.passed)
        self.assertEqual([v.index for v in report.violations], [(5,)])

    def test_downward_drop_flags_its_neighbours(self):
        """Test that a value 10 below its neighbours is reported at the neighbours, not at itself"""
        values = np.zeros(11)
        values[5] = -10.0
        report = lsc_spot_check(GridFn(line(n=11), values))
        self.assertEqual([v.index for v in report.violations], [(4,), (6,)])
        self.assertEqual({v.neighbour_min for v in report.violations}, {-10.0})
        self.assertAlmostEqual(report.violations[0].margin, -9.0)

    def test_infinite_sites_are_not_flagged(self):
        values = np.zeros(11)
        values[:4] = math.inf
        self.assertTrue(lsc_spot_check(GridFn(line(n=11), values)).passed)
