import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from infconv.exceptions import UnsupportedSpecError
from infconv.gauge import GaugeSet, coercivity, facet_count, gauge_eval, gauge_subdiff, gauge_subdiff_at_zero
from infconv.sets import Ball, FinitePoints, IntervalBox, PolygonV
from infconv.vecsets import Disk, Interval, hausdorff, hull_of

RECTANGLE = PolygonV(((-1.0, -3.0), (1.0, -3.0), (1.0, 3.0), (-1.0, 3.0)))


class GaugeSetTest(SimpleTestCase):
    def test_origin_must_be_interior(self):
        """Test that sets without 0 in their interior are rejected"""
        with self.assertRaises(ValidationError):
            GaugeSet(IntervalBox((0.0,), (1.0,)))
        with self.assertRaises(ValidationError):
            GaugeSet(Ball((1.0, 0.0), 1.0))
        with self.assertRaises(ValidationError):
            GaugeSet(FinitePoints(((0.0,),)))

    def test_one_dimensional_ball_becomes_interval(self):
        F = GaugeSet(Ball((0.5,), 1.0))
        self.assertIsInstance(F.shape, IntervalBox)
        self.assertEqual(F.shape.lo, (-0.5,))

    def test_asymmetric_interval(self):
        """Test rho_F for F = [-1, 2]"""
        F = GaugeSet(IntervalBox((-1.0,), (2.0,)))
        self.assertEqual(gauge_eval(F, 4.0), 2.0)
        self.assertEqual(gauge_eval(F, -3.0), 3.0)
        self.assertEqual(coercivity(F), (2.0, 0.5))
        self.assertEqual(F.lipschitz_constant(), 1.0)

    def test_rectangle(self):
        F = GaugeSet(RECTANGLE)
        self.assertAlmostEqual(gauge_eval(F, (2.0, 3.0)), 2.0)
        self.assertAlmostEqual(gauge_eval(F, (0.5, 3.0)), 1.0)
        self.assertAlmostEqual(F.m, 1 / math.sqrt(10))
        self.assertAlmostEqual(F.lipschitz_constant(), 1.0)
        self.assertEqual(facet_count(F), 4)

    def test_balls(self):
        """Test centered and off-center ball gauges"""
        self.assertAlmostEqual(gauge_eval(GaugeSet(Ball((0.0, 0.0), 2.0)), (3.0, 4.0)), 2.5)
        F = GaugeSet(Ball((0.5, 0.0), 1.0))
        self.assertAlmostEqual(gauge_eval(F, (1.5, 0.0)), 1.0)
        self.assertAlmostEqual(gauge_eval(F, (-0.5, 0.0)), 1.0)
        self.assertAlmostEqual(gauge_eval(F, (0.5, 1.0)), 1.0)
        self.assertAlmostEqual(gauge_eval(F, (3.0, 0.0)), 2.0)
        self.assertEqual(facet_count(F), math.inf)

    @given(x=arrays(float, 2, elements=st.floats(-5.0, 5.0)), t=st.floats(0.0, 10.0))
    @settings(max_examples=50, deadline=None)
    def test_positive_homogeneity(self, x, t):
        """Test rho_F(t x) = t rho_F(x) for polygons and off-center balls"""
        for F in (GaugeSet(RECTANGLE), GaugeSet(Ball((0.3, -0.2), 1.0))):
            self.assertAlmostEqual(gauge_eval(F, t * x), t * gauge_eval(F, x), delta=1e-9 * (1 + t) * 50)

    @given(x=arrays(float, 2, elements=st.floats(-5.0, 5.0)), y=arrays(float, 2, elements=st.floats(-5.0, 5.0)))
    @settings(max_examples=50, deadline=None)
    def test_subadditivity(self, x, y):
        F = GaugeSet(RECTANGLE)
        self.assertLessEqual(gauge_eval(F, x + y), gauge_eval(F, x) + gauge_eval(F, y) + 1e-9)


class GaugeSubdiffTest(SimpleTestCase):
    def test_polar_at_zero(self):
        """Test that the subdifferential at 0 is the polar set"""
        self.assertEqual(gauge_subdiff_at_zero(GaugeSet(IntervalBox((-1.0,), (2.0,)))), Interval(-1.0, 0.5))
        polar = gauge_subdiff_at_zero(GaugeSet(RECTANGLE))
        expected = hull_of([(1.0, 0.0), (0.0, 1 / 3), (-1.0, 0.0), (0.0, -1 / 3)], 2)
        self.assertLess(hausdorff(polar, expected), 1e-12)
        self.assertEqual(gauge_subdiff_at_zero(GaugeSet(Ball((0.0, 0.0), 2.0))), Disk((0.0, 0.0), 0.5))

    def test_off_center_polar_is_unsupported(self):
        with self.assertRaises(UnsupportedSpecError):
            gauge_subdiff_at_zero(GaugeSet(Ball((0.5, 0.0), 1.0)))

    def test_away_from_zero(self):
        """Test active facets and ball gradients"""
        F = GaugeSet(RECTANGLE)
        corner = gauge_subdiff(F, (1.0, 3.0))
        self.assertLess(hausdorff(corner, hull_of([(1.0, 0.0), (0.0, 1 / 3)], 2)), 1e-12)
        self.assertTrue(gauge_subdiff(F, (2.0, 0.0)).is_singleton)
        gradient = gauge_subdiff(GaugeSet(Ball((0.5, 0.0), 1.0)), (1.5, 0.0))
        np.testing.assert_allclose(gradient.element(), [2 / 3, 0.0])
        self.assertEqual(gauge_subdiff(GaugeSet(IntervalBox((-1.0,), (2.0,))), (-3.0,)), Interval(-1.0, -1.0))
