import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from infconv.exceptions import UnsupportedSpecError
from infconv.vecsets import (Cone, Disk, EmptySet, Interval, Polygon, Sector, cone_generated, from_dict,
                             hausdorff, hull_of, intersect, minkowski_sum, point_set)

SQUARE = hull_of([(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)], 2)


class HullTest(SimpleTestCase):
    def test_hull_drops_interior_and_collinear_points(self):
        """Test that hulls come out strictly convex"""
        hull = hull_of([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0)], 2)
        self.assertEqual(len(hull.vertices), 4)
        self.assertTrue(hull.contains((1.0, 1.0)))

    def test_degenerate_hulls(self):
        self.assertTrue(hull_of([(1.0, 1.0), (1.0, 1.0)], 2).is_singleton)
        segment = hull_of([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)], 2)
        self.assertEqual(len(segment.vertices), 2)
        self.assertEqual(hull_of([3.0, -1.0, 2.0], 1), Interval(-1.0, 3.0))
        self.assertTrue(hull_of([], 2).is_empty)


class HausdorffTest(SimpleTestCase):
    def test_intervals_and_empty_sets(self):
        self.assertEqual(hausdorff(Interval(0.0, 1.0), Interval(0.5, 3.0)), 2.0)
        self.assertEqual(hausdorff(EmptySet(1), EmptySet(1)), 0.0)
        self.assertEqual(hausdorff(EmptySet(2), point_set((0.0, 0.0))), math.inf)

    def test_polygon_against_disk(self):
        """Test the exact distance between a square and its inscribed disk"""
        self.assertAlmostEqual(hausdorff(SQUARE, Disk((0.0, 0.0), 1.0)), math.sqrt(2) - 1)

    def test_translated_polygons(self):
        moved = Polygon(SQUARE.array + np.array([0.3, -0.4]))
        self.assertAlmostEqual(hausdorff(SQUARE, moved), 0.5)

    def test_cones_compare_on_the_unit_ball(self):
        """Test that cones are truncated by the unit disk"""
        quadrant = Cone(((1.0, 0.0), (0.0, 1.0)))
        ray = Cone(((1.0, 0.0),))
        self.assertAlmostEqual(hausdorff(quadrant, ray), 1.0)
        self.assertEqual(hausdorff(quadrant, SQUARE), math.inf)
        self.assertEqual(hausdorff(Cone.whole_plane(), Cone.whole_plane()), 0.0)

    @given(dx=st.floats(-2.0, 2.0), dy=st.floats(-2.0, 2.0))
    @settings(max_examples=40, deadline=None)
    def test_translation_distance(self, dx, dy):
        """Test that a translated disk sits exactly the shift away"""
        shift = math.hypot(dx, dy)
        self.assertAlmostEqual(hausdorff(Disk((0.0, 0.0), 1.0), Disk((dx, dy), 1.0)), shift, delta=1e-9)


class IntersectTest(SimpleTestCase):
    def test_intervals(self):
        self.assertEqual(intersect(Interval(-1.0, 0.0), Interval(-0.5, math.inf)), Interval(-0.5, 0.0))
        self.assertTrue(intersect(Interval(0.0, 1.0), Interval(2.0, 3.0)).is_empty)

    def test_polygon_and_cone(self):
        """Test that clipping a square by a quadrant keeps the corner square"""
        quadrant = Cone(((1.0, 0.0), (0.0, 1.0)))
        clipped = intersect(SQUARE, quadrant)
        expected = hull_of([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], 2)
        self.assertLess(hausdorff(clipped, expected), 1e-12)

    def test_segment_and_disk(self):
        segment = hull_of([(-2.0, 0.0), (2.0, 0.0)], 2)
        chord = intersect(segment, Disk((0.0, 0.0), 1.0))
        self.assertLess(hausdorff(chord, hull_of([(-1.0, 0.0), (1.0, 0.0)], 2)), 1e-12)

    def test_whole_plane_is_neutral(self):
        self.assertEqual(intersect(Cone.whole_plane(), SQUARE), SQUARE)

    def test_point_membership(self):
        self.assertEqual(intersect(point_set((0.5, 0.5)), SQUARE), point_set((0.5, 0.5)))
        self.assertTrue(intersect(point_set((3.0, 0.0)), SQUARE).is_empty)

    def test_wedge_and_centred_disk(self):
        """Test that a quadrant cut by a disk around the apex is a sector"""
        quadrant = Cone(((1.0, 0.0), (0.0, 1.0)))
        sector = intersect(quadrant, Disk((0.0, 0.0), 2.0))
        self.assertEqual(sector, Sector(((1.0, 0.0), (0.0, 1.0)), 2.0))
        self.assertEqual(intersect(Disk((0.0, 0.0), 2.0), quadrant), sector)
        self.assertEqual(sector.distance((1.0, 1.0)), 0.0)
        self.assertAlmostEqual(sector.distance((3.0, 4.0)), 3.0)
        self.assertAlmostEqual(sector.distance((-1.0, 0.5)), 1.0)
        self.assertAlmostEqual(sector.distance((3.0, -1.0)), math.sqrt(2))
        self.assertAlmostEqual(hausdorff(sector, quadrant.truncated()), 1.0)
        self.assertEqual(quadrant.truncated(), Sector(((1.0, 0.0), (0.0, 1.0))))
        self.assertEqual(hausdorff(sector, quadrant), math.inf)
        self.assertEqual(sector.negate(), Sector(((-1.0, 0.0), (0.0, -1.0)), 2.0))

    def test_unrepresentable(self):
        with self.assertRaises(UnsupportedSpecError):
            intersect(Disk((0.0, 0.0), 1.0), Disk((1.0, 0.0), 1.0))


class ConeTest(SimpleTestCase):
    def test_generated_cone_distance(self):
        cone = cone_generated([(1.0, 0.0), (0.0, 2.0)])
        self.assertEqual(cone.distance((1.0, 1.0)), 0.0)
        self.assertAlmostEqual(cone.distance((-1.0, -1.0)), math.sqrt(2))
        self.assertAlmostEqual(cone.distance((2.0, -1.0)), 1.0)

    def test_opposite_rays_are_not_pointed(self):
        with self.assertRaises(UnsupportedSpecError):
            cone_generated([(1.0, 0.0), (-1.0, 0.0)])

    def test_minkowski_sums(self):
        """Test the representable Minkowski sums"""
        total = minkowski_sum(point_set((1.0, 1.0)), Disk((0.0, 0.0), 2.0))
        self.assertEqual(total, Disk((1.0, 1.0), 2.0))
        self.assertEqual(minkowski_sum(Interval(0.0, 1.0), Interval(-2.0, -1.0)), Interval(-2.0, 0.0))
        with self.assertRaises(UnsupportedSpecError):
            minkowski_sum(SQUARE, Disk((0.0, 0.0), 1.0))


class FromDictTest(SimpleTestCase):
    def test_kinds(self):
        self.assertEqual(from_dict({'kind': 'interval', 'lo': '-inf', 'hi': 0.0}), Interval(-math.inf, 0.0))
        self.assertEqual(from_dict({'kind': 'ball', 'center': [1.0], 'radius': 2.0}), Interval(-1.0, 3.0))
        self.assertTrue(from_dict({'kind': 'cone', 'whole': True}).whole)
        self.assertTrue(from_dict({'kind': 'empty', 'dim': 2}).is_empty)
        sector = Sector(((1.0, 0.0), (0.0, 1.0)), 0.5)
        self.assertEqual(from_dict(sector.to_dict()), sector)
        with self.assertRaises(ValueError):
            from_dict({'kind': 'blob'})
