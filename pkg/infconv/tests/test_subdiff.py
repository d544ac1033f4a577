import math

import numpy as np
from django.test import SimpleTestCase

from infconv.envelope import ConvCase
from infconv.exceptions import (AmbiguousProjectionError, BoundaryMarginError, PreconditionError,
                                UnsupportedSpecError)
from infconv.extreal import Grid
from infconv.funcspec import Indicator, MaxAffine, NormP, ScaledSquaredNorm, Shift, Sum, sample
from infconv.sets import Ball, FinitePoints, IntervalBox
from infconv.subdiff import (convex_subdiff, ekeland_point, frechet_certificate, limiting_subdiff, moreau_grad,
                             normal_cone, strict_diff_probe, transfer_to_f, transfer_to_phi)
from infconv.vecsets import Cone, Disk, Interval, hausdorff, hull_of

UNIT = IntervalBox((0.0,), (1.0,))


def line(lo, hi, n):
    return Grid((lo,), (hi,), (n,))


class NormalConeTest(SimpleTestCase):
    def test_interval(self):
        """Test the normal cone of [0, 1] at and away from its ends"""
        self.assertEqual(normal_cone(UNIT, 1.0), Interval(0.0, math.inf))
        self.assertEqual(normal_cone(UNIT, 0.0), Interval(-math.inf, 0.0))
        self.assertEqual(normal_cone(UNIT, 0.5), Interval(0.0, 0.0))
        self.assertTrue(normal_cone(UNIT, 2.0).is_empty)

    def test_box_corner_and_disk_edge(self):
        corner = normal_cone(IntervalBox((0.0, 0.0), (1.0, 1.0)), (1.0, 1.0))
        self.assertEqual(corner.distance((2.0, 3.0)), 0.0)
        self.assertAlmostEqual(corner.distance((-1.0, 0.5)), 1.0)
        ray = normal_cone(Ball((0.0, 0.0), 1.0), (1.0, 0.0))
        self.assertEqual(ray.distance((2.0, 0.0)), 0.0)
        self.assertAlmostEqual(ray.distance((0.0, 1.0)), 1.0)
        self.assertTrue(normal_cone(Ball((0.0, 0.0), 1.0), (0.2, 0.1)).is_singleton)

    def test_single_point_and_nonconvex_sets(self):
        """Test that a lone point has the whole space as normal cone"""
        self.assertTrue(normal_cone(FinitePoints(((1.0, 2.0),)), (1.0, 2.0)).whole)
        with self.assertRaises(UnsupportedSpecError):
            normal_cone(FinitePoints(((-1.0,), (1.0,))), (1.0,))


class ConvexSubdiffTest(SimpleTestCase):
    def test_abs_value(self):
        """Test the subdifferential of |x| at the kink and away from it"""
        self.assertEqual(convex_subdiff(NormP(1), 0.0), Interval(-1.0, 1.0))
        self.assertEqual(convex_subdiff(NormP(1), 2.0), Interval(1.0, 1.0))

    def test_planar_norms(self):
        np.testing.assert_allclose(convex_subdiff(NormP(2), (3.0, 4.0)).element(), [0.6, 0.8])
        self.assertEqual(convex_subdiff(NormP(2), (0.0, 0.0)), Disk((0.0, 0.0), 1.0))
        edge = convex_subdiff(NormP(1), (1.0, 0.0))
        self.assertLess(hausdorff(edge, hull_of([(1.0, -1.0), (1.0, 1.0)], 2)), 1e-12)
        face = convex_subdiff(NormP('inf'), (2.0, -2.0))
        self.assertLess(hausdorff(face, hull_of([(1.0, 0.0), (0.0, -1.0)], 2)), 1e-12)

    def test_composites(self):
        """Test the max-affine, sum and shift rules"""
        self.assertEqual(convex_subdiff(ScaledSquaredNorm(1.0), 3.0), Interval(6.0, 6.0))
        self.assertEqual(convex_subdiff(MaxAffine((((1.0,), 0.0), ((3.0,), 0.0))), 0.0), Interval(1.0, 3.0))
        self.assertEqual(convex_subdiff(Sum((NormP(1), ScaledSquaredNorm(1.0))), 0.0), Interval(-1.0, 1.0))
        self.assertEqual(convex_subdiff(Shift(NormP(1), (1.0,)), 1.0), Interval(-1.0, 1.0))

    def test_outside_domain_is_empty(self):
        self.assertTrue(convex_subdiff(Indicator(UNIT), 2.0).is_empty)

    def test_nonconvex_functions(self):
        """Test that isolated points of a finite set have the whole line as limiting subdifferential"""
        f = Indicator(FinitePoints(((-1.0,), (1.0,))))
        with self.assertRaises(UnsupportedSpecError):
            convex_subdiff(f, 1.0)
        self.assertEqual(limiting_subdiff(f, 1.0), Interval(-math.inf, math.inf))
        self.assertTrue(limiting_subdiff(f, 0.0).is_empty)
        self.assertIsInstance(limiting_subdiff(Indicator(FinitePoints(((0.0, 0.0), (1.0, 0.0)))), (0.0, 0.0)), Cone)


class FrechetCertificateTest(SimpleTestCase):
    def setUp(self):
        self.grid = line(-1.0, 1.0, 201)
        self.g = sample(NormP(1), self.grid)

    def test_subgradient_at_the_kink(self):
        """Test that slopes inside [-1, 1] are certified at 0"""
        certificate = frechet_certificate(self.g, 0.0, 0.5, 0.0)
        self.assertTrue(certificate.passed)
        self.assertEqual(len(certificate.radii), 4)
        self.assertEqual(certificate.verdict, 'pass')

    def test_slope_outside_needs_epsilon(self):
        self.assertFalse(frechet_certificate(self.g, 0.0, 1.5, 0.0).passed)
        self.assertLess(frechet_certificate(self.g, 0.0, 1.5, 0.0).worst, 0.0)
        self.assertTrue(frechet_certificate(self.g, 0.0, 1.5, 0.6).passed)

    def test_preconditions(self):
        with self.assertRaises(BoundaryMarginError):
            frechet_certificate(self.g, -1.0, 0.0, 0.0)
        with self.assertRaises(PreconditionError):
            frechet_certificate(sample(Indicator(UNIT), self.grid), -0.5, 0.0, 0.0)


class EkelandTest(SimpleTestCase):
    def test_ekeland_properties(self):
        """Test descent, localisation and the perturbed-minimum property"""
        grid = line(-1.0, 1.0, 201)
        g = sample(ScaledSquaredNorm(1.0), grid)
        eta, lam = 0.01, 0.1
        w_bar = ekeland_point(g, 0.05, eta, lam)
        g_bar = g.value(grid.locate(w_bar))
        self.assertLessEqual(g_bar, g.value(grid.locate((0.05,))))
        self.assertLessEqual(abs(w_bar[0] - 0.05), lam + 1e-12)
        points = grid.points()[:, 0]
        self.assertTrue((g_bar <= g.values + (eta / lam) * np.abs(points - w_bar[0]) + 1e-12).all())

    def test_start_must_be_nearly_optimal(self):
        grid = line(-1.0, 1.0, 201)
        g = sample(ScaledSquaredNorm(1.0), grid)
        with self.assertRaises(PreconditionError):
            ekeland_point(g, 0.5, 0.01, 0.1)
        with self.assertRaises(PreconditionError):
            ekeland_point(g, 0.0, 0.0, 0.1)


class TransferTest(SimpleTestCase):
    def test_huber_transfers_to_both_sides(self):
        """Test moving the envelope slope at 1 onto |x| and onto the kernel"""
        case = ConvCase(NormP(1), ScaledSquaredNorm(1.0), line(-2.0, 2.0, 401))
        to_f = transfer_to_f(case, 1.0, 1.0, 0.01, 0.1)
        np.testing.assert_allclose(to_f.w_tilde, [0.5])
        self.assertTrue(to_f.certificate.passed)
        self.assertIsNone(to_f.bound_holds)
        to_phi = transfer_to_phi(case, 1.0, 1.0, 0.01, 0.1)
        self.assertLessEqual(abs(to_phi.w_bar[0] - to_phi.w_tilde[0]), 0.05)
        self.assertTrue(to_phi.certificate.passed)

    def test_subadditive_kernel_bound(self):
        case = ConvCase(Indicator(UNIT), NormP(1), line(-2.0, 3.0, 501))
        transfer = transfer_to_f(case, 2.0, 1.0, 0.01, 0.1)
        np.testing.assert_allclose(transfer.w_bar, [1.0])
        self.assertTrue(transfer.certificate.passed)
        self.assertTrue(transfer.bound_holds)

    def test_uncertified_slope(self):
        case = ConvCase(NormP(1), ScaledSquaredNorm(1.0), line(-2.0, 2.0, 401))
        with self.assertRaises(PreconditionError):
            transfer_to_f(case, 1.0, 3.0, 0.01, 0.1)


class StrictDiffTest(SimpleTestCase):
    def setUp(self):
        self.grid = line(-1.0, 1.0, 201)

    def test_smooth_function(self):
        """Test that worst quotients shrink with the radius for x^2"""
        probe = strict_diff_probe(sample(ScaledSquaredNorm(1.0), self.grid), 0.5, 1.0)
        self.assertTrue(probe.passed)
        self.assertEqual(len(probe.worst), 4)
        self.assertLessEqual(probe.worst[-1], probe.worst[0])

    def test_kink_fails(self):
        probe = strict_diff_probe(sample(NormP(1), self.grid), 0.0, 0.0)
        self.assertFalse(probe.passed)
        self.assertAlmostEqual(probe.worst[-1], 1.0)

    def test_needs_margin(self):
        with self.assertRaises(BoundaryMarginError):
            strict_diff_probe(sample(NormP(1), self.grid), 0.95, 1.0)


class MoreauGradTest(SimpleTestCase):
    def test_huber_gradient(self):
        """Test 2 alpha (x - w) against the Huber derivative"""
        grid = line(-2.0, 2.0, 401)
        self.assertAlmostEqual(float(moreau_grad(NormP(1), 1.0, 1.0, grid)[0]), 1.0)
        self.assertAlmostEqual(float(moreau_grad(sample(NormP(1), grid), 1.0, 0.2)[0]), 0.4)

    def test_ambiguous_and_missing_grid(self):
        grid = line(-2.0, 2.0, 401)
        with self.assertRaises(AmbiguousProjectionError):
            moreau_grad(Indicator(FinitePoints(((-1.0,), (1.0,)))), 1.0, 0.0, grid)
        with self.assertRaises(PreconditionError):
            moreau_grad(NormP(1), 1.0, 0.0)
