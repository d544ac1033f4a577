"""
Builtin check corpus.

Every case lists points with the closed-form Frechet subdifferential of
its envelope where one is known by hand; the harness compares the
computed side of each formula against it.
"""
import math

from .envelope import ConvCase
from .extreal import Grid
from .funcspec import GaugeOf, Indicator, MaxAffine, NormP, ScaledSquaredNorm, Sum, zero_function
from .gauge import GaugeSet
from .harness import ConvexEntry, CheckCase, Corpus
from .sets import Ball, FinitePoints, IntervalBox, PolygonV
from .vecsets import Interval, hull_of, point_set


def _interval_gauge(lo, hi):
    return GaugeOf(GaugeSet(IntervalBox((lo,), (hi,))))


def _single(v):
    return Interval(v, v)


def builtin_cases():
    unit_interval = Indicator(IntervalBox((0.0,), (1.0,)))
    two_points = Indicator(FinitePoints(((-1.0,), (1.0,))))
    origin = Indicator(FinitePoints(((0.0,),)))
    sq = ScaledSquaredNorm(1.0)

    def line(lo, hi, n):
        return Grid((lo,), (hi,), (n,))

    return [
        CheckCase('unit-interval-abs', ConvCase(unit_interval, _interval_gauge(-1.0, 1.0), line(-2.0, 3.0, 501)),
                  points=[(0.0,), (0.5,), (1.0,), (2.0,)], ell=0.0, m=1.0, amp_alpha=5.0,
                  expected={(0.0,): Interval(-1.0, 0.0), (0.5,): _single(0.0), (1.0,): Interval(0.0, 1.0),
                            (2.0,): _single(1.0)}),
        CheckCase('two-points-l1', ConvCase(two_points, NormP(1), line(-3.0, 3.0, 601)),
                  points=[(0.0,), (0.5,), (2.0,)], ell=0.0, m=1.0,
                  expected={(0.5,): _single(-1.0), (2.0,): _single(1.0)}),
        CheckCase('origin-asymmetric-gauge', ConvCase(origin, _interval_gauge(-1.0, 2.0), line(-3.0, 3.0, 601)),
                  points=[(0.0,), (-1.0,), (1.5,)], ell=0.0, m=0.5, amp_alpha=7.0,
                  expected={(0.0,): Interval(-0.5, 1.0), (-1.0,): _single(-0.5), (1.5,): _single(1.0)}),
        CheckCase('huber', ConvCase(NormP(1), sq, line(-4.0, 4.0, 1601)),
                  points=[(0.0,), (0.25,), (2.0,)],
                  expected={(0.0,): _single(0.0), (0.25,): _single(0.5), (2.0,): _single(1.0)}),
        CheckCase('origin-moreau', ConvCase(origin, sq, line(-2.0, 2.0, 401)),
                  points=[(0.0,), (1.0,)],
                  expected={(0.0,): _single(0.0), (1.0,): _single(2.0)}),
        CheckCase('two-points-moreau', ConvCase(two_points, sq, line(-2.0, 2.0, 401)),
                  points=[(0.0,), (0.5,)],
                  expected={(0.5,): _single(-1.0)}),
        CheckCase('abs-steep-gauge', ConvCase(NormP(1), _interval_gauge(-0.5, 0.5), line(-3.0, 3.0, 601)),
                  points=[(0.0,), (0.5,), (-1.0,)], ell=1.0, m=2.0, amp_alpha=7.0,
                  expected={(0.0,): Interval(-1.0, 1.0), (0.5,): _single(1.0), (-1.0,): _single(-1.0)}),
        CheckCase('abs-steeper-gauge', ConvCase(NormP(1), _interval_gauge(-1.0 / 3, 1.0 / 3), line(-3.0, 3.0, 601)),
                  points=[(0.0,), (1.0,)], ell=1.0, m=3.0, amp_alpha=5.0,
                  expected={(0.0,): Interval(-1.0, 1.0), (1.0,): _single(1.0)}),
        CheckCase('zero-l1', ConvCase(zero_function(1), NormP(1), line(-2.0, 3.0, 501)),
                  points=[(0.0,), (1.0,)], ell=0.0, m=1.0, amp_alpha=3.0,
                  expected={(0.0,): _single(0.0), (1.0,): _single(0.0)}),
        CheckCase('unit-interval-min-time', ConvCase(unit_interval, _interval_gauge(-0.5, 0.5), line(-2.0, 3.0, 501)),
                  points=[(0.5,), (1.0,), (2.0,)], ell=0.0, m=2.0, amp_alpha=5.0,
                  expected={(0.5,): _single(0.0), (1.0,): Interval(0.0, 2.0), (2.0,): _single(2.0)}),
        CheckCase('disk-distance', ConvCase(Indicator(Ball((0.0, 0.0), 1.0)), GaugeOf(GaugeSet.unit_ball(2)),
                                            Grid((-2.0, -2.0), (2.0, 2.0), (81, 81))),
                  points=[(1.0, 0.0), (0.0, 0.0), (0.0, 1.5)], ell=0.0, m=1.0, amp_alpha=5.0,
                  expected={(1.0, 0.0): hull_of([(0.0, 0.0), (1.0, 0.0)], 2), (0.0, 0.0): point_set((0.0, 0.0)),
                            (0.0, 1.5): point_set((0.0, 1.0))}),
        CheckCase('box-rectangle-gauge',
                  ConvCase(Indicator(IntervalBox((0.0, 0.0), (1.0, 1.0))),
                           GaugeOf(GaugeSet(PolygonV(((-1.0, -3.0), (1.0, -3.0), (1.0, 3.0), (-1.0, 3.0))))),
                           Grid((-1.0, -1.0), (2.0, 2.0), (61, 61))),
                  points=[(1.0, 1.0), (0.5, 0.5), (1.5, 0.5)], ell=0.0, m=1.0 / math.sqrt(10.0), amp_alpha=10.0,
                  expected={(1.0, 1.0): hull_of([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0 / 3)], 2),
                            (0.5, 0.5): point_set((0.0, 0.0)), (1.5, 0.5): point_set((1.0, 0.0))}),
    ]


def convex_entries():
    line = Grid((-2.0,), (3.0,), (501,))
    square = Grid((-0.5, -0.5), (0.5, 0.5), (51, 51))
    return [
        ConvexEntry('abs', NormP(1), line, ((-1.0,), (0.0,), (1.5,))),
        ConvexEntry('square', ScaledSquaredNorm(1.0), line, ((-1.0,), (0.5,), (2.0,))),
        ConvexEntry('max-affine', MaxAffine((((1.0,), 0.0), ((2.0,), -1.0))), line, ((0.0,), (1.0,), (2.0,))),
        ConvexEntry('asymmetric-gauge', _interval_gauge(-1.0, 2.0), line, ((-1.0,), (0.0,), (1.0,))),
        ConvexEntry('abs-plus-square', Sum((NormP(1), ScaledSquaredNorm(0.5))), line, ((0.0,), (1.0,))),
        ConvexEntry('l1-plane', NormP(1), square, ((0.0, 0.0), (0.0, 0.2), (0.24, 0.24))),
        ConvexEntry('linf-plane', NormP('inf'), square, ((0.0, 0.0), (0.24, 0.1))),
        ConvexEntry('square-plane', ScaledSquaredNorm(1.0), square, ((0.0, 0.0), (0.1, -0.1))),
    ]


def builtin_corpus():
    return Corpus('builtin', builtin_cases(), convex_entries(), ekeland_instances=100)
