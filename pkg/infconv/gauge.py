"""
Minkowski gauges of bounded convex sets F with 0 in their interior.

Polygonal and box shapes are evaluated per facet: with facet hyperplanes
a_i . y = b_i (b_i > 0), rho_F(x) = max_i (a_i . x) / b_i. The rows a_i / b_i
are the vertices of the polar set, which is also the subdifferential of the
gauge at the origin.
"""
import math
from functools import cached_property

import numpy as np
from django.core.exceptions import ValidationError

from .exceptions import ShapeError, UnsupportedSpecError
from .sets import Ball, FinitePoints, IntervalBox, PolygonV
from .vecsets import Disk, Interval, hull_of, point_set


class GaugeSet:
    """A dynamics set F: interval, box, convex polygon or ball with 0 interior."""

    def __init__(self, shape):
        if isinstance(shape, Ball) and shape.dim == 1:
            shape = shape.as_box()
        if isinstance(shape, FinitePoints):
            raise ValidationError("A gauge set must be an interval, box, polygon or ball")
        self.shape = shape
        if isinstance(shape, Ball):
            gap = float(np.linalg.norm(shape.center))
            if not gap < shape.radius:
                raise ValidationError("Gauge ball must contain the origin in its interior")
        else:
            A, b = shape.halfplanes()
            if not (b > 0).all():
                raise ValidationError("Gauge set must contain the origin in its interior")

    def __eq__(self, other):
        return isinstance(other, GaugeSet) and self.shape == other.shape

    def __hash__(self):
        return hash(self.shape)

    def __repr__(self):
        return f'GaugeSet({self.shape!r})'

    @classmethod
    def unit_ball(cls, dim):
        if dim == 1:
            return cls(IntervalBox((-1.0,), (1.0,)))
        return cls(Ball((0.0, 0.0), 1.0))

    @property
    def dim(self):
        return self.shape.dim

    @property
    def contains_zero_interior(self):
        return True

    @property
    def is_ball(self):
        return isinstance(self.shape, Ball)

    @cached_property
    def polar_vertices(self):
        """Rows a_i / b_i, one per facet (polyhedral shapes only)."""
        A, b = self.shape.halfplanes()
        return A / b[:, None]

    @cached_property
    def norm_of_set(self):
        if self.is_ball:
            return float(np.linalg.norm(self.shape.center)) + self.shape.radius
        return float(np.linalg.norm(self.shape.vertices(), axis=1).max())

    @property
    def m(self):
        return 1.0 / self.norm_of_set

    @cached_property
    def inradius(self):
        if self.is_ball:
            return self.shape.radius - float(np.linalg.norm(self.shape.center))
        A, b = self.shape.halfplanes()
        return float((b / np.linalg.norm(A, axis=1)).min())

    def lipschitz_constant(self):
        """Exact Lipschitz (and calmness-at-0) constant of the gauge."""
        return 1.0 / self.inradius

    def evaluate_many(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise ShapeError(f"Gauge of a {self.dim}D set evaluated at shape {X.shape}")
        if not self.is_ball:
            return np.maximum((X @ self.polar_vertices.T).max(axis=1), 0.0)
        c = np.array(self.shape.center)
        r = self.shape.radius
        if not c.any():
            return np.linalg.norm(X, axis=1) / r
        # rho is the positive root of k t^2 + 2 t (x . c) - ||x||^2 = 0
        k = r * r - float(c @ c)
        xc = X @ c
        return (np.sqrt(xc * xc + k * np.einsum('ij,ij->i', X, X)) - xc) / k

    def to_dict(self):
        return dict(self.shape.to_dict(), require_zero_interior=True)


def gauge_eval(F, x):
    """rho_F(x) = inf{t >= 0 : x in tF}."""
    return float(F.evaluate_many(np.atleast_1d(np.asarray(x, dtype=float))[None, :])[0])


def coercivity(F):
    """(||F||, m) with m = 1/||F||, so that m ||x|| <= rho_F(x)."""
    return F.norm_of_set, F.m


def gauge_subdiff_at_zero(F):
    """{v : <v, x> <= rho_F(x) for all x}, the polar set of F."""
    if F.dim == 1:
        lo, hi = F.shape.lo[0], F.shape.hi[0]
        return Interval(1.0 / lo, 1.0 / hi)
    if F.is_ball:
        if any(F.shape.center):
            raise UnsupportedSpecError("The polar of an off-center disk is an ellipse")
        return Disk((0.0, 0.0), 1.0 / F.shape.radius)
    return hull_of(F.polar_vertices, 2)


def gauge_subdiff(F, x, active_tol=1e-12):
    """Convex subdifferential of rho_F at x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not x.any():
        return gauge_subdiff_at_zero(F)
    if F.is_ball:
        c = np.array(F.shape.center)
        t = gauge_eval(F, x)
        d = x - t * c
        return point_set(d / (float(d @ c) + t * F.shape.radius ** 2))
    P = F.polar_vertices
    values = P @ x
    top = values.max()
    active = P[values >= top - active_tol * max(1.0, abs(top))]
    if F.dim == 1:
        return Interval(active.min(), active.max())
    return hull_of(active, 2)


def facet_count(F):
    return math.inf if F.is_ball else len(F.polar_vertices)
