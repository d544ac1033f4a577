"""
Closed sets used as indicator targets and gauge shapes.

Four variants: ``IntervalBox``, ``PolygonV``, ``Ball`` and ``FinitePoints``.
All are immutable and evaluate membership on batches of points.
"""
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

from .exceptions import ShapeError


def _points_array(points, dim):
    X = np.atleast_2d(np.asarray(points, dtype=float))
    if dim == 1 and X.shape[0] == 1 and X.shape[1] != 1:
        X = X.T
    if X.shape[1] != dim:
        raise ShapeError(f"Expected {dim}D points, got shape {X.shape}")
    return X


def cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class SetSpec:
    """Base class for the set variants."""
    kind = None

    @property
    def dim(self):
        raise NotImplementedError

    @property
    def is_convex(self):
        return True

    def contains_many(self, X, tol=0.0):
        raise NotImplementedError

    def contains(self, x, tol=0.0):
        return bool(self.contains_many(np.atleast_1d(np.asarray(x, dtype=float))[None, :], tol)[0])

    def halfplanes(self):
        """(A, b) with the set equal to {x : A x <= b}; bounded polyhedral shapes only."""
        raise NotImplementedError(f"{self.kind} has no half-plane form")


@dataclass(frozen=True)
class IntervalBox(SetSpec):
    lo: tuple
    hi: tuple
    kind = 'box'

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)
        if len(lo) != len(hi) or len(lo) not in (1, 2):
            raise ValidationError("IntervalBox needs matching lo/hi of dimension 1 or 2")
        if any(not np.isfinite(v) for v in lo + hi):
            raise ValidationError("IntervalBox bounds must be finite")
        if any(l > h for l, h in zip(lo, hi)):
            raise ValidationError(f"IntervalBox needs lo <= hi, got {lo} and {hi}")

    @property
    def dim(self):
        return len(self.lo)

    def contains_many(self, X, tol=0.0):
        X = _points_array(X, self.dim)
        lo, hi = np.array(self.lo), np.array(self.hi)
        return np.all((X >= lo - tol) & (X <= hi + tol), axis=1)

    def halfplanes(self):
        A = np.vstack([np.eye(self.dim), -np.eye(self.dim)])
        b = np.concatenate([np.array(self.hi), -np.array(self.lo)])
        return A, b

    def vertices(self):
        if self.dim == 1:
            return np.array([[self.lo[0]], [self.hi[0]]])
        (x0, y0), (x1, y1) = self.lo, self.hi
        return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])

    def to_dict(self):
        return {'kind': self.kind, 'lo': list(self.lo), 'hi': list(self.hi)}


@dataclass(frozen=True)
class PolygonV(SetSpec):
    """Convex polygon from counterclockwise, strictly convex vertices."""
    corners: tuple
    kind = 'polygon'

    def __post_init__(self):
        V = np.asarray(self.corners, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
            raise ValidationError("PolygonV needs at least 3 two-dimensional vertices")
        if not np.isfinite(V).all():
            raise ValidationError("PolygonV vertices must be finite")
        edges = np.roll(V, -1, axis=0) - V
        turns = cross2(edges, np.roll(edges, -1, axis=0))
        if not (turns > 0).all():
            raise ValidationError("PolygonV vertices must be counterclockwise and strictly convex")
        object.__setattr__(self, 'corners', tuple(tuple(float(c) for c in v) for v in V))

    @property
    def dim(self):
        return 2

    def vertices(self):
        return np.array(self.corners)

    def halfplanes(self):
        V = self.vertices()
        edges = np.roll(V, -1, axis=0) - V
        A = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
        b = np.einsum('ij,ij->i', A, V)
        return A, b

    def contains_many(self, X, tol=0.0):
        X = _points_array(X, 2)
        A, b = self.halfplanes()
        scale = np.linalg.norm(A, axis=1)
        return np.all(X @ A.T - b <= tol * scale, axis=1)

    def to_dict(self):
        return {'kind': self.kind, 'vertices': [list(v) for v in self.corners]}


@dataclass(frozen=True)
class Ball(SetSpec):
    center: tuple
    radius: float
    kind = 'ball'

    def __post_init__(self):
        center = tuple(float(v) for v in np.atleast_1d(self.center))
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'radius', float(self.radius))
        if len(center) not in (1, 2):
            raise ValidationError("Ball center must be 1D or 2D")
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValidationError(f"Ball radius must be positive, got {self.radius}")

    @property
    def dim(self):
        return len(self.center)

    def contains_many(self, X, tol=0.0):
        X = _points_array(X, self.dim)
        return np.linalg.norm(X - np.array(self.center), axis=1) <= self.radius + tol

    def as_box(self):
        """The same set as an interval, for 1D balls."""
        c = self.center[0]
        return IntervalBox((c - self.radius,), (c + self.radius,))

    def to_dict(self):
        return {'kind': self.kind, 'center': list(self.center), 'radius': self.radius}


@dataclass(frozen=True)
class FinitePoints(SetSpec):
    points: tuple
    kind = 'points'

    def __post_init__(self):
        P = np.asarray(self.points, dtype=float)
        if P.ndim == 1:
            P = P[:, None]
        if P.ndim != 2 or len(P) == 0 or P.shape[1] not in (1, 2):
            raise ValidationError("FinitePoints needs a nonempty list of 1D or 2D points")
        object.__setattr__(self, 'points', tuple(tuple(float(c) for c in p) for p in P))

    @property
    def dim(self):
        return len(self.points[0])

    @property
    def is_convex(self):
        return len(self.points) == 1

    def array(self):
        return np.array(self.points)

    def contains_many(self, X, tol=0.0):
        X = _points_array(X, self.dim)
        P = self.array()
        distances = np.linalg.norm(X[:, None, :] - P[None, :, :], axis=2)
        return (distances <= tol).any(axis=1)

    def to_dict(self):
        return {'kind': self.kind, 'points': [list(p) for p in self.points]}
