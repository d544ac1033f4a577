"""
Closed convex sets of (sub)gradients.

``Interval`` covers 1D; in 2D a set is a ``Polygon`` (one vertex, a segment,
or a strictly convex counterclockwise polygon), a ``Cone`` with apex 0
(one ray, a pointed wedge of two rays, or the whole plane), a ``Disk`` or a
``Sector`` (a pointed wedge cut by a disk around its apex).
``EmptySet`` stands for "no subgradient".

Hausdorff distances are exact: for compact convex sets
H(A, B) = max over unit u of |sigma_A(u) - sigma_B(u)|, and both support
functions are piecewise sinusoids whose break directions are known in closed
form, so the maximum is taken over a finite candidate set.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .exceptions import UnsupportedSpecError
from .sets import cross2

_TOL = 1e-12


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _angle(v):
    return math.atan2(v[1], v[0])


def _fmt(x):
    if x == math.inf:
        return 'inf'
    if x == -math.inf:
        return '-inf'
    return float(x)


class VecSet:
    dim = None

    @property
    def is_empty(self):
        return False

    @property
    def is_bounded(self):
        return True

    @property
    def is_singleton(self):
        return False

    def distance(self, v):
        raise NotImplementedError

    def contains(self, v, tol=_TOL):
        return self.distance(v) <= tol

    def extreme_points(self):
        """Finite list of points whose hull is the set (boundary samples for disks)."""
        raise UnsupportedSpecError(f"{type(self).__name__} has no finite extreme-point list")

    def centroid(self):
        return self.extreme_points().mean(axis=0)

    def element(self):
        """The unique element of a singleton set."""
        if not self.is_singleton:
            raise UnsupportedSpecError(f"{self!r} is not a singleton")
        return self.extreme_points()[0]


@dataclass(frozen=True)
class EmptySet(VecSet):
    dim: int = 1

    @property
    def is_empty(self):
        return True

    def distance(self, v):
        return math.inf

    def negate(self):
        return self

    def extreme_points(self):
        return np.zeros((0, self.dim))

    def to_dict(self):
        return {'kind': 'empty', 'dim': self.dim}


@dataclass(frozen=True)
class Interval(VecSet):
    lo: float
    hi: float
    dim = 1

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi or lo == math.inf or hi == -math.inf:
            raise ValueError(f"Invalid interval [{lo}, {hi}]")
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    @property
    def is_bounded(self):
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def is_singleton(self):
        return self.lo == self.hi

    def distance(self, v):
        v = float(np.atleast_1d(v)[0])
        return max(self.lo - v, v - self.hi, 0.0)

    def negate(self):
        return Interval(-self.hi, -self.lo)

    def extreme_points(self):
        if not self.is_bounded:
            raise UnsupportedSpecError(f"Unbounded interval {self} has no finite extreme points")
        if self.is_singleton:
            return np.array([[self.lo]])
        return np.array([[self.lo], [self.hi]])

    def truncated(self):
        return Interval(max(self.lo, -1.0), min(self.hi, 1.0))

    def to_dict(self):
        return {'kind': 'interval', 'lo': _fmt(self.lo), 'hi': _fmt(self.hi)}

    def __str__(self):
        return f'[{self.lo:g}, {self.hi:g}]'


@dataclass(frozen=True)
class Polygon(VecSet):
    """Point, segment or strictly convex counterclockwise polygon."""
    vertices: tuple
    dim = 2

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(V) == 0 or not np.isfinite(V).all():
            raise ValueError("Polygon needs finite vertices")
        if len(V) == 2 and np.allclose(V[0], V[1], rtol=0, atol=0):
            V = V[:1]
        if len(V) >= 3:
            edges = np.roll(V, -1, axis=0) - V
            if not (cross2(edges, np.roll(edges, -1, axis=0)) > 0).all():
                raise ValueError("Polygon vertices must be counterclockwise and strictly convex")
        object.__setattr__(self, 'vertices', tuple(tuple(float(c) for c in v) for v in V))

    @property
    def array(self):
        return np.array(self.vertices)

    @property
    def is_singleton(self):
        return len(self.vertices) == 1

    @property
    def is_full(self):
        return len(self.vertices) >= 3

    def halfplanes(self):
        V = self.array
        edges = np.roll(V, -1, axis=0) - V
        A = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
        return A, np.einsum('ij,ij->i', A, V)

    def distance(self, v):
        v = np.asarray(v, dtype=float)
        V = self.array
        if len(V) == 1:
            return float(np.linalg.norm(v - V[0]))
        if len(V) >= 3:
            A, b = self.halfplanes()
            if (A @ v - b <= _TOL * np.linalg.norm(A, axis=1)).all():
                return 0.0
        starts = V
        ends = np.roll(V, -1, axis=0) if len(V) >= 3 else V[::-1]
        return min(_point_segment_distance(v, a, b) for a, b in zip(starts, ends))

    def negate(self):
        return Polygon(-self.array)

    def extreme_points(self):
        return self.array

    def support(self, u):
        return float((self.array @ u).max())

    def _atoms(self):
        return [(v, 0.0, None) for v in self.array]

    def to_dict(self):
        return {'kind': 'polygon', 'vertices': [list(v) for v in self.vertices]}


@dataclass(frozen=True)
class Disk(VecSet):
    center: tuple
    radius: float
    dim = 2

    def __post_init__(self):
        object.__setattr__(self, 'center', tuple(float(c) for c in self.center))
        object.__setattr__(self, 'radius', float(self.radius))
        if len(self.center) != 2 or not self.radius > 0:
            raise ValueError("Disk needs a 2D center and a positive radius")

    @property
    def c(self):
        return np.array(self.center)

    def distance(self, v):
        return max(float(np.linalg.norm(np.asarray(v, dtype=float) - self.c)) - self.radius, 0.0)

    def negate(self):
        return Disk(-self.c, self.radius)

    def extreme_points(self, count=16):
        theta = 2 * np.pi * np.arange(count) / count
        return self.c + self.radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)

    def centroid(self):
        return self.c

    def support(self, u):
        return float(self.c @ u + self.radius)

    def _atoms(self):
        return [(self.c, self.radius, None)]

    def to_dict(self):
        return {'kind': 'ball', 'center': list(self.center), 'radius': self.radius}


@dataclass(frozen=True)
class Cone(VecSet):
    """
    Closed convex cone with apex 0: one ray, a pointed wedge swept
    counterclockwise from ``rays[0]`` to ``rays[1]``, or the whole plane.
    """
    rays: tuple = ()
    whole: bool = False
    dim = 2

    def __post_init__(self):
        if self.whole:
            object.__setattr__(self, 'rays', ())
            return
        R = [_unit(r) for r in self.rays]
        if len(R) == 2 and np.allclose(R[0], R[1], atol=1e-14):
            R = R[:1]
        if len(R) not in (1, 2):
            raise ValueError("Cone needs one or two rays unless it is the whole plane")
        if len(R) == 2 and not cross2(R[0], R[1]) > 1e-14:
            raise ValueError("Cone rays must span a pointed wedge counterclockwise")
        object.__setattr__(self, 'rays', tuple(tuple(float(c) for c in r) for r in R))

    @classmethod
    def whole_plane(cls):
        return cls(whole=True)

    @property
    def is_bounded(self):
        return False

    @property
    def R(self):
        return np.array(self.rays)

    def halfplanes(self):
        r1, r2 = self.R
        return np.array([[r1[1], -r1[0]], [-r2[1], r2[0]]]), np.zeros(2)

    def _in_wedge(self, v, tol=_TOL):
        r1, r2 = self.R
        scale = max(1.0, float(np.linalg.norm(v)))
        return cross2(r1, v) >= -tol * scale and cross2(v, r2) >= -tol * scale

    def distance(self, v):
        v = np.asarray(v, dtype=float)
        if self.whole:
            return 0.0
        if len(self.rays) == 2 and self._in_wedge(v, 0.0):
            return 0.0
        return min(float(np.linalg.norm(v - max(0.0, float(r @ v)) * r)) for r in self.R)

    def negate(self):
        if self.whole:
            return self
        return Cone(tuple(-r for r in self.R))

    def truncated(self):
        """Intersection with the closed unit disk."""
        if self.whole:
            return Disk((0.0, 0.0), 1.0)
        if len(self.rays) == 1:
            return Polygon(((0.0, 0.0), self.rays[0]))
        return Sector(self.rays)

    def to_dict(self):
        if self.whole:
            return {'kind': 'cone', 'whole': True}
        return {'kind': 'cone', 'rays': [list(r) for r in self.rays]}


@dataclass(frozen=True)
class Sector(VecSet):
    """
    Pointed wedge with apex 0, swept counterclockwise from ``rays[0]`` to
    ``rays[1]``, cut by the disk of ``radius`` around the apex.
    """
    rays: tuple
    radius: float = 1.0
    dim = 2

    def __post_init__(self):
        R = [_unit(r) for r in self.rays]
        if len(R) != 2 or not cross2(R[0], R[1]) > 1e-14:
            raise ValueError("Sector rays must span a pointed wedge counterclockwise")
        if not float(self.radius) > 0:
            raise ValueError("Sector needs a positive radius")
        object.__setattr__(self, 'rays', tuple(tuple(float(c) for c in r) for r in R))
        object.__setattr__(self, 'radius', float(self.radius))

    @property
    def R(self):
        return np.array(self.rays)

    @property
    def arc(self):
        return _angle(self.R[0]), _angle(self.R[1])

    def _in_wedge(self, v, tol=_TOL):
        r1, r2 = self.R
        scale = max(1.0, float(np.linalg.norm(v)))
        return cross2(r1, v) >= -tol * scale and cross2(v, r2) >= -tol * scale

    def distance(self, v):
        v = np.asarray(v, dtype=float)
        if self._in_wedge(v, 0.0):
            return max(float(np.linalg.norm(v)) - self.radius, 0.0)
        zero = np.zeros(2)
        return min(_point_segment_distance(v, zero, self.radius * r) for r in self.R)

    def negate(self):
        return Sector(tuple(-r for r in self.R), self.radius)

    def extreme_points(self, count=9):
        """The apex plus ``count`` points along the arc, both ends included."""
        start, end = self.arc
        sweep = (end - start) % (2 * math.pi)
        theta = start + sweep * np.arange(count) / (count - 1)
        arc = self.radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return np.vstack([np.zeros((1, 2)), arc])

    def support(self, u):
        best = max(0.0, self.radius * float(self.R[0] @ u), self.radius * float(self.R[1] @ u))
        if self._in_wedge(u, 0.0):
            best = max(best, self.radius * float(np.linalg.norm(u)))
        return best

    def _atoms(self):
        zero = np.zeros(2)
        return [(zero, 0.0, None), (self.radius * self.R[0], 0.0, None), (self.radius * self.R[1], 0.0, None),
                (zero, self.radius, self.arc)]

    def to_dict(self):
        return {'kind': 'sector', 'rays': [list(r) for r in self.rays], 'radius': self.radius}


def _point_segment_distance(v, a, b):
    d = b - a
    length2 = float(d @ d)
    t = 0.0 if length2 == 0 else min(max(float((v - a) @ d) / length2, 0.0), 1.0)
    return float(np.linalg.norm(v - (a + t * d)))


def point_set(v):
    """The singleton {v} as a VecSet."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if len(v) == 1:
        return Interval(v[0], v[0])
    return Polygon((tuple(v),))


def zero_set(dim):
    return point_set(np.zeros(dim))


def hull_of(points, dim):
    """Convex hull of finitely many points as an exact VecSet."""
    P = np.asarray(points, dtype=float).reshape(-1, dim)
    if len(P) == 0:
        return EmptySet(dim)
    if dim == 1:
        return Interval(P.min(), P.max())
    scale = max(1.0, float(np.abs(P).max()))
    unique = []
    for p in P:
        if all(np.linalg.norm(p - q) > _TOL * scale for q in unique):
            unique.append(p)
    P = np.array(unique)
    if len(P) == 1:
        return Polygon((tuple(P[0]),))
    centered = P - P.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    if len(P) == 2 or s[1] <= 1e-10 * max(s[0], _TOL):
        proj = centered @ vt[0]
        return Polygon((tuple(P[proj.argmin()]), tuple(P[proj.argmax()])))
    V = P[ConvexHull(P).vertices]
    # drop vertices on (nearly) straight angles so the polygon stays strictly convex
    changed = True
    while changed and len(V) > 3:
        changed = False
        edges = np.roll(V, -1, axis=0) - V
        turns = cross2(np.roll(edges, 1, axis=0), edges)
        flat = np.where(turns <= _TOL * scale * scale)[0]
        if len(flat):
            V = np.delete(V, flat[0], axis=0)
            changed = True
    return Polygon(V)


def minkowski_sum(A, B):
    """A + B for the combinations that stay representable."""
    if A.is_empty or B.is_empty:
        return EmptySet(A.dim)
    if A.dim == 1:
        return Interval(A.lo + B.lo, A.hi + B.hi)
    if isinstance(B, Polygon) and not isinstance(A, Polygon):
        A, B = B, A
    if isinstance(A, Polygon) and isinstance(B, Polygon):
        sums = (A.array[:, None, :] + B.array[None, :, :]).reshape(-1, 2)
        return hull_of(sums, 2)
    if isinstance(A, Polygon) and A.is_singleton:
        shift = A.array[0]
        if isinstance(B, Disk):
            return Disk(B.c + shift, B.radius)
        if isinstance(B, Cone) and np.allclose(shift, 0.0, atol=_TOL):
            return B
    if isinstance(A, Disk) and isinstance(B, Disk):
        return Disk(A.c + B.c, A.radius + B.radius)
    if isinstance(A, Cone) and isinstance(B, Cone):
        if A.whole or B.whole:
            return Cone.whole_plane()
        return _cone_hull(list(A.R) + list(B.R))
    raise UnsupportedSpecError(f"Minkowski sum of {type(A).__name__} and {type(B).__name__} is not representable")


def cone_generated(rays):
    """Smallest closed convex cone holding the given rays; must be pointed."""
    rays = [_unit(r) for r in rays]
    if len(rays) == 1:
        return Cone((rays[0],))
    return _cone_hull(rays)


def _cone_hull(rays):
    angles = sorted(_angle(r) % (2 * math.pi) for r in rays)
    gaps = [(angles[(i + 1) % len(angles)] - angles[i]) % (2 * math.pi) for i in range(len(angles))]
    if len(angles) == 1:
        gaps = [2 * math.pi]
    widest = int(np.argmax(gaps))
    if gaps[widest] <= math.pi + 1e-14:
        raise UnsupportedSpecError("Cone generated by these rays is not pointed")
    start = angles[(widest + 1) % len(angles)]
    end = angles[widest]
    r1 = np.array([math.cos(start), math.sin(start)])
    r2 = np.array([math.cos(end), math.sin(end)])
    return Cone((r1, r2))


def _clip(vertices, A, b, tol=_TOL):
    """Clip a closed vertex loop by the half-planes A x <= b."""
    points = [np.asarray(v, dtype=float) for v in vertices]
    for a, beta in zip(A, b):
        if not points:
            break
        scale = max(1.0, float(np.linalg.norm(a)))
        values = [float(a @ p) - beta for p in points]
        kept = []
        for i, p in enumerate(points):
            j = (i + 1) % len(points)
            if values[i] <= tol * scale:
                kept.append(p)
            if (values[i] < -tol * scale and values[j] > tol * scale) or \
                    (values[i] > tol * scale and values[j] < -tol * scale):
                t = values[i] / (values[i] - values[j])
                kept.append(p + t * (points[j] - p))
        points = kept
    return points


def _segment_disk(a, b, disk):
    d = b - a
    f = a - disk.c
    qa, qb, qc = float(d @ d), 2 * float(f @ d), float(f @ f) - disk.radius ** 2
    if qa == 0:
        return hull_of([a], 2) if qc <= _TOL else EmptySet(2)
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return EmptySet(2)
    root = math.sqrt(disc)
    t1, t2 = max((-qb - root) / (2 * qa), 0.0), min((-qb + root) / (2 * qa), 1.0)
    if t1 > t2:
        return EmptySet(2)
    return hull_of([a + t1 * d, a + t2 * d], 2)


def _ray_segment(cone, other):
    reach = 1.0
    if isinstance(other, Polygon):
        reach += float(np.linalg.norm(other.array, axis=1).max())
    elif isinstance(other, Disk):
        reach += float(np.linalg.norm(other.c)) + other.radius
    return Polygon(((0.0, 0.0), tuple(reach * cone.R[0])))


def intersect(A, B):
    """A ∩ B, exact, for the combinations that stay representable."""
    if A.is_empty or B.is_empty:
        return EmptySet(A.dim)
    if A.dim == 1:
        lo, hi = max(A.lo, B.lo), min(A.hi, B.hi)
        if lo > hi:
            if lo - hi <= _TOL * max(1.0, abs(lo)):
                return Interval(hi, hi)
            return EmptySet(1)
        return Interval(lo, hi)
    if isinstance(A, Cone) and A.whole:
        return B
    if isinstance(B, Cone) and B.whole:
        return A
    order = {Polygon: 0, Cone: 1, Disk: 2}
    if order.get(type(A), 3) > order.get(type(B), 3):
        A, B = B, A
    if isinstance(A, Polygon) and A.is_singleton:
        return A if B.contains(A.array[0], 1e-12) else EmptySet(2)
    if isinstance(A, Cone) and len(A.rays) == 1 and not isinstance(B, Cone):
        A = _ray_segment(A, B)
    if isinstance(A, Polygon) and isinstance(B, Polygon):
        if not B.is_full and A.is_full:
            A, B = B, A
        if B.is_full:
            clipped = _clip(A.array, *B.halfplanes())
            return hull_of(clipped, 2) if clipped else EmptySet(2)
        return _segment_segment(A, B)
    if isinstance(A, Polygon) and isinstance(B, Cone):
        if len(B.rays) == 1:
            return intersect(A, _ray_segment(B, A))
        clipped = _clip(A.array, *B.halfplanes())
        return hull_of(clipped, 2) if clipped else EmptySet(2)
    if isinstance(A, Polygon) and isinstance(B, Disk):
        if not A.is_full:
            a = A.array[0]
            return _segment_disk(a, A.array[-1], B)
        if all(B.contains(v, 1e-12) for v in A.array):
            return A
        H, b = A.halfplanes()
        if (H @ B.c + B.radius * np.linalg.norm(H, axis=1) <= b).all():
            return B
    if isinstance(A, Cone) and isinstance(B, Cone):
        return _cone_cone(A, B)
    if isinstance(A, Cone) and isinstance(B, Disk):
        if A.distance(B.c) > B.radius:
            return EmptySet(2)
        H, b = A.halfplanes()
        if (H @ B.c + B.radius * np.linalg.norm(H, axis=1) <= b).all():
            return B
        if np.linalg.norm(B.c) <= _TOL:
            return Sector(A.rays, B.radius)
    if isinstance(A, Disk) and isinstance(B, Disk):
        gap = float(np.linalg.norm(A.c - B.c))
        if gap + A.radius <= B.radius:
            return A
        if gap + B.radius <= A.radius:
            return B
        if gap > A.radius + B.radius:
            return EmptySet(2)
    raise UnsupportedSpecError(f"Intersection of {A} and {B} is not representable")


def _segment_segment(A, B):
    a0, a1 = A.array[0], A.array[-1]
    b0, b1 = B.array[0], B.array[-1]
    da, db = a1 - a0, b1 - b0
    denom = cross2(da, db)
    scale = max(1.0, float(np.linalg.norm(da) * np.linalg.norm(db)))
    if abs(denom) <= _TOL * scale:
        if abs(cross2(da, b0 - a0)) > _TOL * scale:
            return EmptySet(2)
        length2 = float(da @ da)
        t0, t1 = sorted([float((b0 - a0) @ da) / length2, float((b1 - a0) @ da) / length2])
        lo, hi = max(t0, 0.0), min(t1, 1.0)
        if lo > hi:
            return EmptySet(2)
        return hull_of([a0 + lo * da, a0 + hi * da], 2)
    t = cross2(b0 - a0, db) / denom
    s = cross2(b0 - a0, da) / denom
    if -_TOL <= t <= 1 + _TOL and -_TOL <= s <= 1 + _TOL:
        return point_set(a0 + t * da)
    return EmptySet(2)


def _cone_cone(A, B):
    if len(A.rays) == 1 and len(B.rays) == 1:
        if np.allclose(A.R[0], B.R[0], atol=1e-12):
            return A
        return zero_set(2)
    if len(A.rays) == 1:
        A, B = B, A
    if len(B.rays) == 1:
        return B if A._in_wedge(B.R[0]) else zero_set(2)
    inside = [r for r in B.R if A._in_wedge(r)] + [r for r in A.R if B._in_wedge(r)]
    if not inside:
        return zero_set(2)
    angles = sorted({round((_angle(r) - _angle(A.R[0])) % (2 * math.pi), 14) for r in inside})
    start = _angle(A.R[0]) + angles[0]
    end = _angle(A.R[0]) + angles[-1]
    r1 = np.array([math.cos(start), math.sin(start)])
    if angles[-1] - angles[0] <= 1e-14:
        return Cone((r1,))
    return Cone((r1, np.array([math.cos(end), math.sin(end)])))


def _breakpoints(atoms):
    angles = []
    for i, (p, k, arc) in enumerate(atoms):
        if arc is not None:
            angles.extend(arc)
        for q, m, _ in atoms[i + 1:]:
            d = p - q
            norm = float(np.linalg.norm(d))
            if norm <= _TOL:
                continue
            c = (m - k) / norm
            if abs(c) <= 1:
                base, spread = _angle(d), math.acos(c)
                angles.extend([base + spread, base - spread])
    return angles


def _truncated_pair(A, B):
    if A.is_bounded and B.is_bounded:
        return A, B
    if A.is_bounded or B.is_bounded:
        return None
    return A.truncated(), B.truncated()


def hausdorff(A, B):
    """
    Hausdorff distance between two VecSets.

    Cones (and unbounded intervals) are compared on their intersections with
    the unit ball. One bounded and one unbounded set are infinitely apart.
    """
    if A.is_empty or B.is_empty:
        return 0.0 if A.is_empty and B.is_empty else math.inf
    pair = _truncated_pair(A, B)
    if pair is None:
        return math.inf
    A, B = pair
    if A.dim == 1:
        return max(abs(A.lo - B.lo), abs(A.hi - B.hi))
    atoms_a, atoms_b = A._atoms(), B._atoms()
    angles = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
    angles += _breakpoints(atoms_a) + _breakpoints(atoms_b)
    for p, _, _ in atoms_a:
        for q, _, _ in atoms_b:
            d = p - q
            if np.linalg.norm(d) > _TOL:
                angles.extend([_angle(d), _angle(d) + math.pi])
    best = 0.0
    for theta in angles:
        u = np.array([math.cos(theta), math.sin(theta)])
        best = max(best, abs(A.support(u) - B.support(u)))
    return best


def from_dict(data):
    """Build a VecSet from its JSON form (validated upstream by serializers)."""
    kind = data['kind']
    if kind == 'empty':
        return EmptySet(int(data.get('dim', 1)))
    if kind == 'interval':
        return Interval(float(data['lo']), float(data['hi']))
    if kind == 'polygon':
        return hull_of(data['vertices'], 2) if len(data['vertices']) > 2 else Polygon(tuple(map(tuple, data['vertices'])))
    if kind == 'ball':
        center = list(data['center'])
        if len(center) == 1:
            return Interval(center[0] - data['radius'], center[0] + data['radius'])
        return Disk(tuple(center), data['radius'])
    if kind == 'cone':
        if data.get('whole'):
            return Cone.whole_plane()
        return Cone(tuple(tuple(r) for r in data['rays']))
    if kind == 'sector':
        return Sector(tuple(tuple(r) for r in data['rays']), float(data['radius']))
    raise ValueError(f"Unknown VecSet kind '{kind}'")
