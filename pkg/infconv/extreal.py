"""
Extended reals and uniform grid functions.

Every envelope computation in the toolkit runs on a ``Grid`` (a uniform box
in dimension 1 or 2) and produces a ``GridFn``. Values live in
``ExtReal``: ordinary reals plus an explicit +inf; -inf is never
representable.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import pandas as pd
from django.core.exceptions import ValidationError

from .exceptions import EmptyDomainError, ExtRealError, GridBoundsError, InsufficientDataError
from .utils import get_setting

logger = logging.getLogger('infconv')

INF_TOKEN = 'inf'


@dataclass(frozen=True)
class ExtReal:
    """A real number or +inf, stored as a tag rather than a float sentinel."""
    value: float = 0.0
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, 'value', 0.0)
        elif not math.isfinite(self.value):
            raise ExtRealError(f"ExtReal value must be finite or tagged infinite, got {self.value!r}")

    @classmethod
    def inf(cls):
        return cls(infinite=True)

    @classmethod
    def of(cls, x):
        """Convert a float (``math.inf`` allowed, ``-inf``/NaN rejected)."""
        if isinstance(x, ExtReal):
            return x
        x = float(x)
        if math.isnan(x):
            raise ExtRealError("NaN is not an extended real")
        if x == -math.inf:
            raise ExtRealError("-inf is not representable")
        if x == math.inf:
            return cls.inf()
        return cls(x)

    @property
    def is_finite(self):
        return not self.infinite

    def __float__(self):
        return math.inf if self.infinite else self.value

    def __add__(self, other):
        other = ExtReal.of(other)
        if self.infinite or other.infinite:
            return ExtReal.inf()
        return ExtReal(self.value + other.value)

    __radd__ = __add__

    def _key(self):
        return (1, 0.0) if self.infinite else (0, self.value)

    def __lt__(self, other):
        return self._key() < ExtReal.of(other)._key()

    def __le__(self, other):
        return self._key() <= ExtReal.of(other)._key()

    def __gt__(self, other):
        return self._key() > ExtReal.of(other)._key()

    def __ge__(self, other):
        return self._key() >= ExtReal.of(other)._key()

    def __repr__(self):
        return 'ExtReal(inf)' if self.infinite else f'ExtReal({self.value!r})'

    def __str__(self):
        return INF_TOKEN if self.infinite else repr(self.value)


def _as_tuple(value, dim=None):
    if np.isscalar(value):
        value = (value,) * (dim or 1)
    return tuple(value)


@dataclass(frozen=True)
class Grid:
    """
    Uniform box grid in dimension 1 or 2.

    Point ``i`` on axis ``k`` sits at ``lo[k] + i*h[k]`` with
    ``h[k] = (hi[k] - lo[k]) / (n[k] - 1)``. Points are compared by index,
    never by coordinate equality.
    """
    lo: tuple
    hi: tuple
    n: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in _as_tuple(self.lo))
        hi = tuple(float(v) for v in _as_tuple(self.hi, len(lo)))
        n = tuple(int(v) for v in _as_tuple(self.n, len(lo)))
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)
        object.__setattr__(self, 'n', n)
        if not (len(lo) == len(hi) == len(n)) or len(lo) not in (1, 2):
            raise ValidationError("Grid must have matching lo/hi/n of dimension 1 or 2")
        for k in range(len(lo)):
            if not (math.isfinite(lo[k]) and math.isfinite(hi[k])) or lo[k] >= hi[k]:
                raise ValidationError(f"Grid axis {k}: need finite lo < hi, got {lo[k]}:{hi[k]}")
            if n[k] < 2:
                raise ValidationError(f"Grid axis {k}: need n >= 2, got {n[k]}")
        cap = get_setting('GRID_POINT_CAP')
        if math.prod(n) > cap:
            raise ValidationError(f"Grid has {math.prod(n)} points, above the cap of {cap}")

    @classmethod
    def parse(cls, text):
        """Parse the ``lo:hi:n`` / ``lo:hi:n,lo:hi:n`` flag syntax."""
        lo, hi, n = [], [], []
        for part in str(text).split(','):
            pieces = part.strip().split(':')
            if len(pieces) != 3:
                raise ValidationError(f"Grid axis '{part}' is not of the form lo:hi:n")
            try:
                lo.append(float(pieces[0]))
                hi.append(float(pieces[1]))
                count = pieces[2].strip()
                if not count.lstrip('+').isdigit():
                    raise ValueError(count)
                n.append(int(count))
            except ValueError:
                raise ValidationError(f"Grid axis '{part}' has a non-numeric bound or count")
        return cls(tuple(lo), tuple(hi), tuple(n))

    @property
    def dim(self):
        return len(self.n)

    @property
    def shape(self):
        return self.n

    @property
    def size(self):
        return math.prod(self.n)

    @cached_property
    def h(self):
        return tuple((self.hi[k] - self.lo[k]) / (self.n[k] - 1) for k in range(self.dim))

    @cached_property
    def h_min(self):
        return min(self.h)

    def axis(self, k):
        return self.lo[k] + np.arange(self.n[k]) * self.h[k]

    def coords(self, index):
        self.check_index(index)
        return np.array([self.lo[k] + index[k] * self.h[k] for k in range(self.dim)])

    @cached_property
    def _points(self):
        axes = np.meshgrid(*[self.axis(k) for k in range(self.dim)], indexing='ij')
        points = np.stack([a.ravel() for a in axes], axis=1)
        points.setflags(write=False)
        return points

    def points(self):
        """All grid coordinates, shape (size, dim), C order."""
        return self._points

    def check_index(self, index):
        index = tuple(index)
        if len(index) != self.dim or any(not 0 <= index[k] < self.n[k] for k in range(self.dim)):
            raise GridBoundsError(f"Index {index} outside grid of shape {self.shape}")
        return index

    def ravel(self, index):
        return int(np.ravel_multi_index(self.check_index(index), self.shape))

    def unravel(self, flat):
        return tuple(int(i) for i in np.unravel_index(int(flat), self.shape))

    def snap(self, point):
        """Nearest grid index and its distance; raises if the point is outside the box."""
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.shape != (self.dim,):
            raise GridBoundsError(f"Point {point.tolist()} has wrong dimension for a {self.dim}D grid")
        index = []
        for k in range(self.dim):
            slack = 1e-9 * self.h[k]
            if not (self.lo[k] - slack <= point[k] <= self.hi[k] + slack):
                raise GridBoundsError(f"Point {point.tolist()} outside the grid box")
            index.append(int(min(max(round((point[k] - self.lo[k]) / self.h[k]), 0), self.n[k] - 1)))
        index = tuple(index)
        return index, float(np.linalg.norm(self.coords(index) - point))

    def locate(self, point, tol=1e-9):
        """Index of a point that lies on the grid (within ``tol`` * h)."""
        index, distance = self.snap(point)
        if distance > tol * self.h_min:
            raise GridBoundsError(f"Point {np.atleast_1d(point).tolist()} is not a grid point")
        return index

    def margin(self, index):
        """Distance from ``index`` to the nearest grid edge, in index steps."""
        index = self.check_index(index)
        return min(min(index[k], self.n[k] - 1 - index[k]) for k in range(self.dim))

    def neighbour_offsets(self):
        """Forward offsets pairing each point with its adjacent points."""
        if self.dim == 1:
            return ((1,),)
        return ((1, 0), (0, 1), (1, 1), (1, -1))

    def describe(self):
        return ','.join(f"{self.lo[k]:g}:{self.hi[k]:g}:{self.n[k]}" for k in range(self.dim))

    def to_dict(self):
        return {'lo': list(self.lo), 'hi': list(self.hi), 'n': list(self.n)}


class GridFn:
    """
    Extended-real function sampled on a grid. Immutable after construction.

    Finite values live in a float array; the +inf tag lives in a separate
    boolean mask, so no arithmetic on stored data can produce NaN.
    """

    def __init__(self, grid, values):
        arr = np.asarray(values, dtype=float)
        if arr.size != grid.size:
            raise ValidationError(f"GridFn needs {grid.size} values, got {arr.size}")
        arr = arr.reshape(grid.shape)
        if np.isnan(arr).any():
            raise ExtRealError("GridFn values contain NaN")
        if np.isneginf(arr).any():
            raise ExtRealError("-inf is not representable")
        finite = np.isfinite(arr)
        if not finite.any():
            raise EmptyDomainError("GridFn has an empty effective domain")
        data = np.where(finite, arr, 0.0)
        data.setflags(write=False)
        finite.setflags(write=False)
        self._grid = grid
        self._data = data
        self._finite = finite

    @property
    def grid(self):
        return self._grid

    @property
    def finite_mask(self):
        return self._finite

    @cached_property
    def values(self):
        """Float view with ``inf`` at the tagged sites (read-only)."""
        out = np.where(self._finite, self._data, np.inf)
        out.setflags(write=False)
        return out

    def eval(self, index):
        index = self._grid.check_index(index)
        if not self._finite[index]:
            return ExtReal.inf()
        return ExtReal(float(self._data[index]))

    def value(self, index):
        return float(self.eval(index))

    def effective_domain(self):
        """Indices of finite-valued points, in C order."""
        return [tuple(int(i) for i in idx) for idx in np.argwhere(self._finite)]

    def min(self):
        return float(self._data[self._finite].min())

    def __eq__(self, other):
        return (isinstance(other, GridFn) and self._grid == other._grid
                and np.array_equal(self._finite, other._finite)
                and np.array_equal(self._data, other._data))

    __hash__ = None

    def to_frame(self):
        """One row per grid point: coordinates then value (inf kept as float inf)."""
        points = self._grid.points()
        frame = pd.DataFrame({f'x{k}': points[:, k] for k in range(self._grid.dim)})
        frame['value'] = self.values.ravel()
        return frame

    def to_csv(self, path_or_buf):
        return self.to_frame().to_csv(path_or_buf, index=False, float_format='%.17g')

    @classmethod
    def from_frame(cls, grid, frame):
        columns = [f'x{k}' for k in range(grid.dim)] + ['value']
        missing = [c for c in columns if c not in frame.columns]
        if missing:
            raise ValidationError(f"CSV is missing columns: {', '.join(missing)}")
        if len(frame) != grid.size:
            raise ValidationError(f"CSV has {len(frame)} rows, grid needs {grid.size}")
        values = np.full(grid.size, np.inf)
        for row in frame[columns].itertuples(index=False):
            index, distance = grid.snap(row[:-1])
            if distance > 1e-6 * grid.h_min:
                raise ValidationError(f"CSV row {tuple(row[:-1])} is not a grid point")
            values[grid.ravel(index)] = row[-1]
        return cls(grid, values)

    @classmethod
    def from_csv(cls, grid, path_or_buf):
        frame = pd.read_csv(path_or_buf, dtype=float)
        return cls.from_frame(grid, frame)


def full_region(grid):
    return tuple(slice(0, n) for n in grid.shape)


def interior_region(grid, margin):
    """Index box that stays ``margin`` steps away from every edge."""
    if any(2 * margin >= n for n in grid.shape):
        raise InsufficientDataError(f"Grid {grid.describe()} has no points at margin {margin}")
    return tuple(slice(margin, n - margin) for n in grid.shape)


def lipschitz_estimate(g, region=None):
    """
    Discrete Lipschitz constant of ``g`` over an index box.

    Max of |g(x) - g(w)| / ||x - w|| over adjacent finite-valued pairs inside
    ``region`` (a tuple of slices; default the whole grid). Adjacency covers
    axis neighbours and, in 2D, diagonals.
    """
    grid = g.grid
    region = region or full_region(grid)
    data = g._data[region]
    finite = g._finite[region]
    if finite.sum() < 2:
        raise InsufficientDataError("Lipschitz estimate needs at least 2 finite points in the region")
    best = None
    for offset in grid.neighbour_offsets():
        a_sl, b_sl = [], []
        for k, step in enumerate(offset):
            size = data.shape[k]
            if step >= 0:
                a_sl.append(slice(0, size - step))
                b_sl.append(slice(step, size))
            else:
                a_sl.append(slice(-step, size))
                b_sl.append(slice(0, size + step))
        a_sl, b_sl = tuple(a_sl), tuple(b_sl)
        both = finite[a_sl] & finite[b_sl]
        if not both.any():
            continue
        length = math.sqrt(sum((step * grid.h[k]) ** 2 for k, step in enumerate(offset)))
        quotient = np.abs(data[a_sl][both] - data[b_sl][both]).max() / length
        best = quotient if best is None else max(best, quotient)
    if best is None:
        raise InsufficientDataError("No adjacent finite-valued pairs in the region")
    return float(best)


@dataclass(frozen=True)
class LscViolation:
    index: tuple
    value: float
    neighbour_min: float
    margin: float


@dataclass(frozen=True)
class LscReport:
    slack: float
    violations: tuple

    @property
    def passed(self):
        return not self.violations


def lsc_spot_check(g, slope=None):
    """
    Discrete lower-semicontinuity surrogate.

    At every finite point, the value must not exceed the smallest finite
    neighbour value plus ``slope * h``. A +inf site is never flagged: a grid
    cannot witness how a domain is approached from outside.

    Only upward jumps are seen from the point that jumps. A value dropped
    below its neighbours is itself never flagged; its neighbours are, since
    each now sits above its smallest neighbour.
    """
    grid = g.grid
    slope = get_setting('LSC_SLOPE') if slope is None else slope
    slack = slope * grid.h_min
    values = g.values
    padded = np.pad(values, 1, constant_values=np.inf)
    neighbour_min = np.full(values.shape, np.inf)
    inner = tuple(slice(1, n + 1) for n in grid.shape)
    for offset in grid.neighbour_offsets():
        for sign in (1, -1):
            shifted = tuple(slice(s.start + sign * o, s.stop + sign * o) for s, o in zip(inner, offset))
            neighbour_min = np.minimum(neighbour_min, padded[shifted])
    violations = []
    checkable = g.finite_mask & np.isfinite(neighbour_min)
    with np.errstate(invalid='ignore'):
        excess = np.where(checkable, values - neighbour_min - slack, -np.inf)
    for idx in np.argwhere(excess > 0):
        index = tuple(int(i) for i in idx)
        violations.append(LscViolation(index, float(values[index]), float(neighbour_min[index]),
                                       float(-excess[index])))
    if violations:
        logger.debug(f"lsc spot check flagged {len(violations)} points")
    return LscReport(slack=slack, violations=tuple(violations))
