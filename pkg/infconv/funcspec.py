"""
Closed-form test functions.

Each variant evaluates exactly on batches of points (``evaluate_many``
returns a float array, ``inf`` marking points outside the effective
domain). ``Indicator`` is the only source of +inf.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError
from scipy.stats import qmc

from .exceptions import EmptyDomainError, InsufficientDataError, PreconditionError, ShapeError
from .extreal import ExtReal, GridFn
from .gauge import GaugeSet
from .sets import SetSpec, _points_array
from .utils import get_setting

logger = logging.getLogger('infconv')


class FuncSpec:
    """Base class for analytic function variants."""
    kind = None

    @property
    def dim(self):
        """Dimension the function is tied to, or None when it works in 1D and 2D."""
        return None

    @property
    def is_convex(self):
        return True

    @property
    def positively_homogeneous(self):
        return False

    @property
    def subadditive(self):
        return False

    def evaluate_many(self, X, tol=0.0):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


def _batch(f, X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if f.dim is not None and X.shape[1] != f.dim:
        raise ShapeError(f"{f.kind} is {f.dim}D, got points of dimension {X.shape[1]}")
    return X


@dataclass(frozen=True)
class NormP(FuncSpec):
    p: float = 2.0
    kind = 'norm'

    def __post_init__(self):
        p = math.inf if self.p in ('inf', math.inf) else float(self.p)
        if p not in (1.0, 2.0, math.inf):
            raise ValidationError(f"NormP supports p in {{1, 2, inf}}, got {self.p}")
        object.__setattr__(self, 'p', p)

    @property
    def positively_homogeneous(self):
        return True

    @property
    def subadditive(self):
        return True

    def evaluate_many(self, X, tol=0.0):
        return np.linalg.norm(_batch(self, X), ord=self.p, axis=1)

    def to_dict(self):
        return {'kind': self.kind, 'p': 'inf' if self.p == math.inf else int(self.p)}


@dataclass(frozen=True)
class ScaledSquaredNorm(FuncSpec):
    """alpha * ||x||^2 with the Euclidean norm."""
    alpha: float = 1.0
    kind = 'sq'

    def __post_init__(self):
        object.__setattr__(self, 'alpha', float(self.alpha))
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValidationError(f"ScaledSquaredNorm needs alpha > 0, got {self.alpha}")

    def evaluate_many(self, X, tol=0.0):
        X = _batch(self, X)
        return self.alpha * np.einsum('ij,ij->i', X, X)

    def to_dict(self):
        return {'kind': self.kind, 'alpha': self.alpha}


@dataclass(frozen=True)
class Indicator(FuncSpec):
    set: SetSpec
    kind = 'indicator'

    @property
    def dim(self):
        return self.set.dim

    @property
    def is_convex(self):
        return self.set.is_convex

    def evaluate_many(self, X, tol=0.0):
        X = _points_array(_batch(self, X), self.dim)
        return np.where(self.set.contains_many(X, tol), 0.0, np.inf)

    def to_dict(self):
        return {'kind': self.kind, 'set': self.set.to_dict()}


@dataclass(frozen=True)
class GaugeOf(FuncSpec):
    gauge: GaugeSet
    kind = 'gauge'

    @property
    def dim(self):
        return self.gauge.dim

    @property
    def positively_homogeneous(self):
        return True

    @property
    def subadditive(self):
        return True

    def evaluate_many(self, X, tol=0.0):
        return self.gauge.evaluate_many(_batch(self, X))

    def to_dict(self):
        return {'kind': self.kind, 'set': self.gauge.shape.to_dict()}


@dataclass(frozen=True)
class MaxAffine(FuncSpec):
    """max_i (a_i . x + b_i) over a nonempty list of (slope, intercept) pieces."""
    pieces: tuple
    kind = 'max_affine'

    def __post_init__(self):
        pieces = []
        for slope, intercept in self.pieces:
            slope = tuple(float(v) for v in np.atleast_1d(slope))
            pieces.append((slope, float(intercept)))
        if not pieces:
            raise ValidationError("MaxAffine needs at least one piece")
        if len({len(s) for s, _ in pieces}) != 1 or len(pieces[0][0]) not in (1, 2):
            raise ValidationError("MaxAffine slopes must share dimension 1 or 2")
        if not np.isfinite([v for s, b in pieces for v in s + (b,)]).all():
            raise ValidationError("MaxAffine pieces must be finite")
        object.__setattr__(self, 'pieces', tuple(pieces))

    @property
    def dim(self):
        return len(self.pieces[0][0])

    @property
    def slopes(self):
        return np.array([s for s, _ in self.pieces])

    @property
    def intercepts(self):
        return np.array([b for _, b in self.pieces])

    def evaluate_many(self, X, tol=0.0):
        X = _batch(self, X)
        return (X @ self.slopes.T + self.intercepts).max(axis=1)

    def to_dict(self):
        return {'kind': self.kind, 'pieces': [[list(s), b] for s, b in self.pieces]}


@dataclass(frozen=True)
class Sum(FuncSpec):
    terms: tuple
    kind = 'sum'

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValidationError("Sum needs at least one term")
        dims = {t.dim for t in terms} - {None}
        if len(dims) > 1:
            raise ValidationError(f"Sum terms have mismatched dimensions {sorted(dims)}")
        object.__setattr__(self, 'terms', terms)

    @property
    def dim(self):
        return next((t.dim for t in self.terms if t.dim is not None), None)

    @property
    def is_convex(self):
        return all(t.is_convex for t in self.terms)

    def evaluate_many(self, X, tol=0.0):
        X = _batch(self, X)
        total = np.zeros(len(X))
        for term in self.terms:
            total = total + term.evaluate_many(X, tol)
        return total

    def to_dict(self):
        return {'kind': self.kind, 'terms': [t.to_dict() for t in self.terms]}


@dataclass(frozen=True)
class Shift(FuncSpec):
    """x -> inner(x - offset)."""
    inner: FuncSpec
    offset: tuple
    kind = 'shift'

    def __post_init__(self):
        offset = tuple(float(v) for v in np.atleast_1d(self.offset))
        if len(offset) not in (1, 2) or not np.isfinite(offset).all():
            raise ValidationError("Shift offset must be a finite 1D or 2D vector")
        if self.inner.dim is not None and self.inner.dim != len(offset):
            raise ValidationError("Shift offset dimension does not match the inner function")
        object.__setattr__(self, 'offset', offset)

    @property
    def dim(self):
        return len(self.offset)

    @property
    def is_convex(self):
        return self.inner.is_convex

    def evaluate_many(self, X, tol=0.0):
        X = _batch(self, X)
        return self.inner.evaluate_many(X - np.array(self.offset), tol)

    def to_dict(self):
        return {'kind': self.kind, 'inner': self.inner.to_dict(), 'offset': list(self.offset)}


def zero_function(dim):
    """f = 0, written as a single flat affine piece."""
    return MaxAffine((((0.0,) * dim, 0.0),))


def eval_spec(f, x):
    """Exact value of ``f`` at one point as an ExtReal."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or (f.dim is not None and len(x) != f.dim):
        raise ShapeError(f"{f.kind} is {f.dim}D, got point {x.tolist()}")
    return ExtReal.of(f.evaluate_many(x[None, :])[0])


def sample(f, grid):
    """Pointwise sampling of ``f`` on every grid point."""
    if f.dim is not None and f.dim != grid.dim:
        raise ShapeError(f"Cannot sample a {f.dim}D {f.kind} on a {grid.dim}D grid")
    values = f.evaluate_many(grid.points(), get_setting('SET_TOLERANCE'))
    if not np.isfinite(values).any():
        raise EmptyDomainError(f"{f.kind} is +inf at every point of grid {grid.describe()}")
    return GridFn(grid, values)


def phi_lipschitz(phi, dim):
    """Global Euclidean Lipschitz constant of a kernel, or None when it has none."""
    if isinstance(phi, NormP):
        return math.sqrt(dim) if phi.p == 1.0 else 1.0
    if isinstance(phi, GaugeOf):
        return phi.gauge.lipschitz_constant()
    return None


def phi_coercivity(phi, dim):
    """Largest m with m ||x|| <= phi(x) for all x, or None for non-coercive kernels."""
    if isinstance(phi, NormP):
        return 1.0 / math.sqrt(dim) if phi.p == math.inf else 1.0
    if isinstance(phi, GaugeOf):
        return phi.gauge.m
    return None


@dataclass(frozen=True)
class CalmnessReport:
    point: tuple
    constant: float
    radius: float
    relative_to: object
    samples: int


def calmness_probe(f, x_bar, radius, samples=1024, relative_to=None, seed=None):
    """
    Estimate the calmness constant of ``f`` at ``x_bar`` relative to a set.

    Points are drawn from a scrambled Sobol sequence in the ball of the given
    radius and kept when they lie in ``relative_to`` (default: dom f). The
    reported constant is the largest |f(x) - f(x_bar)| / ||x - x_bar|| seen.
    """
    x_bar = np.atleast_1d(np.asarray(x_bar, dtype=float))
    if not radius > 0:
        raise ValidationError(f"Calmness radius must be positive, got {radius}")
    center = eval_spec(f, x_bar)
    if not center.is_finite:
        raise PreconditionError(f"Point {x_bar.tolist()} is outside dom f")
    dim = len(x_bar)
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    U = sampler.random_base2(max(int(math.ceil(math.log2(max(samples, 2)))), 1))[:samples]
    X = x_bar + radius * (2.0 * U - 1.0)
    distances = np.linalg.norm(X - x_bar, axis=1)
    keep = (distances <= radius) & (distances > 0)
    values = f.evaluate_many(X)
    keep &= np.isfinite(values)
    if relative_to is not None:
        keep &= relative_to.contains_many(X, get_setting('SET_TOLERANCE'))
    if not keep.any():
        raise InsufficientDataError(f"No sampled point of D within radius {radius} of {x_bar.tolist()}")
    constant = float((np.abs(values[keep] - float(center)) / distances[keep]).max())
    logger.debug(f"calmness probe at {x_bar.tolist()}: {keep.sum()} samples, constant {constant:.6g}")
    return CalmnessReport(tuple(x_bar.tolist()), constant, float(radius), relative_to, int(keep.sum()))
