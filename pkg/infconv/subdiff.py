"""
Subdifferentials: exact convex sets for analytic functions, and grid
evidence (Frechet certificates, Ekeland points, subgradient transfer,
strict-differentiability probes) for sampled ones.
"""
import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np

from .envelope import ConvCase, projection_set
from .exceptions import (AmbiguousProjectionError, BoundaryMarginError, InsufficientDataError,
                         PreconditionError, UnsupportedSpecError)
from .extreal import GridFn
from .funcspec import (FuncSpec, GaugeOf, Indicator, MaxAffine, NormP, ScaledSquaredNorm, Shift, Sum,
                       eval_spec)
from .gauge import gauge_subdiff
from .sets import Ball, FinitePoints
from .utils import get_setting
from .vecsets import (Cone, Disk, EmptySet, Interval, cone_generated, hull_of, minkowski_sum, point_set,
                      zero_set)

logger = logging.getLogger('infconv')

NOISE = 1e-9


def whole_space(dim):
    return Interval(-math.inf, math.inf) if dim == 1 else Cone.whole_plane()


def _is_whole(S):
    if isinstance(S, Interval):
        return S.lo == -math.inf and S.hi == math.inf
    return isinstance(S, Cone) and S.whole


def _norm_subdiff(p, x):
    dim = len(x)
    tol = get_setting('ACTIVE_TOLERANCE') * max(1.0, float(np.abs(x).max()))
    if p == 2.0:
        norm = float(np.linalg.norm(x))
        if norm > tol:
            return point_set(x / norm)
        return Interval(-1.0, 1.0) if dim == 1 else Disk((0.0, 0.0), 1.0)
    if p == 1.0:
        ranges = [(np.sign(c), np.sign(c)) if abs(c) > tol else (-1.0, 1.0) for c in x]
        if dim == 1:
            return Interval(*ranges[0])
        corners = [(a, b) for a in ranges[0] for b in ranges[1]]
        return hull_of(corners, 2)
    top = float(np.abs(x).max())
    if top <= tol:
        return hull_of(np.vstack([np.eye(dim), -np.eye(dim)]), dim)
    active = [np.sign(x[k]) * np.eye(dim)[k] for k in range(dim) if abs(x[k]) >= top - tol]
    return hull_of(active, dim)


def normal_cone(omega, x):
    """
    Normal cone N(x; omega) of a convex set, exact.

    Interior points give {0}; points outside give the empty set.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    dim = omega.dim
    if not omega.is_convex:
        raise UnsupportedSpecError(f"Normal cone of the nonconvex {omega.kind} set is not convex")
    scale = max(1.0, float(np.abs(x).max()))
    if not omega.contains(x, get_setting('ACTIVE_TOLERANCE') * scale):
        return EmptySet(dim)
    active_tol = get_setting('SET_TOLERANCE') * scale
    if isinstance(omega, FinitePoints):
        return whole_space(dim)
    if isinstance(omega, Ball) and dim == 2:
        offset = x - np.array(omega.center)
        if np.linalg.norm(offset) < omega.radius - active_tol:
            return zero_set(2)
        return cone_generated([offset])
    if isinstance(omega, Ball):
        omega = omega.as_box()
    A, b = omega.halfplanes()
    norms = np.linalg.norm(A, axis=1)
    rays = A[(A @ x - b) >= -active_tol * norms]
    if len(rays) == 0:
        return zero_set(dim)
    if dim == 1:
        signs = {float(np.sign(r[0])) for r in rays}
        if signs == {1.0, -1.0}:
            return whole_space(1)
        return Interval(0.0, math.inf) if signs == {1.0} else Interval(-math.inf, 0.0)
    return cone_generated(list(rays))


def convex_subdiff(f, x):
    """
    Subdifferential of a convex FuncSpec at x in the sense of convex analysis.

    Points outside dom f give the empty set.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    dim = len(x)
    if not f.is_convex:
        raise UnsupportedSpecError(f"{f.kind} is not convex; use limiting_subdiff")
    if not eval_spec(f, x).is_finite:
        return EmptySet(dim)
    if isinstance(f, NormP):
        return _norm_subdiff(f.p, x)
    if isinstance(f, ScaledSquaredNorm):
        return point_set(2 * f.alpha * x)
    if isinstance(f, Indicator):
        return normal_cone(f.set, x)
    if isinstance(f, GaugeOf):
        return gauge_subdiff(f.gauge, x, get_setting('ACTIVE_TOLERANCE'))
    if isinstance(f, MaxAffine):
        values = f.slopes @ x + f.intercepts
        top = values.max()
        active = f.slopes[values >= top - get_setting('ACTIVE_TOLERANCE') * max(1.0, abs(top))]
        return hull_of(active, dim)
    if isinstance(f, Sum):
        return reduce(minkowski_sum, [convex_subdiff(t, x) for t in f.terms])
    if isinstance(f, Shift):
        return convex_subdiff(f.inner, x - np.array(f.offset))
    raise UnsupportedSpecError(f"No subdifferential rule for {f.kind}")


def limiting_subdiff(f, x):
    """
    Limiting subdifferential where it has a closed form: convex functions and
    indicators of finite point sets (whole space at an isolated point).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    dim = len(x)
    if f.is_convex:
        return convex_subdiff(f, x)
    if not eval_spec(f, x).is_finite:
        return EmptySet(dim)
    if isinstance(f, Indicator):
        return whole_space(dim)
    if isinstance(f, Shift):
        return limiting_subdiff(f.inner, x - np.array(f.offset))
    if isinstance(f, Sum):
        parts = [limiting_subdiff(t, x) for t in f.terms]
        if any(_is_whole(p) for p in parts):
            return whole_space(dim)
        return reduce(minkowski_sum, parts)
    raise UnsupportedSpecError(f"No limiting subdifferential rule for {f.kind}")


@dataclass(frozen=True)
class Certificate:
    point: tuple
    candidate: tuple
    epsilon: float
    radii: tuple
    violations: tuple
    slack: float

    @property
    def passed(self):
        return all(v >= -NOISE for v in self.violations)

    @property
    def verdict(self):
        return 'pass' if self.passed else 'fail'

    @property
    def worst(self):
        return min(self.violations)

    def to_dict(self):
        return {
            'point': list(self.point),
            'candidate': list(self.candidate),
            'epsilon': self.epsilon,
            'radii': list(self.radii),
            'violations': [v if math.isfinite(v) else 'inf' for v in self.violations],
            'verdict': self.verdict,
        }


def _window(grid, index, steps):
    """Slices of the index box within ``steps`` of ``index``, clipped to the grid."""
    return tuple(slice(max(i - steps, 0), min(i + steps + 1, n)) for i, n in zip(index, grid.n))


def frechet_certificate(g, x_bar, v, epsilon, radii=None, slack=None):
    """
    Grid evidence that v is an epsilon-Frechet subgradient of g at x_bar.

    For each radius delta in the shrinking schedule, records
    min over finite g(x) with 0 < ||x - x_bar|| <= delta of
    g(x) - g(x_bar) - <v, x - x_bar> + (epsilon + slack) ||x - x_bar||.
    A pass is evidence, not proof.

    Raises:
        BoundaryMarginError: x_bar sits on the grid edge
        PreconditionError: g(x_bar) is +inf
    """
    grid = g.grid
    index = grid.locate(x_bar)
    if grid.margin(index) < 1:
        raise BoundaryMarginError(f"Point {list(np.atleast_1d(x_bar))} is on the grid edge")
    center = g.eval(index)
    if not center.is_finite:
        raise PreconditionError(f"g is +inf at {list(np.atleast_1d(x_bar))}")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    steps = radii or get_setting('CERTIFICATE_RADII')
    h = grid.h_min
    if slack is None:
        slack = get_setting('CERTIFICATE_SLACK') * h * (1.0 + float(np.linalg.norm(v)))
    x0 = grid.coords(index)
    window = _window(grid, index, max(steps))
    values = g.values[window].ravel()
    mesh = np.meshgrid(*[grid.axis(k)[window[k]] for k in range(grid.dim)], indexing='ij')
    X = np.stack([m.ravel() for m in mesh], axis=1)
    dist = np.linalg.norm(X - x0, axis=1)
    finite = np.isfinite(values)
    with np.errstate(invalid='ignore'):
        quotient = values - float(center) - (X - x0) @ v + (epsilon + slack) * dist
    violations = []
    for r in sorted(steps, reverse=True):
        near = finite & (dist > 0) & (dist <= r * h * (1 + 1e-9))
        violations.append(float(quotient[near].min()) if near.any() else math.inf)
    radii_out = tuple(r * h for r in sorted(steps, reverse=True))
    return Certificate(tuple(x0.tolist()), tuple(v.tolist()), float(epsilon), radii_out,
                       tuple(violations), float(slack))


def _ekeland_descent(values, points, start, eta, lam):
    """Move to the largest strict improvement of g(w) + (eta/lam)||w - current|| until none exists."""
    finite = np.isfinite(values)
    current = start
    steps = 0
    while True:
        penalised = np.where(finite, values + (eta / lam) * np.linalg.norm(points - points[current], axis=1),
                             np.inf)
        best = int(np.argmin(penalised))
        if not penalised[best] < values[current]:
            return current, steps
        current = best
        steps += 1


def ekeland_point(g, w_tilde, eta, lam):
    """
    Ekeland point on the grid.

    Returns w_bar with g(w_bar) <= g(w_tilde), ||w_bar - w_tilde|| <= lam and
    g(w_bar) <= g(w) + (eta/lam)||w - w_bar|| for every grid w.

    Raises:
        PreconditionError: g(w_tilde) is not within eta of min g
    """
    if not (eta > 0 and lam > 0):
        raise PreconditionError(f"Ekeland needs eta > 0 and lambda > 0, got {eta}, {lam}")
    grid = g.grid
    start = grid.ravel(grid.locate(w_tilde))
    values = g.values.ravel()
    if not values[start] <= g.min() + eta:
        raise PreconditionError(f"g(w_tilde) = {values[start]} exceeds min g + eta = {g.min() + eta}")
    current, steps = _ekeland_descent(values, grid.points(), start, eta, lam)
    logger.debug(f"ekeland descent from {grid.unravel(start)} stopped at {grid.unravel(current)} "
                 f"after {steps} moves")
    return grid.points()[current].copy()


class Transfer(NamedTuple):
    w_tilde: np.ndarray
    w_bar: np.ndarray
    certificate: Certificate
    bound_holds: bool = None


def _transfer_setup(case, x_bar, v, epsilon, eta):
    envelope = case.envelope
    pre = frechet_certificate(envelope, x_bar, v, epsilon)
    if not pre.passed:
        raise PreconditionError(f"{list(np.atleast_1d(v))} is not certified as an {epsilon}-Frechet "
                                f"subgradient of the envelope at {list(np.atleast_1d(x_bar))}")
    grid = case.grid
    index = case.index_of(x_bar)
    delta = min(0.49 * eta, 8 * grid.h_min)
    eta_t = min(eta / 2, delta / 2, 1.0) * 0.99
    objective = case.objective(index).ravel()
    w_tilde = int(np.argmin(objective))
    points = grid.points()
    in_ball = np.linalg.norm(points - points[w_tilde], axis=1) <= delta * (1 + 1e-9)
    return index, delta, eta_t, w_tilde, in_ball


def _run_ekeland(aux, points, w_tilde, eta_t):
    finite = np.isfinite(aux)
    eta_e = max(eta_t ** 2, float(aux[w_tilde] - aux[finite].min()))
    current, _ = _ekeland_descent(aux, points, w_tilde, eta_e, eta_t)
    return current


def transfer_to_phi(case, x_bar, v, epsilon, eta):
    """
    Move a certified envelope subgradient v at x_bar onto the kernel:
    returns (w_tilde, w_bar, certificate that -v is an (epsilon + eta)-Frechet
    subgradient of phi(. - x_bar) at w_bar).
    """
    grid = case.grid
    v = np.atleast_1d(np.asarray(v, dtype=float))
    index, delta, eta_t, w_tilde, in_ball = _transfer_setup(case, x_bar, v, epsilon, eta)
    window = tuple(slice(n - 1 - i, 2 * n - 1 - i) for i, n in zip(index, grid.n))
    phi_shifted = case.phi_lattice[window].ravel()
    points = grid.points()
    gap = np.linalg.norm(points - points[w_tilde], axis=1)
    aux = (-(points[w_tilde] - points) @ v + phi_shifted - phi_shifted[w_tilde] + eta_t ** 2
           + (epsilon + eta / 2) * gap)
    aux = np.where(in_ball, aux, np.inf)
    w_bar = _run_ekeland(aux, points, w_tilde, eta_t)
    phi_fn = GridFn(grid, phi_shifted.reshape(grid.shape))
    certificate = frechet_certificate(phi_fn, points[w_bar], -v, epsilon + eta)
    return Transfer(points[w_tilde].copy(), points[w_bar].copy(), certificate)


def transfer_to_f(case, x_bar, v, epsilon, eta):
    """
    Move a certified envelope subgradient v at x_bar onto f: returns
    (w_tilde, w_bar, certificate that v is an (epsilon + eta)-Frechet
    subgradient of f at w_bar). For subadditive kernels also checks
    f(w_tilde) + phi(w_bar - x_bar) <= envelope(x_bar) + phi(w_bar - w_tilde) + eta.
    """
    grid = case.grid
    v = np.atleast_1d(np.asarray(v, dtype=float))
    index, delta, eta_t, w_tilde, in_ball = _transfer_setup(case, x_bar, v, epsilon, eta)
    points = grid.points()
    f_values = case.f_grid.values.ravel()
    gap = np.linalg.norm(points - points[w_tilde], axis=1)
    with np.errstate(invalid='ignore'):
        aux = (f_values - f_values[w_tilde] - (points - points[w_tilde]) @ v + eta_t ** 2
               + (epsilon + eta / 2) * gap)
    aux = np.where(in_ball & np.isfinite(f_values), aux, np.inf)
    w_bar = _run_ekeland(aux, points, w_tilde, eta_t)
    certificate = frechet_certificate(case.f_grid, points[w_bar], v, epsilon + eta)
    bound_holds = None
    if case.subadditive:
        n = np.array(grid.n)
        bar, tilde = np.array(grid.unravel(w_bar)), np.array(grid.unravel(w_tilde))
        phi_bar_x = case.phi_lattice[tuple(bar - np.array(index) + n - 1)]
        phi_bar_tilde = case.phi_lattice[tuple(bar - tilde + n - 1)]
        lhs = f_values[w_tilde] + phi_bar_x
        rhs = case.envelope.values[index] + phi_bar_tilde + eta
        bound_holds = bool(lhs <= rhs + case.tolerance(rhs))
    return Transfer(points[w_tilde].copy(), points[w_bar].copy(), certificate, bound_holds)


@dataclass(frozen=True)
class DiffProbe:
    point: tuple
    candidate: tuple
    pairs: int
    radii: tuple
    worst: tuple
    tolerance: float

    @property
    def passed(self):
        monotone = all(b <= a + NOISE for a, b in zip(self.worst, self.worst[1:]))
        return monotone and self.worst[-1] <= self.tolerance

    @property
    def verdict(self):
        return 'pass' if self.passed else 'fail'

    def to_dict(self):
        return {
            'point': list(self.point),
            'candidate': list(self.candidate),
            'pairs': self.pairs,
            'radii': list(self.radii),
            'worst': list(self.worst),
            'tolerance': self.tolerance,
            'verdict': self.verdict,
        }


def curvature_scale(g, index, steps=8):
    """Median |second difference| / h^2 along each axis over the window around ``index``."""
    grid = g.grid
    window = _window(grid, index, steps)
    block = g.values[window]
    seconds = []
    for k in range(grid.dim):
        d2 = np.diff(block, n=2, axis=k) / grid.h[k] ** 2
        seconds.append(np.abs(d2[np.isfinite(d2)]))
    seconds = np.concatenate(seconds)
    return float(np.median(seconds)) if len(seconds) else 0.0


def strict_diff_probe(g, x_bar, v, radii=None, tolerance=None):
    """
    Worst strict-differentiability quotient |g(x) - g(y) - <v, x - y>| / ||x - y||
    over all pairs in shrinking neighbourhoods of x_bar.
    """
    grid = g.grid
    index = grid.locate(x_bar)
    steps = sorted(radii or get_setting('CERTIFICATE_RADII'), reverse=True)
    if grid.margin(index) < steps[0]:
        raise BoundaryMarginError(f"Point {list(np.atleast_1d(x_bar))} needs margin {steps[0]}")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    h = grid.h_min
    if tolerance is None:
        scale = max(1.0, curvature_scale(g, index, steps[0]))
        tolerance = get_setting('PROBE_TOLERANCE_FACTOR') * h * scale
    window = _window(grid, index, steps[0])
    values = g.values[window].ravel()
    mesh = np.meshgrid(*[grid.axis(k)[window[k]] for k in range(grid.dim)], indexing='ij')
    X = np.stack([m.ravel() for m in mesh], axis=1)
    x0 = grid.coords(index)
    dist = np.linalg.norm(X - x0, axis=1)
    worst = []
    pairs = 0
    for r in steps:
        near = np.isfinite(values) & (dist <= r * h * (1 + 1e-9))
        P, G = X[near], values[near]
        if len(P) < 2:
            raise InsufficientDataError(f"No finite pairs within {r}h of {x0.tolist()}")
        i, j = np.triu_indices(len(P), k=1)
        span = np.linalg.norm(P[i] - P[j], axis=1)
        quotient = np.abs(G[i] - G[j] - (P[i] - P[j]) @ v) / span
        worst.append(float(quotient.max()))
        pairs += len(i)
    return DiffProbe(tuple(x0.tolist()), tuple(v.tolist()), pairs, tuple(r * h for r in steps),
                     tuple(worst), float(tolerance))


def moreau_grad(f, alpha, x_bar, grid=None):
    """
    Gradient 2 alpha (x_bar - w_bar) of the Moreau envelope at x_bar.

    Raises:
        AmbiguousProjectionError: the projection at x_bar is not a singleton
    """
    if isinstance(f, FuncSpec):
        if grid is None:
            raise PreconditionError("A grid is needed to evaluate the envelope of an analytic f")
    else:
        grid = f.grid
    case = ConvCase(f, ScaledSquaredNorm(alpha), grid)
    projection = projection_set(case, x_bar)
    if not projection.is_singleton:
        raise AmbiguousProjectionError(
            f"Projection at {list(projection.x)} has {len(projection.indices)} points")
    return 2 * alpha * (np.array(projection.x) - projection.element())
