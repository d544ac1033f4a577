"""
Infimal convolution on uniform grids.

For grid points x_i and w_j the displacement w_j - x_i is always a lattice
vector (j - i) * h, so the kernel phi is sampled once on the displacement
lattice and every envelope value is a min over gathered lattice entries.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from django.core.exceptions import ValidationError

from .exceptions import BudgetExceededError, EmptyDomainError, PreconditionError, ShapeError
from .extreal import GridFn
from .funcspec import FuncSpec, GaugeOf, Indicator, NormP, ScaledSquaredNorm, sample
from .gauge import GaugeSet
from .sets import FinitePoints
from .utils import get_setting, get_tolerances, parallel_map

logger = logging.getLogger('infconv')

KERNELS = (GaugeOf, NormP, ScaledSquaredNorm)


class ConvCase:
    """
    One infimal-convolution problem: f, a kernel phi and a grid.

    ``f`` may be a FuncSpec (sampled on demand) or an already sampled GridFn.
    """

    def __init__(self, f, phi, grid, tol_argmin=None):
        if not isinstance(phi, KERNELS):
            raise ValidationError(f"Kernel must be a gauge, norm or scaled squared norm, got {phi.kind}")
        if phi.dim is not None and phi.dim != grid.dim:
            raise ShapeError(f"{phi.dim}D kernel on a {grid.dim}D grid")
        if isinstance(f, GridFn) and f.grid != grid:
            raise ValidationError("Sampled f lives on a different grid")
        if isinstance(f, FuncSpec) and f.dim is not None and f.dim != grid.dim:
            raise ShapeError(f"{f.dim}D function on a {grid.dim}D grid")
        self.f = f
        self.phi = phi
        self.grid = grid
        self.tol_argmin = get_tolerances()['argmin'] if tol_argmin is None else float(tol_argmin)
        lattice = self.phi_lattice
        if not np.isfinite(lattice).all() or (lattice < 0).any():
            raise ValidationError("Kernel must be finite and non-negative on the displacement lattice")

    def __repr__(self):
        f = self.f.kind if isinstance(self.f, FuncSpec) else 'grid'
        return f'ConvCase(f={f}, phi={self.phi.kind}, grid={self.grid.describe()})'

    @cached_property
    def f_grid(self):
        if isinstance(self.f, GridFn):
            return self.f
        return sample(self.f, self.grid)

    @cached_property
    def phi_lattice(self):
        """phi(k * h) for every displacement index k, shifted by n - 1 per axis."""
        grid = self.grid
        axes = [np.arange(-(n - 1), n) * h for n, h in zip(grid.n, grid.h)]
        mesh = np.meshgrid(*axes, indexing='ij')
        D = np.stack([m.ravel() for m in mesh], axis=1)
        values = self.phi.evaluate_many(D).reshape([2 * n - 1 for n in grid.n])
        values.setflags(write=False)
        return values

    @cached_property
    def dom_indices(self):
        return np.argwhere(self.f_grid.finite_mask)

    @cached_property
    def dom_values(self):
        return self.f_grid.values[self.f_grid.finite_mask]

    @property
    def positively_homogeneous(self):
        return self.phi.positively_homogeneous

    @property
    def subadditive(self):
        return self.phi.subadditive

    def tolerance(self, value):
        """Argmin tolerance scaled to a reference value."""
        value = abs(float(value))
        return self.tol_argmin * (value + 1.0) + 10 * np.finfo(float).eps * value

    def index_of(self, point):
        return self.grid.locate(point)

    def objective(self, index):
        """f(w) + phi(w - x) at every grid w, for the grid point x at ``index``."""
        index = self.grid.check_index(index)
        window = tuple(slice(n - 1 - i, 2 * n - 1 - i) for i, n in zip(index, self.grid.n))
        return self.f_grid.values + self.phi_lattice[window]

    @cached_property
    def envelope(self):
        return inf_conv_brute(self)


def _lattice_min(case, indices):
    shift = np.array(case.grid.n) - 1
    offsets = case.dom_indices[None, :, :] - indices[:, None, :] + shift
    gathered = case.phi_lattice[tuple(offsets[..., k] for k in range(case.grid.dim))]
    return (gathered + case.dom_values[None, :]).min(axis=1)


def inf_conv_brute(case, threads=None):
    """
    Exact discrete envelope: min over grid w of f(w) + phi(w - x) at every x.

    Raises:
        BudgetExceededError: when #grid * #dom f exceeds BRUTE_FORCE_BUDGET
    """
    grid = case.grid
    work = grid.size * len(case.dom_indices)
    budget = get_setting('BRUTE_FORCE_BUDGET')
    if work > budget:
        raise BudgetExceededError(f"Brute-force envelope needs {work} evaluations, budget is {budget}")
    indices = np.array(np.unravel_index(np.arange(grid.size), grid.shape)).T
    step = max(1, 2 ** 20 // len(case.dom_indices))
    chunks = [indices[i:i + step] for i in range(0, grid.size, step)]
    logger.info(f"brute envelope {case!r}: {work} evaluations in {len(chunks)} chunks")
    parts = parallel_map(lambda chunk: _lattice_min(case, chunk), chunks, threads)
    return GridFn(grid, np.concatenate(parts).reshape(grid.shape))


def _parabola_envelope(values, finite, h, alpha):
    """
    Lower envelope of parabolas alpha (x - q h)^2 + values[q] over finite sites q,
    evaluated at every x = p h.
    """
    sites = np.flatnonzero(finite)
    n = len(values)
    if len(sites) == 0:
        return np.full(n, np.inf)
    x = np.arange(n) * h
    lift = values + alpha * x * x

    def crossing(s, t):
        return (lift[t] - lift[s]) / (2 * alpha * (x[t] - x[s]))

    hull = [int(sites[0])]
    bounds = [-math.inf]
    for q in sites[1:]:
        q = int(q)
        s = crossing(hull[-1], q)
        while s <= bounds[-1]:
            hull.pop()
            bounds.pop()
            s = crossing(hull[-1], q)
        hull.append(q)
        bounds.append(s)
    out = np.empty(n)
    k = 0
    for p in range(n):
        while k + 1 < len(hull) and bounds[k + 1] < x[p]:
            k += 1
        d = x[p] - x[hull[k]]
        out[p] = alpha * d * d + values[hull[k]]
    return out


def moreau_fast(f, alpha, threads=None):
    """
    Moreau envelope min_w f(w) + alpha ||w - x||^2 by separable per-axis passes.

    Matches ``inf_conv_brute`` with ScaledSquaredNorm(alpha) to 1e-9.
    """
    if not alpha > 0:
        raise ValidationError(f"Moreau envelope needs alpha > 0, got {alpha}")
    grid = f.grid
    logger.info(f"fast Moreau envelope alpha={alpha} on grid {grid.describe()}")
    values = np.array(f.values, dtype=float)
    for axis in range(grid.dim):
        moved = np.moveaxis(values, axis, -1)
        rows = moved.reshape(-1, grid.n[axis])
        h = grid.h[axis]
        results = parallel_map(
            lambda row: _parabola_envelope(np.where(np.isfinite(row), row, 0.0), np.isfinite(row), h, alpha),
            list(rows), threads)
        values = np.moveaxis(np.array(results).reshape(moved.shape), -1, axis)
    return GridFn(grid, values)


def _target_function(target, grid):
    """Indicator of the target on the grid; finite targets are snapped within h/2."""
    if target.dim != grid.dim:
        raise ShapeError(f"{target.dim}D target on a {grid.dim}D grid")
    if not isinstance(target, FinitePoints):
        try:
            return sample(Indicator(target), grid)
        except EmptyDomainError:
            raise EmptyDomainError(f"Target {target.kind} misses every point of grid {grid.describe()}")
    values = np.full(grid.shape, np.inf)
    half = np.array(grid.h) / 2 * (1 + 1e-9)
    for point in target.array():
        index = np.rint((point - np.array(grid.lo)) / np.array(grid.h)).astype(int)
        inside = all(0 <= index[k] < grid.n[k] for k in range(grid.dim))
        if not inside or (np.abs(grid.coords(tuple(index)) - point) > half).any():
            raise EmptyDomainError(f"Target point {point.tolist()} is not within h/2 of a grid point")
        values[tuple(index)] = 0.0
    return GridFn(grid, values)


def min_time(target, dynamics, grid, threads=None):
    """T_F(x; target) = min over target grid points w of rho_F(w - x)."""
    if dynamics.dim != grid.dim:
        raise ShapeError(f"{dynamics.dim}D dynamics on a {grid.dim}D grid")
    case = ConvCase(_target_function(target, grid), GaugeOf(dynamics), grid)
    return inf_conv_brute(case, threads)


def distance_fn(target, grid, threads=None):
    return min_time(target, GaugeSet.unit_ball(grid.dim), grid, threads)


@dataclass(frozen=True)
class ArgminSet:
    x: tuple
    minimizers: np.ndarray
    indices: tuple
    min_value: float
    tol: float

    @property
    def is_singleton(self):
        return len(self.indices) == 1

    def element(self):
        return self.minimizers[0]

    def contains_index(self, index):
        return tuple(index) in self.indices

    def to_dict(self):
        return {'x': list(self.x), 'minimizers': self.minimizers.tolist(), 'min_value': self.min_value}


def projection_set(case, x, eta=None):
    """
    Grid minimizers of w -> f(w) + phi(w - x).

    With ``eta`` given, returns the approximate set of w whose objective is
    strictly below the envelope value plus eta.
    """
    index = case.index_of(x)
    objective = case.objective(index)
    best = float(objective.min())
    tol = case.tolerance(best)
    if eta is None:
        mask = objective <= best + tol
    else:
        mask = objective < best + eta
    hits = np.argwhere(mask)
    points = case.grid.points()[[case.grid.ravel(i) for i in hits]]
    return ArgminSet(tuple(case.grid.coords(index).tolist()), points,
                     tuple(tuple(int(v) for v in i) for i in hits), best, tol)


def s0_mask(case, envelope=None):
    envelope = case.envelope if envelope is None else envelope
    f = case.f_grid
    gap = np.abs(envelope.values - np.where(f.finite_mask, f.values, 0.0))
    scale = case.tol_argmin * (np.abs(np.where(f.finite_mask, f.values, 0.0)) + 1.0)
    return f.finite_mask & (gap <= scale)


def s0_set(case, envelope=None):
    """Grid points where the envelope touches f."""
    return case.grid.points()[s0_mask(case, envelope).ravel()]


@dataclass
class WellPosednessReport:
    point: tuple
    singleton: bool
    w_bar: tuple = None
    trials: int = 0
    max_terminal_distance: float = 0.0
    shell_radii: tuple = ()
    ell: float = None
    m: float = None
    bound_holds: bool = None
    notes: list = field(default_factory=list)

    @property
    def well_posed(self):
        return self.singleton and self.max_terminal_distance == 0.0


def wellposed_probe(case, x_bar, trials=8, ell=None, m=None, seed=None, depth=30):
    """
    Build seeded minimizing sequences at a point of S0 and test their convergence.

    Element k of each sequence is drawn from the sublevel shell
    {w : f(w) + phi(w - x_bar) <= min + 2**-k}, so values converge by
    construction. With ``ell`` and ``m`` (m > ell) every element is also
    checked against ||w_k - x_bar|| <= eps_k / (m - ell).
    """
    index = case.index_of(x_bar)
    if not s0_mask(case)[index]:
        raise PreconditionError(f"Point {list(np.atleast_1d(x_bar))} is not in S0")
    grid = case.grid
    projection = projection_set(case, x_bar)
    objective = case.objective(index).ravel()
    excess = objective - projection.min_value
    points = grid.points()
    center = grid.coords(index)
    rng = np.random.default_rng(get_setting('DEFAULT_SEED') if seed is None else seed)
    report = WellPosednessReport(point=tuple(center.tolist()), singleton=projection.is_singleton,
                                 trials=trials, ell=ell, m=m)
    if report.singleton:
        report.w_bar = tuple(projection.element().tolist())
    target = projection.element()
    check_bound = ell is not None and m is not None and m > ell
    if ell is not None and m is not None and not check_bound:
        report.notes.append(f"bound skipped: m={m} does not exceed ell={ell}")
    radii = []
    bound_ok = True
    terminal = 0.0
    for k in range(1, depth + 1):
        eps = max(2.0 ** -k, projection.tol)
        shell = np.flatnonzero(excess <= eps)
        radii.append(float(np.linalg.norm(points[shell] - target, axis=1).max()))
        picks = rng.choice(shell, size=trials)
        distances = np.linalg.norm(points[picks] - target, axis=1)
        if k == depth:
            terminal = float(distances.max())
        if check_bound:
            reach = np.linalg.norm(points[shell] - center, axis=1).max()
            bound_ok &= bool(reach <= eps / (m - ell) + 1e-9 * (1.0 + reach))
    report.shell_radii = tuple(radii)
    report.max_terminal_distance = terminal
    report.bound_holds = bound_ok if check_bound else None
    logger.debug(f"well-posedness at {report.point}: singleton={report.singleton} terminal={terminal:.3g}")
    return report
