"""
Check harness: runs every checkable statement about infimal convolutions
over a corpus of cases and collects one record per (check, case, point).

Records carry the statement in words (``anchor``), what was measured, the
tolerance and the margin left, so a failing record can be rerun alone.
Hypothesis-violating inputs are reported as ``skip``, never ``pass``.
"""
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from django.core.exceptions import ValidationError

from .envelope import ConvCase, moreau_fast, projection_set, s0_mask, wellposed_probe
from .exceptions import (AmbiguousProjectionError, BoundaryMarginError, GridBoundsError, InfConvError,
                         PreconditionError)
from .extreal import Grid, GridFn, interior_region, lipschitz_estimate, lsc_spot_check
from .funcspec import FuncSpec, ScaledSquaredNorm, phi_coercivity, phi_lipschitz, sample
from .subdiff import (convex_subdiff, curvature_scale, frechet_certificate, limiting_subdiff,
                      strict_diff_probe, transfer_to_f, transfer_to_phi, _ekeland_descent)
from .utils import get_setting, get_tolerances, parallel_map
from .vecsets import EmptySet, hausdorff, hull_of, intersect

logger = logging.getLogger('infconv')

PASS, FAIL, SKIP, ERROR = 'pass', 'fail', 'skip', 'error'
VERDICTS = (PASS, FAIL, SKIP, ERROR)

EQUALITY = 'equality-proved'
EVIDENCED = 'inclusion-evidenced'
INVARIANT = 'invariant'

SEGMENT_STEPS = (0.25, 0.5, 0.75, 1.0)
SEGMENT_SAMPLES = 20

MALFORMED_ANCHOR = "The case could not be built from its description"

ANCHORS = {
    'frechet_formula': "At a point of S0 with m > l, the Frechet subdifferential of f (+) phi equals "
                       "the Frechet subdifferential of f intersected with minus that of phi at 0; "
                       "epsilon-subgradients of both sides amplify by at most amp_alpha",
    'projection_inclusion': "Every subgradient v of f (+) phi at x satisfies v in df(w) and -v in "
                            "dphi(w - x) for every projection w of x",
    'segment_inclusion': "For subadditive positively homogeneous phi, a subgradient v of f (+) phi at x "
                         "stays a subgradient at every point of the segment from x to a projection w, "
                         "and -v lies in dphi(w - x)",
    'limiting_formula': "At a point of S0 with m > l, the limiting subdifferential of f (+) phi equals "
                        "the limiting subdifferential of f intersected with minus dphi(0)",
    'union_inclusion': "Every limiting subgradient of f (+) phi at x lies in the union over projections w "
                       "of df(w) intersected with -dphi(w - x)",
    'strict_differentiability': "Where the projection is a singleton {w}, the Moreau envelope is strictly "
                                "differentiable with gradient 2 alpha (x - w), and the gradient is continuous",
    'convex_differentiability': "A convex function is strictly differentiable at x exactly when df(x) is "
                                "a singleton, and df is continuous there",
    'transfer_inequality': "For subadditive phi, (f (+) phi)(x) - (f (+) phi)(y) <= phi(y - x) at all pairs, "
                           "so the envelope is Lipschitz with the calmness constant of phi at 0",
    'bounded_lipschitz': "With f bounded below and phi Lipschitz on bounded sets, f (+) phi is Lipschitz "
                         "on bounded sets",
    'wellposedness': "With f calm (constant l) and phi coercive (constant m > l), f (+) phi is well-posed at "
                     "points of S0 and minimizing sequences satisfy ||w_k - x|| <= eps_k / (m - l)",
    'fixed_points': "With m > l and phi(0) = 0, S0 is exactly the set of points x with P(x) = {x}",
    'domain_in_s0': "With m > l, every point of dom f lies in S0",
    'segment_identity': "For subadditive positively homogeneous phi and w in P(x), "
                        "(f (+) phi)(x_t) = (1 - t)(f (+) phi)(x) + t f(w) and w in P(x_t) on the segment "
                        "x_t = t w + (1 - t) x",
    'ekeland': "The Ekeland point w satisfies g(w) <= g(w0), ||w - w0|| <= lambda and "
               "g(w) <= g(u) + (eta/lambda)||u - w|| for every grid point u",
    'subgradient_transfer': "A Frechet subgradient v of f (+) phi at x gives nearby points where -v is an "
                            "(eps + eta)-subgradient of phi(. - x) and v is an (eps + eta)-subgradient of f",
    'lower_semicontinuity': "Sampled f never exceeds its smallest finite neighbour by more than the slope "
                            "slack",
}


def _clean(value):
    """JSON-safe, deterministic form of a measured value."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


@dataclass
class CheckCase:
    """
    One corpus entry: a ConvCase, the points to check at, and the declared
    constants (l: calmness of f, m: coercivity of phi, amp_alpha) and
    closed-form envelope subdifferentials keyed by point.
    """
    id: str
    case: ConvCase
    points: list
    ell: float = None
    m: float = None
    amp_alpha: float = None
    expected: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = self.case.grid
        self.indices = [self._locate(p) for p in self.points]
        self.expected_at = {self._locate(p): S for p, S in self.expected.items()}
        computed = phi_coercivity(self.case.phi, grid.dim)
        if self.m is not None and computed is not None and abs(self.m - computed) > 1e-9 * max(1.0, computed):
            raise ValidationError(f"Case {self.id}: declared m = {self.m} but the kernel has m = {computed}")
        unknown = set(self.tolerances) - set(get_tolerances())
        if unknown:
            raise ValidationError(f"Case {self.id}: unknown tolerance keys {sorted(unknown)}")

    def _locate(self, point):
        try:
            return self.case.grid.locate(point)
        except GridBoundsError:
            raise ValidationError(f"Case {self.id}: point {list(np.atleast_1d(point))} is not a grid point")

    @property
    def spec(self):
        return self.case.f if isinstance(self.case.f, FuncSpec) else None

    @property
    def constants_ok(self):
        return self.ell is not None and self.m is not None and self.m > self.ell

    def describe(self):
        f = self.case.f
        if isinstance(f, FuncSpec):
            f_desc = f.to_dict()
        else:
            f_desc = hashlib.sha256(np.ascontiguousarray(f.values).tobytes()).hexdigest()
        return {
            'id': self.id,
            'f': f_desc,
            'phi': self.case.phi.to_dict(),
            'grid': self.case.grid.describe(),
            'points': [list(np.atleast_1d(p).astype(float)) for p in self.points],
            'ell': self.ell,
            'm': self.m,
            'amp_alpha': self.amp_alpha,
        }


@dataclass(frozen=True)
class MalformedCase:
    """A corpus entry that failed validation; reported as one error record."""
    id: str
    error: str

    def describe(self):
        return {'id': self.id, 'error': self.error}


@dataclass(frozen=True)
class ConvexEntry:
    id: str
    f: FuncSpec
    grid: object
    points: tuple


@dataclass
class Corpus:
    name: str
    cases: list = field(default_factory=list)
    convex: list = field(default_factory=list)
    ekeland_instances: int = 0

    def describe(self):
        return {
            'name': self.name,
            'cases': [c.describe() for c in self.cases],
            'convex': [{'id': a.id, 'f': a.f.to_dict(), 'grid': a.grid.describe(),
                        'points': [list(p) for p in a.points]} for a in self.convex],
            'ekeland_instances': self.ekeland_instances,
        }


@dataclass
class CheckRecord:
    check: str
    case: str
    point: tuple = None
    verdict: str = PASS
    mode: str = INVARIANT
    measured: dict = field(default_factory=dict)
    tolerance: float = None
    margin: float = None
    note: str = ''

    @property
    def anchor(self):
        return ANCHORS.get(self.check, MALFORMED_ANCHOR)

    def to_dict(self):
        return {
            'check': self.check,
            'anchor': self.anchor,
            'case': self.case,
            'point': _clean(list(self.point)) if self.point is not None else None,
            'verdict': self.verdict,
            'mode': self.mode,
            'measured': _clean(self.measured),
            'tolerance': _clean(self.tolerance),
            'margin': _clean(self.margin),
            'note': self.note,
        }


@dataclass
class CheckReport:
    records: list
    seed: int
    corpus: str
    fingerprint: str

    @property
    def summary(self):
        counts = {v: 0 for v in VERDICTS}
        for record in self.records:
            counts[record.verdict] += 1
        counts['total'] = len(self.records)
        return counts

    @property
    def passed(self):
        summary = self.summary
        return summary[FAIL] == 0 and summary[ERROR] == 0

    def to_dict(self):
        return {
            'corpus': self.corpus,
            'seed': self.seed,
            'fingerprint': self.fingerprint,
            'summary': self.summary,
            'records': [r.to_dict() for r in self.records],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'

    def to_frame(self):
        return records_frame([r.to_dict() for r in self.records])


REPORT_COLUMNS = ['check', 'case', 'point', 'verdict', 'mode', 'tolerance', 'margin', 'measured', 'note', 'anchor']


def records_frame(rows):
    """Flatten report records (dicts) into one CSV-ready row each."""
    flat = []
    for row in rows:
        row = dict(row)
        row['point'] = json.dumps(row.get('point'))
        row['measured'] = json.dumps(row.get('measured'), sort_keys=True)
        flat.append(row)
    return pd.DataFrame(flat, columns=REPORT_COLUMNS)


def _skip(check, cc, point, note):
    logger.warning(f"{check} skipped for {cc.id} at {point}: {note}")
    return CheckRecord(check, cc.id, point, SKIP, note=note)


def _vertices(S):
    if S.is_empty:
        return np.zeros((0, S.dim))
    return np.atleast_2d(S.extreme_points())


def _distance_to(S, v):
    return float(S.distance(v))


def _evidenced_subgradients(cc, index):
    """Lattice of candidates in [-L, L]^d kept when their Frechet certificate passes."""
    case = cc.case
    grid = case.grid
    envelope = case.envelope
    bound = phi_lipschitz(case.phi, grid.dim)
    if bound is None:
        window = tuple(slice(max(i - 8, 0), min(i + 9, n)) for i, n in zip(index, grid.n))
        bound = lipschitz_estimate(envelope, window)
    count = 41 if grid.dim == 1 else 11
    axis = np.linspace(-bound, bound, count)
    mesh = np.meshgrid(*[axis] * grid.dim, indexing='ij')
    candidates = np.stack([m.ravel() for m in mesh], axis=1)
    x = grid.coords(index)
    kept = [v for v in candidates if frechet_certificate(envelope, x, v, 0.0).passed]
    if not kept:
        return EmptySet(grid.dim)
    return hull_of(kept, grid.dim)


def _left_side(cc, index):
    if index in cc.expected_at:
        return cc.expected_at[index], EQUALITY
    return _evidenced_subgradients(cc, index), EVIDENCED


def _membership_tolerance(cc, vertices, mode, tol):
    """Membership tolerance; certified candidates also get the certificate slack and one grid step."""
    scale = 1.0 + max((float(np.linalg.norm(v)) for v in vertices), default=0.0)
    tolerance = tol['membership'] * scale
    if mode == EVIDENCED:
        h = cc.case.grid.h_min
        tolerance += get_setting('CERTIFICATE_SLACK') * h * scale + h
    return tolerance


def _in_s0(cc, index):
    return bool(s0_mask(cc.case)[index])


def _formula(check, cc, index, tol, subdiff_of_f, amplify):
    point = tuple(cc.case.grid.coords(index).tolist())
    f = cc.spec
    case = cc.case
    if f is None:
        return _skip(check, cc, point, 'f is only known on the grid')
    if not cc.constants_ok:
        return _skip(check, cc, point, 'needs declared constants with m > l')
    if not _in_s0(cc, index):
        return _skip(check, cc, point, 'point is not in S0')
    if check == 'limiting_formula' and not (case.subadditive and case.positively_homogeneous):
        return _skip(check, cc, point, 'phi is not subadditive and positively homogeneous')
    x = np.array(point)
    dim = len(x)
    phi_zero = convex_subdiff(case.phi, np.zeros(dim))
    right = intersect(subdiff_of_f(f, x), phi_zero.negate())
    left, mode = _left_side(cc, index)
    envelope = case.envelope
    certificates = [frechet_certificate(envelope, x, v, 0.0) for v in _vertices(right)]
    worst_certificate = min((c.worst for c in certificates), default=math.inf)
    measured = {'right': right.to_dict(), 'worst_certificate': worst_certificate}
    ok = all(c.passed for c in certificates)
    margin = None
    tolerance = tol['hausdorff']
    note = ''
    if mode == EQUALITY:
        distance = hausdorff(left, right)
        measured['hausdorff'] = distance
        margin = tolerance - distance
        ok = ok and distance <= tolerance
    else:
        note = 'no closed-form left side; right-side vertices certified as envelope subgradients'
    if amplify and f.is_convex:
        eps = tol['amp_epsilon']
        worst_amp = math.inf
        largest = 0.0
        for v in _vertices(right):
            amp = 2 * (float(np.linalg.norm(v)) + cc.m) / (cc.m - cc.ell) + 1
            largest = max(largest, amp)
            for k in range(dim):
                for sign in (1.0, -1.0):
                    shifted = v + sign * eps * np.eye(dim)[k]
                    certificate = frechet_certificate(envelope, x, shifted, amp * eps)
                    worst_amp = min(worst_amp, certificate.worst)
                    ok = ok and certificate.passed
        measured['amp_alpha'] = largest
        measured['worst_amplified_certificate'] = worst_amp
        if cc.amp_alpha is not None and largest > cc.amp_alpha * (1 + 1e-12):
            ok = False
            note = f"computed amp_alpha {largest:.6g} exceeds the declared bound {cc.amp_alpha:.6g}"
    return CheckRecord(check, cc.id, point, PASS if ok else FAIL, mode, measured, tolerance, margin, note)


def _convex_or_limiting(f, x):
    return convex_subdiff(f, x) if f.is_convex else limiting_subdiff(f, x)


def check_frechet_formula(cc, index, tol):
    return _formula('frechet_formula', cc, index, tol, _convex_or_limiting, amplify=True)


def check_limiting_formula(cc, index, tol):
    return _formula('limiting_formula', cc, index, tol, limiting_subdiff, amplify=False)


def check_projection_inclusion(cc, index, tol):
    check = 'projection_inclusion'
    case = cc.case
    point = tuple(case.grid.coords(index).tolist())
    f = cc.spec
    if f is None:
        return _skip(check, cc, point, 'f is only known on the grid')
    x = np.array(point)
    projection = projection_set(case, x)
    left, mode = _left_side(cc, index)
    vertices = _vertices(left)
    worst = 0.0
    for w in projection.minimizers:
        f_set = limiting_subdiff(f, w)
        phi_set = convex_subdiff(case.phi, w - x)
        for v in vertices:
            worst = max(worst, _distance_to(f_set, v), _distance_to(phi_set, -v))
    tolerance = _membership_tolerance(cc, vertices, mode, tol)
    note = 'checked with exact sets at epsilon = 0; the certificate slack stands in for the extra eta'
    if not len(vertices):
        note = 'envelope has no Frechet subgradient here; inclusion holds vacuously'
    measured = {'projections': len(projection.indices), 'candidates': len(vertices), 'worst_distance': worst}
    verdict = PASS if worst <= tolerance else FAIL
    return CheckRecord(check, cc.id, point, verdict, mode, measured, tolerance, tolerance - worst, note)


def check_segment_inclusion(cc, index, tol):
    check = 'segment_inclusion'
    case = cc.case
    grid = case.grid
    point = tuple(grid.coords(index).tolist())
    if not (case.subadditive and case.positively_homogeneous):
        return _skip(check, cc, point, 'phi is not subadditive and positively homogeneous')
    x = np.array(point)
    projection = projection_set(case, x)
    left, mode = _left_side(cc, index)
    vertices = _vertices(left)
    envelope = case.envelope
    worst_certificate = math.inf
    worst_member = 0.0
    skipped = []
    ok = True
    for w in projection.minimizers:
        phi_set = convex_subdiff(case.phi, w - x)
        for v in vertices:
            worst_member = max(worst_member, _distance_to(phi_set, -v))
        for t in SEGMENT_STEPS:
            snapped, _ = grid.snap(t * w + (1 - t) * x)
            if grid.margin(snapped) < 1:
                skipped.append(t)
                continue
            for v in vertices:
                certificate = frechet_certificate(envelope, grid.coords(snapped), v, 0.0)
                worst_certificate = min(worst_certificate, certificate.worst)
                ok = ok and certificate.passed
    tolerance = _membership_tolerance(cc, vertices, mode, tol)
    ok = ok and worst_member <= tolerance
    measured = {'worst_certificate': worst_certificate, 'worst_distance': worst_member,
                'projections': len(projection.indices)}
    note = f"segment points off the grid interior skipped at t = {sorted(set(skipped))}" if skipped else ''
    return CheckRecord(check, cc.id, point, PASS if ok else FAIL, mode, measured, tolerance,
                       tolerance - worst_member, note)


def _central_gradient(values, grid, index):
    gradient = []
    for k in range(grid.dim):
        up, down = list(index), list(index)
        up[k] += 1
        down[k] -= 1
        gradient.append((values[tuple(up)] - values[tuple(down)]) / (2 * grid.h[k]))
    return np.array(gradient)


def _one_sided_gradients(envelope, index):
    """Gradient limits along each axis direction, extrapolated from 2h and 4h away."""
    grid = envelope.grid
    values = envelope.values
    limits = []
    for k in range(grid.dim):
        for sign in (1, -1):
            near, far = list(index), list(index)
            near[k] += 2 * sign
            far[k] += 4 * sign
            limits.append(2 * _central_gradient(values, grid, near) - _central_gradient(values, grid, far))
    return limits


def check_union_inclusion(cc, index, tol):
    check = 'union_inclusion'
    case = cc.case
    grid = case.grid
    point = tuple(grid.coords(index).tolist())
    f = cc.spec
    if f is None:
        return _skip(check, cc, point, 'f is only known on the grid')
    x = np.array(point)
    if index in cc.expected_at:
        candidates, mode = list(_vertices(cc.expected_at[index])), EQUALITY
    else:
        if grid.margin(index) < 5:
            return _skip(check, cc, point, 'needs margin 5 to extrapolate one-sided gradients')
        candidates, mode = _one_sided_gradients(case.envelope, index), EVIDENCED
    projection = projection_set(case, x)
    branches = [(limiting_subdiff(f, w), convex_subdiff(case.phi, w - x)) for w in projection.minimizers]
    worst = 0.0
    for v in candidates:
        best = min(max(_distance_to(f_set, v), _distance_to(phi_set, -v)) for f_set, phi_set in branches)
        worst = max(worst, best)
    tolerance = tol['membership'] * (1.0 + max((float(np.linalg.norm(v)) for v in candidates), default=0.0))
    measured = {'candidates': _clean([list(np.atleast_1d(v)) for v in candidates]), 'worst_distance': worst,
                'projections': len(projection.indices)}
    verdict = PASS if worst <= tolerance else FAIL
    return CheckRecord(check, cc.id, point, verdict, mode, measured, tolerance, tolerance - worst)


def _moreau_gradient(case, index):
    objective = case.objective(index)
    best = objective.min()
    hits = np.argwhere(objective <= best + case.tolerance(best))
    if len(hits) != 1:
        return None
    w = case.grid.coords(tuple(hits[0]))
    return 2 * case.phi.alpha * (case.grid.coords(index) - w)


def check_strict_differentiability(cc, index, tol):
    check = 'strict_differentiability'
    case = cc.case
    grid = case.grid
    point = tuple(grid.coords(index).tolist())
    if not isinstance(case.phi, ScaledSquaredNorm):
        return _skip(check, cc, point, 'kernel is not a scaled squared norm')
    steps = max(get_setting('CERTIFICATE_RADII'))
    if grid.margin(index) < steps + 1:
        return _skip(check, cc, point, f'needs margin {steps + 1}')
    gradient = _moreau_gradient(case, index)
    if gradient is None:
        return _skip(check, cc, point, 'projection is not a singleton')
    alpha = case.phi.alpha
    envelope = case.envelope
    probe = strict_diff_probe(envelope, point, gradient)
    fast = moreau_fast(case.f_grid, alpha)
    fast_gap = float(np.abs(fast.values - envelope.values).max())
    fd = _central_gradient(fast.values, grid, index)
    fd_error = float(np.abs(fd - gradient).max())
    fd_tolerance = max(tol['fd_gradient'], 5 * grid.h_min)
    # gradient continuity over the probe window
    window = [tuple(i) for i in np.argwhere(np.ones([2 * steps + 1] * grid.dim, dtype=bool)) - steps + index]
    field_ = {}
    for neighbour in window:
        g = _moreau_gradient(case, neighbour)
        if g is None:
            return _skip(check, cc, point, f'projection at {grid.coords(neighbour).tolist()} is not a singleton')
        field_[neighbour] = g
    worst_delta = 0.0
    for neighbour, g in field_.items():
        for k in range(grid.dim):
            step = list(neighbour)
            step[k] += 1
            other = field_.get(tuple(step))
            if other is not None:
                worst_delta = max(worst_delta, float(np.linalg.norm(g - other)))
    delta_bound = tol['c1_constant'] * alpha * grid.h_min
    ok = probe.passed and fd_error <= fd_tolerance and worst_delta <= delta_bound and fast_gap <= 1e-9
    measured = {'gradient': gradient, 'worst_quotient': probe.worst, 'quotient_tolerance': probe.tolerance,
                'fd_error': fd_error, 'fast_brute_gap': fast_gap, 'worst_gradient_delta': worst_delta,
                'gradient_delta_bound': delta_bound}
    return CheckRecord(check, cc.id, point, PASS if ok else FAIL, 'probe', measured, probe.tolerance,
                       probe.tolerance - probe.worst[-1])


def check_wellposedness(cc, index, tol, seed=0):
    check = 'wellposedness'
    case = cc.case
    point = tuple(case.grid.coords(index).tolist())
    if not cc.constants_ok:
        return _skip(check, cc, point, 'needs declared constants with m > l')
    if not _in_s0(cc, index):
        return _skip(check, cc, point, 'point is not in S0')
    report = wellposed_probe(case, point, trials=8, ell=cc.ell, m=cc.m, seed=seed)
    ok = report.well_posed and report.bound_holds is not False
    measured = {'singleton': report.singleton, 'w_bar': report.w_bar,
                'max_terminal_distance': report.max_terminal_distance,
                'shell_radii': list(report.shell_radii[::5]), 'bound_holds': report.bound_holds}
    return CheckRecord(check, cc.id, point, PASS if ok else FAIL, INVARIANT, measured, 0.0,
                       -report.max_terminal_distance, '; '.join(report.notes))


def _segment_gap(case, index, w, w_index, lip):
    """Worst gap of the segment identity from x to w, and whether w stays a projection along it."""
    grid = case.grid
    x = grid.coords(index)
    envelope = case.envelope.values
    f_values = case.f_grid.values
    worst = -math.inf
    kept = True
    for t in SEGMENT_STEPS:
        snapped, distance = grid.snap(t * w + (1 - t) * x)
        expected = (1 - t) * envelope[index] + t * f_values[w_index]
        worst = max(worst, abs(envelope[snapped] - expected) - lip * distance)
        if distance <= 1e-9 * grid.h_min:
            kept &= projection_set(case, grid.coords(snapped)).contains_index(w_index)
    return worst, kept


def check_segment_identity(cc, tol, seed=None):
    """
    Segment identity at the declared points and at SEGMENT_SAMPLES seeded
    (x, w) pairs, x drawn from the grid and w from P(x).
    """
    check = 'segment_identity'
    case = cc.case
    grid = case.grid
    if not (case.subadditive and case.positively_homogeneous):
        return _skip(check, cc, None, 'phi is not subadditive and positively homogeneous')
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    lip = max(lipschitz_estimate(case.envelope), phi_lipschitz(case.phi, grid.dim) or 0.0)
    pairs = []
    for index in cc.indices:
        projection = projection_set(case, grid.coords(index))
        pairs.extend((index, w, w_index) for w, w_index in zip(projection.minimizers, projection.indices))
    declared = len(pairs)
    rng = np.random.default_rng(seed)
    finite = np.flatnonzero(np.isfinite(case.envelope.values.ravel()))
    for flat in rng.choice(finite, size=SEGMENT_SAMPLES, replace=len(finite) < SEGMENT_SAMPLES):
        index = grid.unravel(int(flat))
        projection = projection_set(case, grid.coords(index))
        pick = int(rng.integers(len(projection.indices)))
        pairs.append((index, projection.minimizers[pick], projection.indices[pick]))
    worst = -math.inf
    kept = True
    for index, w, w_index in pairs:
        gap, ok = _segment_gap(case, index, w, w_index, lip)
        worst = max(worst, gap)
        kept &= ok
    tolerance = tol['segment']
    measured = {'worst_gap': worst, 'projection_kept': kept, 'envelope_lipschitz': lip,
                'declared_pairs': declared, 'pairs': len(pairs) - declared}
    ok = worst <= tolerance and kept
    return CheckRecord(check, cc.id, None, PASS if ok else FAIL, INVARIANT, measured, tolerance,
                       tolerance - worst, f'segment points snapped to the grid; gap widened by L * snap distance; '
                                          f'sample seed {seed}')


def check_subgradient_transfer(cc, index, tol):
    check = 'subgradient_transfer'
    case = cc.case
    point = tuple(case.grid.coords(index).tolist())
    left, mode = _left_side(cc, index)
    vertices = _vertices(left)
    if not len(vertices):
        return _skip(check, cc, point, 'envelope has no certified subgradient here')
    eta = tol['transfer_eta']
    ok = True
    done = 0
    notes = []
    worst = math.inf
    for v in vertices:
        try:
            to_phi = transfer_to_phi(case, point, v, 0.0, eta)
            to_f = transfer_to_f(case, point, v, 0.0, eta)
        except (PreconditionError, BoundaryMarginError) as e:
            notes.append(str(e))
            continue
        done += 1
        worst = min(worst, to_phi.certificate.worst, to_f.certificate.worst)
        ok = ok and to_phi.certificate.passed and to_f.certificate.passed and to_f.bound_holds is not False
    if not done:
        return _skip(check, cc, point, '; '.join(notes))
    measured = {'transferred': done, 'worst_certificate': worst}
    return CheckRecord(check, cc.id, point, PASS if ok else FAIL, mode, measured, eta, worst, '; '.join(notes))


def check_transfer_inequality(cc, tol):
    check = 'transfer_inequality'
    case = cc.case
    if not case.subadditive:
        return _skip(check, cc, None, 'phi is not subadditive')
    grid = case.grid
    envelope = case.envelope.values
    worst = -math.inf
    for flat in range(grid.size):
        index = grid.unravel(flat)
        window = tuple(slice(n - 1 - i, 2 * n - 1 - i) for i, n in zip(index, grid.n))
        worst = max(worst, float((envelope[index] - envelope - case.phi_lattice[window]).max()))
    lipschitz = lipschitz_estimate(case.envelope)
    bound = phi_lipschitz(case.phi, grid.dim)
    tolerance = tol['lipschitz']
    ok = worst <= tolerance and lipschitz <= bound + tolerance
    measured = {'worst_excess': worst, 'envelope_lipschitz': lipschitz, 'phi_calmness': bound}
    return CheckRecord(check, cc.id, None, PASS if ok else FAIL, INVARIANT, measured, tolerance,
                       tolerance - max(worst, lipschitz - bound))


def check_bounded_lipschitz(cc, tol):
    check = 'bounded_lipschitz'
    case = cc.case
    grid = case.grid
    if not np.isfinite(case.f_grid.min()):
        return _skip(check, cc, None, 'f is not bounded below')
    margin = min(grid.n) // 4
    region = interior_region(grid, margin)
    envelope = case.envelope
    top = float(envelope.values[region].max())
    reach = 0.0
    for index in np.argwhere(np.ones(grid.shape, dtype=bool)[region]) + margin:
        index = tuple(index)
        level = case.objective(index) <= top + 1.0
        distances = np.linalg.norm(grid.points()[level.ravel()] - grid.coords(index), axis=1)
        reach = max(reach, float(distances.max()))
    bound = phi_lipschitz(case.phi, grid.dim)
    if bound is None:
        # alpha ||z||^2 over ||z|| <= reach plus one diagonal step
        bound = 2 * case.phi.alpha * (reach + math.sqrt(sum(h * h for h in grid.h)))
    lipschitz = lipschitz_estimate(envelope, region)
    tolerance = tol['lipschitz']
    measured = {'region_margin': margin, 'sublevel_reach': reach, 'envelope_lipschitz': lipschitz,
                'phi_lipschitz': bound}
    ok = lipschitz <= bound + tolerance
    return CheckRecord(check, cc.id, None, PASS if ok else FAIL, INVARIANT, measured, tolerance,
                       bound + tolerance - lipschitz,
                       'phi Lipschitz constant taken over the surrogate sublevel region on the grid')


def check_fixed_points(cc, tol):
    check = 'fixed_points'
    if not cc.constants_ok:
        return _skip(check, cc, None, 'needs declared constants with m > l')
    case = cc.case
    grid = case.grid
    in_s0 = s0_mask(case)
    mismatches = 0
    for flat in range(grid.size):
        index = grid.unravel(flat)
        objective = case.objective(index)
        best = objective.min()
        hits = np.argwhere(objective <= best + case.tolerance(best))
        fixed = len(hits) == 1 and tuple(hits[0]) == index
        mismatches += int(fixed != bool(in_s0[index]))
    measured = {'points': grid.size, 's0_points': int(in_s0.sum()), 'mismatches': mismatches}
    return CheckRecord(check, cc.id, None, PASS if mismatches == 0 else FAIL, INVARIANT, measured, 0.0,
                       -float(mismatches))


def check_domain_in_s0(cc, tol):
    check = 'domain_in_s0'
    if not cc.constants_ok:
        return _skip(check, cc, None, 'needs declared constants with m > l')
    case = cc.case
    outside = int((case.f_grid.finite_mask & ~s0_mask(case)).sum())
    measured = {'domain_points': len(case.dom_indices), 'outside_s0': outside}
    return CheckRecord(check, cc.id, None, PASS if outside == 0 else FAIL, INVARIANT, measured, 0.0,
                       -float(outside))


def check_lower_semicontinuity(cc, tol):
    check = 'lower_semicontinuity'
    report = lsc_spot_check(cc.case.f_grid)
    worst = min((v.margin for v in report.violations), default=0.0)
    measured = {'violations': len(report.violations), 'slack': report.slack}
    return CheckRecord(check, cc.id, None, PASS if report.passed else FAIL, INVARIANT, measured,
                       report.slack, worst)


def check_convex_differentiability(entry, point, tol):
    check = 'convex_differentiability'
    grid = entry.grid
    g = sample(entry.f, grid)
    x = np.atleast_1d(np.asarray(point, dtype=float))
    S = convex_subdiff(entry.f, x)
    singleton = S.is_singleton
    candidate = S.element() if singleton else S.centroid()
    probe = strict_diff_probe(g, x, candidate)
    ok = singleton == probe.passed
    measured = {'singleton': singleton, 'worst_quotient': probe.worst[-1], 'quotient_tolerance': probe.tolerance}
    if probe.passed:
        # neighbours at kinks are left out of the continuity bound
        index = grid.locate(x)
        bound = 2 * curvature_scale(g, index) * grid.h_min
        worst = 0.0
        excluded = 0
        for k in range(grid.dim):
            for sign in (1, -1):
                neighbour = list(index)
                neighbour[k] += sign
                T = convex_subdiff(entry.f, grid.coords(tuple(neighbour)))
                if not T.is_singleton:
                    excluded += 1
                    continue
                worst = max(worst, hausdorff(S, T))
        measured['worst_subdiff_delta'] = worst
        measured['subdiff_delta_bound'] = bound
        measured['excluded_neighbours'] = excluded
        ok = ok and worst <= bound + 1e-9
    return CheckRecord(check, entry.id, tuple(x.tolist()), PASS if ok else FAIL, 'probe', measured,
                       probe.tolerance, probe.tolerance - probe.worst[-1])


def ekeland_instance(seed):
    """A seeded random grid function with +inf sites and a start point within eta of its minimum."""
    rng = np.random.default_rng(seed)
    grid = Grid((-1.0,), (1.0,), (201,)) if seed % 2 == 0 else Grid((-1.0, -1.0), (1.0, 1.0), (15, 15))
    values = rng.uniform(0.0, 1.0, grid.size)
    values[rng.random(grid.size) < 0.2] = np.inf
    values[rng.integers(grid.size)] = rng.uniform(0.0, 1.0)
    g = GridFn(grid, values.reshape(grid.shape))
    eta = float(rng.uniform(0.05, 0.5))
    lam = float(rng.uniform(0.05, 1.0))
    flat = g.values.ravel()
    start = int(rng.choice(np.flatnonzero(flat <= g.min() + eta)))
    return g, start, eta, lam


def check_ekeland(number, seed):
    check = 'ekeland'
    instance_seed = seed + number
    g, start, eta, lam = ekeland_instance(instance_seed)
    grid = g.grid
    values = g.values.ravel()
    points = grid.points()
    end, moves = _ekeland_descent(values, points, start, eta, lam)
    finite = np.isfinite(values)
    distance = float(np.linalg.norm(points[end] - points[start]))
    penalised = values[finite] + (eta / lam) * np.linalg.norm(points[finite] - points[end], axis=1)
    slack = float((penalised - values[end]).min())
    ok = values[end] <= values[start] and distance <= lam and slack >= 0.0
    measured = {'eta': eta, 'lambda': lam, 'moves': moves, 'value_drop': values[start] - values[end],
                'distance': distance, 'worst_penalised_slack': slack}
    return CheckRecord(check, f'ekeland-{number:03d}', tuple(points[start].tolist()), PASS if ok else FAIL,
                       INVARIANT, measured, 0.0, min(lam - distance, slack), f'instance seed {instance_seed}')


POINT_CHECKS = {
    'frechet_formula': check_frechet_formula,
    'projection_inclusion': check_projection_inclusion,
    'segment_inclusion': check_segment_inclusion,
    'limiting_formula': check_limiting_formula,
    'union_inclusion': check_union_inclusion,
    'strict_differentiability': check_strict_differentiability,
    'wellposedness': check_wellposedness,
    'subgradient_transfer': check_subgradient_transfer,
}

CASE_CHECKS = {
    'transfer_inequality': check_transfer_inequality,
    'bounded_lipschitz': check_bounded_lipschitz,
    'fixed_points': check_fixed_points,
    'domain_in_s0': check_domain_in_s0,
    'lower_semicontinuity': check_lower_semicontinuity,
    'segment_identity': check_segment_identity,
}

CORPUS_CHECKS = ('convex_differentiability', 'ekeland')

SEEDED_CHECKS = ('wellposedness', 'segment_identity')

CHECK_IDS = tuple(ANCHORS)

CAUGHT = (InfConvError, ValidationError, ArithmeticError, ValueError)


def _guarded(check, case_id, point, func, *args):
    try:
        record = func(*args)
        if point is not None:
            record.point = point
        return record
    except (BoundaryMarginError, AmbiguousProjectionError, PreconditionError) as e:
        logger.warning(f"{check} skipped for {case_id}: {e}")
        return CheckRecord(check, case_id, point, SKIP, note=str(e))
    except CAUGHT as e:
        logger.warning(f"{check} errored for {case_id}: {e}")
        return CheckRecord(check, case_id, point, ERROR, note=f"{type(e).__name__}: {e}")


def _case_tasks(cc, selected, tolerances, seed):
    tol = dict(tolerances)
    tol.update(cc.tolerances)
    tasks = []
    for name in selected:
        if name in CASE_CHECKS:
            args = (cc, tol, seed) if name in SEEDED_CHECKS else (cc, tol)
            tasks.append((name, cc.id, None, CASE_CHECKS[name]) + args)
        elif name in POINT_CHECKS:
            for point, index in zip(cc.points, cc.indices):
                point = tuple(float(v) for v in np.atleast_1d(point))
                args = (cc, index, tol, seed) if name in SEEDED_CHECKS else (cc, index, tol)
                tasks.append((name, cc.id, point, POINT_CHECKS[name]) + args)
    return tasks


def _run_case(cc, selected, tolerances, seed):
    if isinstance(cc, MalformedCase):
        logger.warning(f"case {cc.id} is malformed: {cc.error}")
        return [CheckRecord('case', cc.id, None, ERROR, note=cc.error)]
    try:
        cc.case.envelope
    except CAUGHT as e:
        logger.warning(f"case {cc.id} aborted: {e}")
        return [CheckRecord(name, cc.id, None, ERROR, note=f"{type(e).__name__}: {e}") for name in selected
                if name in CASE_CHECKS or name in POINT_CHECKS]
    return [_guarded(*task) for task in _case_tasks(cc, selected, tolerances, seed)]


def fingerprint(corpus, seed):
    payload = json.dumps({'corpus': _clean(corpus.describe()), 'seed': seed}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def run_suite(corpus, checks=None, seed=None, threads=None, tolerances=None):
    """
    Run the selected checks (default: all) over a corpus.

    Cases run concurrently; records come back in corpus order, so the
    report is identical for the same corpus, seed and tolerances.
    """
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    selected = list(CHECK_IDS) if checks is None else list(checks)
    unknown = [c for c in selected if c not in ANCHORS]
    if unknown:
        raise ValidationError(f"Unknown checks: {', '.join(unknown)}")
    tolerances = get_tolerances(tolerances)
    logger.info(f"suite '{corpus.name}' started: {len(corpus.cases)} cases, {len(selected)} checks, seed {seed}")
    per_case = parallel_map(lambda cc: _run_case(cc, selected, tolerances, seed), corpus.cases, threads)
    records = [record for block in per_case for record in block]
    if 'convex_differentiability' in selected:
        for entry in corpus.convex:
            for point in entry.points:
                records.append(_guarded('convex_differentiability', entry.id, tuple(point),
                                        check_convex_differentiability, entry, point, tolerances))
    if 'ekeland' in selected:
        records.extend(parallel_map(lambda n: check_ekeland(n, seed), range(corpus.ekeland_instances), threads))
    report = CheckReport(records, seed, corpus.name, fingerprint(corpus, seed))
    logger.info(f"suite '{corpus.name}' finished: {report.summary}")
    return report
