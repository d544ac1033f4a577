import os
from concurrent.futures import ThreadPoolExecutor

from django.conf import settings

_DEFAULTS = {
    'GRID_POINT_CAP': 2 ** 24,
    'BRUTE_FORCE_BUDGET': 2 ** 33,
    'DEFAULT_SEED': 0,
    'SET_TOLERANCE': 1e-9,
    'ACTIVE_TOLERANCE': 1e-12,
    'CERTIFICATE_RADII': (8, 4, 2, 1),
    'CERTIFICATE_SLACK': 10.0,
    'PROBE_TOLERANCE_FACTOR': 20.0,
    'LSC_SLOPE': 10.0,
    'TOLERANCES': {
        'argmin': 1e-9,
        'hausdorff': 1e-6,
        'membership': 1e-8,
        'lipschitz': 1e-9,
        'segment': 1e-8,
        'fd_gradient': 1e-4,
        'transfer_eta': 0.1,
        'amp_epsilon': 0.05,
        'c1_constant': 4.0,
    },
}


def get_setting(key):
    """
    Look up a toolkit setting from ``settings.INFCONV``.

    Falls back to the built-in default when Django settings are not
    configured or the key is missing, so the numerical modules stay usable
    outside a project.
    """
    if settings.configured:
        configured = getattr(settings, 'INFCONV', {})
        if key in configured:
            return configured[key]
    return _DEFAULTS[key]


def get_tolerances(overrides=None):
    """
    Merge named check tolerances with overrides.

    Unknown override keys raise ``KeyError`` naming the key.
    """
    tolerances = dict(_DEFAULTS['TOLERANCES'])
    tolerances.update(get_setting('TOLERANCES'))
    for key, value in (overrides or {}).items():
        if key not in tolerances:
            raise KeyError(key)
        tolerances[key] = float(value)
    return tolerances


def parse_tolerance_overrides(items):
    """
    Parse ``KEY=VAL`` strings from the ``--tol`` flag.

    Args:
        items: iterable of strings like ``hausdorff=1e-7``

    Returns:
        dict of key to float, validated against the known tolerance keys
    """
    overrides = {}
    known = get_tolerances()
    for item in items or ():
        key, sep, raw = item.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"Tolerance override '{item}' is not of the form KEY=VAL")
        if key not in known:
            raise ValueError(f"Unknown tolerance key '{key}' (known: {', '.join(sorted(known))})")
        try:
            overrides[key] = float(raw)
        except ValueError:
            raise ValueError(f"Tolerance '{key}' needs a number, got '{raw}'")
        if overrides[key] < 0:
            raise ValueError(f"Tolerance '{key}' must be non-negative")
    return overrides


def default_threads():
    return os.cpu_count() or 1


def parallel_map(func, items, threads=None):
    """Map ``func`` over ``items`` on a thread pool, preserving input order."""
    items = list(items)
    threads = threads or default_threads()
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
