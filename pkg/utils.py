import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from haversine import Unit, haversine_vector
from scipy import stats

import settings
from errors import UncertifiedPackingError


def certified_required(fn):
    """Decorator to require a certified PackingSpec as the first argument"""
    @functools.wraps(fn)
    def wrapper(spec, *args, **kwargs):
        if not getattr(spec, 'certified', False):
            logging.warning(f"{fn.__name__} refused an uncertified packing '{getattr(spec, 'name', '?')}'")
            raise UncertifiedPackingError(
                f"{fn.__name__} needs a certified packing; run verify_nonoverlap first")
        return fn(spec, *args, **kwargs)
    return wrapper


def lat_lon_degrees(points):
    """Unit 3-vectors → (latitude, longitude) rows in degrees"""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    lat = np.degrees(np.arcsin(np.clip(points[:, 2], -1.0, 1.0)))
    lon = np.degrees(np.arctan2(points[:, 1], points[:, 0]))
    return np.column_stack([lat, lon])


def calculate_distances(points):
    """Pairwise great-circle distances on S² in radians, using the Haversine formula"""
    coords = lat_lon_degrees(points)
    with np.errstate(invalid='ignore'):
        distances = np.asarray(haversine_vector(coords, coords, unit=Unit.RADIANS, comb=True), dtype=float)
    # rounding can push the haversine argument just past 1 at antipodes
    distances = np.nan_to_num(distances, nan=math.pi)
    np.fill_diagonal(distances, 0.0)
    return 0.5 * (distances + distances.T)


def binomial_std_error(proportion, samples):
    if samples <= 0:
        return math.inf
    return math.sqrt(max(proportion * (1.0 - proportion), 0.0) / samples)


def binomial_half_width(proportion, samples, confidence=0.99):
    """Normal-approximation half-width of a two-sided binomial confidence interval"""
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    return float(z) * binomial_std_error(proportion, samples)


def rng_for(seed, index=0):
    """Counter-based generator for (seed, stream index), independent of scheduling"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def chunk_counts(total, chunk_size=None):
    chunk_size = chunk_size or settings.CHUNK_SIZE
    counts = [chunk_size] * (total // chunk_size)
    if total % chunk_size:
        counts.append(total % chunk_size)
    return counts


def parallel_map(fn, items, workers=None):
    """Ordered map over a thread pool; results come back in input order"""
    items = list(items)
    workers = settings.WORKERS if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(fn, items))


def format_value(value, digits=10):
    """Format a number for table display"""
    if value is None:
        return "N/A"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isinf(value):
            return "inf"
        return f"{float(value):.{digits}g}"
    return str(value)
