"""Discrete closed curves and links: length, thickness and ropelength.

Thickness of a sampled link is the minimum over all triples of sample points (from any
components) of the radius of the circle through them, the discrete global radius of
curvature. In S³ the radius of a triple is the spherical radius of its round circle,
arcsin of the ℝ⁴ circumradius; a great circle gives π/2, the largest possible value.
"""
import logging
import math

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

import utils
from errors import DegenerateInputError, InputError
from geom_core import chord_to_arc, circumradii, spherical_tube_radii
from models import Ambient, DiscreteCurve, ThicknessResult

PRUNE_MARGIN = 1e-9
REFINE_TOL = 1e-6
REFINE_CANDIDATES = 4


def curve_length(curve):
    """Sum of segment lengths; geodesic segment lengths for spherical curves"""
    steps = np.linalg.norm(np.roll(curve.samples, -1, axis=0) - curve.samples, axis=1)
    if curve.ambient is Ambient.SPHERICAL:
        steps = chord_to_arc(steps)
    return float(np.sum(steps))


def link_length(link):
    return sum(curve_length(c) for c in link.components)


def _triple_values(points, i, j, k, spherical):
    if spherical:
        return spherical_tube_radii(points[i], points[j], points[k])
    return circumradii(points[i], points[j], points[k])


def _check_distinct(points):
    distances = squareform(pdist(points))
    np.fill_diagonal(distances, np.inf)
    if float(np.min(distances)) == 0.0:
        i, j = np.unravel_index(int(np.argmin(distances)), distances.shape)
        raise DegenerateInputError(f"samples {min(i, j)} and {max(i, j)} coincide; their triples are degenerate")
    np.fill_diagonal(distances, 0.0)
    return distances


def _better(value, triple, best_value, best_triple):
    return value < best_value or (value == best_value and triple < best_triple)


def _brute_scan(points, spherical, workers=None):
    """Reference O(n³) scan, parallel over the first index"""
    count = len(points)

    def scan_first_index(i):
        rest = count - i - 1
        if rest < 2:
            return math.inf, (count, count, count)
        jj, kk = np.triu_indices(rest, k=1)
        jj = jj + i + 1
        kk = kk + i + 1
        values = _triple_values(points, np.full(len(jj), i), jj, kk, spherical)
        best = int(np.argmin(values))
        return float(values[best]), (i, int(jj[best]), int(kk[best]))

    best_value, best_triple = math.inf, (count, count, count)
    for value, triple in utils.parallel_map(scan_first_index, range(count), workers):
        if _better(value, triple, best_value, best_triple):
            best_value, best_triple = value, triple
    return best_value, best_triple


def _seed_triples(link):
    """Cheap real triples whose minimum bounds the thickness from above"""
    points = link.points
    starts = np.cumsum([0] + [len(c) for c in link.components])
    nexts = np.empty(len(points), dtype=int)
    for start, stop in zip(starts[:-1], starts[1:]):
        idx = np.arange(start, stop)
        nexts[idx] = np.roll(idx, -1)
    afters = nexts[nexts]

    distances = cdist(points, points)
    own = np.arange(len(points))
    masked = distances.copy()
    masked[own, own] = np.inf
    masked[own, nexts] = np.inf
    masked[nexts, own] = np.inf
    nearest = np.argmin(masked, axis=1)

    triples = set()
    for i in own:
        for third in (afters[i], nearest[i]):
            triple = tuple(sorted((int(i), int(nexts[i]), int(third))))
            if len(set(triple)) == 3:
                triples.add(triple)
    return sorted(triples)


def _chord_bound(value, spherical):
    """Largest side a triple may have and still beat `value`"""
    if spherical:
        if value >= math.pi / 2:
            return math.inf
        return 2.0 * math.sin(value) * (1.0 + PRUNE_MARGIN)
    return 2.0 * value * (1.0 + PRUNE_MARGIN)


def _pruned_scan(link, spherical, distances):
    """Skip triples with a side longer than twice the current best radius (circumradius ≥ side/2)"""
    points = link.points
    count = len(points)

    best_value, best_triple = math.inf, (count, count, count)
    seeds = np.array(_seed_triples(link), dtype=int).reshape(-1, 3)
    if len(seeds):
        values = _triple_values(points, seeds[:, 0], seeds[:, 1], seeds[:, 2], spherical)
        for value, triple in zip(values, map(tuple, seeds)):
            if _better(float(value), triple, best_value, best_triple):
                best_value, best_triple = float(value), tuple(int(x) for x in triple)

    for i in range(count - 2):
        bound = _chord_bound(best_value, spherical)
        later = np.arange(i + 1, count)
        near = later[distances[i, later] <= bound]
        if len(near) < 2:
            continue
        sub = distances[np.ix_(near, near)]
        jj, kk = np.triu_indices(len(near), k=1)
        keep = sub[jj, kk] <= bound
        if not np.any(keep):
            continue
        jj, kk = near[jj[keep]], near[kk[keep]]
        values = _triple_values(points, np.full(len(jj), i), jj, kk, spherical)
        best = int(np.argmin(values))
        candidate = (i, int(jj[best]), int(kk[best]))
        if _better(float(values[best]), candidate, best_value, best_triple):
            best_value, best_triple = float(values[best]), candidate
    return best_value, best_triple


def thickness_witness(link, method="pruned"):
    """Thickness value plus the index triple (into link.points) attaining it"""
    spherical = link.ambient is Ambient.SPHERICAL
    distances = _check_distinct(link.points)
    if method == "brute":
        value, triple = _brute_scan(link.points, spherical)
    elif method == "pruned":
        value, triple = _pruned_scan(link, spherical, distances)
    else:
        raise InputError(f"unknown thickness method '{method}'")
    logging.debug(f"{link.ambient.value} thickness {value:.12g} at triple {triple} ({method})")
    return ThicknessResult(value, triple, method)


def euclidean_thickness(link, method="pruned"):
    if link.ambient is not Ambient.EUCLIDEAN:
        raise InputError("euclidean_thickness needs a link in ℝ³")
    return thickness_witness(link, method).value


def spherical_thickness(link, method="pruned"):
    if link.ambient is not Ambient.SPHERICAL:
        raise InputError("spherical_thickness needs a link in S³")
    return thickness_witness(link, method).value


def ropelength(link, method="pruned"):
    """Total core length divided by thickness"""
    return link_length(link) / euclidean_thickness(link, method)


def _along(samples, index, s, spherical):
    """Point of the polygon near sample `index`; s ∈ [-1, 1] walks to the previous / next sample"""
    count = len(samples)
    other = samples[(index - 1) % count] if s < 0 else samples[(index + 1) % count]
    w = abs(s)
    point = (1.0 - w) * samples[index] + w * other
    if spherical:
        point = point / np.linalg.norm(point)
    return point


def _distance(x, y, spherical):
    chord = float(np.linalg.norm(x - y))
    return float(chord_to_arc(chord)) if spherical else chord


def _local_refine(a, b, i, j, spherical, start):
    """Zooming grid search over the polygon pieces adjacent to samples i (of a) and j (of b)"""
    best, s0, t0, half = start, 0.0, 0.0, 1.0
    ticks = np.linspace(-1.0, 1.0, 9)
    while half > REFINE_TOL * 1e-3:
        improved = best
        for ds in ticks:
            s = float(np.clip(s0 + half * ds, -1.0, 1.0))
            x = _along(a, i, s, spherical)
            for dt in ticks:
                t = float(np.clip(t0 + half * dt, -1.0, 1.0))
                value = _distance(x, _along(b, j, t, spherical), spherical)
                if value < improved:
                    improved, s_best, t_best = value, s, t
        if improved < best:
            best, s0, t0 = improved, s_best, t_best
        half /= 4.0
    return best


def component_min_distance(a, b):
    """Minimum distance between two components (geodesic in S³), refined between samples"""
    if a.ambient is not b.ambient:
        raise InputError("components must share one ambient space")
    spherical = a.ambient is Ambient.SPHERICAL
    chords = cdist(a.samples, b.samples)
    flat = np.argsort(chords, axis=None, kind='stable')[:REFINE_CANDIDATES]
    best = math.inf
    for index in flat:
        i, j = np.unravel_index(int(index), chords.shape)
        start = _distance(a.samples[i], b.samples[j], spherical)
        best = min(best, _local_refine(a.samples, b.samples, int(i), int(j), spherical, start))
    return best


def curve_from_function(fn, count, ambient=Ambient.EUCLIDEAN):
    """Sample t ↦ fn(t) at count equally spaced parameters in [0, 2π)"""
    t = 2.0 * np.pi * np.arange(count) / count
    return DiscreteCurve(np.column_stack(fn(t)), ambient)


def circle_curve(radius=1.0, count=64, center=(0.0, 0.0, 0.0)):
    return curve_from_function(
        lambda t: (center[0] + radius * np.cos(t), center[1] + radius * np.sin(t), center[2] + 0.0 * t), count)


def great_circle_curve(count=256):
    return curve_from_function(lambda t: (np.cos(t), np.sin(t), 0.0 * t, 0.0 * t), count, Ambient.SPHERICAL)


def small_circle_curve(radius, count=256):
    """Round circle on S³ of Euclidean radius ρ < 1, in a plane at distance √(1 − ρ²)"""
    height = math.sqrt(1.0 - radius * radius)
    return curve_from_function(
        lambda t: (radius * np.cos(t), radius * np.sin(t), height + 0.0 * t, 0.0 * t), count, Ambient.SPHERICAL)
