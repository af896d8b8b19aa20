"""Periodic packings of ℝ³ by bialys (solid tori around round cores): the three explicit lattices,
non-overlap certification, and analytic / Monte Carlo density.
"""
import itertools
import logging
import math

import numpy as np
from scipy.optimize import bisect
from scipy.spatial.distance import cdist

import settings
import utils
from errors import ConvergenceError, InputError
from geom_core import RHO_INF, closest_point_on_circle, make_circle, point_to_circle_distance, random_unit_vectors
from models import CertificationReport, ContactPair, DensityReport, PackingSpec

SHIFTED_C = 2.0 + math.sqrt(3.0)
SHEAR_B = math.sqrt(SHIFTED_C ** 2 - 4.0)
BIALY_VOLUME = 2.0 * math.pi ** 2

COARSE_GRID = 64
PROJECTION_STARTS = 4
PROJECTION_TOL = 1e-13
PROJECTION_MAX_ITERS = 5000
INTERCORE_XTOL = 1e-12
EXACT_CHECK_MARGIN = 1.0

NAMED_LATTICES = ("stacked", "checkerboard", "sheared")


def _alternate(a, b, start):
    """Alternating projection between the two circles from a point of a"""
    x = start
    y = closest_point_on_circle(x, b)
    distance = float(np.linalg.norm(x - y))
    for _ in range(PROJECTION_MAX_ITERS):
        x = closest_point_on_circle(y, a)
        y = closest_point_on_circle(x, b)
        updated = float(np.linalg.norm(x - y))
        if distance - updated <= PROJECTION_TOL:
            return min(distance, updated), True
        distance = updated
    return distance, False


def circle_circle_distance(a, b):
    """Minimum distance between two round circles in ℝ³"""
    pa, pb = a.sample(COARSE_GRID), b.sample(COARSE_GRID)
    coarse = cdist(pa, pb)
    starts = np.argsort(coarse, axis=None, kind='stable')[:PROJECTION_STARTS]

    best, converged = float(np.min(coarse)), False
    for flat in starts:
        i, _ = np.unravel_index(int(flat), coarse.shape)
        value, done = _alternate(a, b, pa[i])
        converged = converged or done
        best = min(best, value)
    if not converged:
        raise ConvergenceError("circle-circle distance did not converge", best_bound=best)
    return best


def shifted_intercore_distance():
    """Smallest horizontal offset of two parallel unit cores one unit apart vertically whose tubes just touch"""
    core = make_circle((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), 1.0)

    def gap(d):
        return circle_circle_distance(core, make_circle((d, 0.0, 1.0), (0.0, 0.0, 1.0), 1.0)) - 2.0

    return bisect(gap, 2.0, 4.0, xtol=INTERCORE_XTOL)


def named_lattice(name):
    """Single vertical unit core at the origin on one of the stacked / checkerboard / sheared lattices"""
    c, b, s3 = SHIFTED_C, SHEAR_B, math.sqrt(3.0)
    bases = {
        "stacked": [(4.0, 0.0, 0.0), (2.0, 2.0 * s3, 0.0), (0.0, 0.0, 2.0)],
        "checkerboard": [(c, c, 0.0), (c, 0.0, 1.0), (0.0, 0.0, 2.0)],
        "sheared": [(4.0, 0.0, 0.0), (2.0, b, 1.0), (0.0, 0.0, 2.0)],
    }
    if name not in bases:
        raise InputError(f"unknown lattice '{name}', expected one of {', '.join(NAMED_LATTICES)}")
    core = make_circle((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), 1.0)
    return PackingSpec(np.array(bases[name]), (core,), tube_radius=1.0, name=name)


def hexagonal_cylinder_density():
    """Infinite unit cylinders on the hexagonal lattice"""
    return RHO_INF


def _index_box(basis, reach):
    """Per-axis bound on lattice indices n with |n·B| ≤ reach"""
    inverse = np.linalg.inv(basis)
    return np.ceil(reach * np.linalg.norm(inverse, axis=0) + 1e-9).astype(int)


def _lattice_indices(basis, reach):
    bounds = _index_box(basis, reach)
    ranges = [range(-int(k), int(k) + 1) for k in bounds]
    return np.array(list(itertools.product(*ranges)), dtype=int).reshape(-1, 3)


def _max_core_radius(spec):
    return max((core.radius for core in spec.motif), default=0.0)


def default_cutoff(spec):
    return 2.0 * float(np.max(np.linalg.norm(spec.basis, axis=1))) + 6.0


def verify_nonoverlap(spec, cutoff=None, tolerance=None):
    """Check every pair of core translates within cutoff for tube overlap; record contacts and the minimal gap"""
    tolerance = settings.CONTACT_TOL if tolerance is None else tolerance
    cutoff = default_cutoff(spec) if cutoff is None else float(cutoff)
    longest = float(np.max(np.linalg.norm(spec.basis, axis=1)))
    needed = 2.0 * (_max_core_radius(spec) + spec.tube_radius) + longest
    if cutoff < needed:
        raise InputError(f"cutoff {cutoff:g} cannot see every possible contact; need at least {needed:g}")

    touch = 2.0 * spec.tube_radius
    centers = np.array([core.center for core in spec.motif]).reshape(-1, 3)
    spread = float(np.max(cdist(centers, centers))) if len(centers) else 0.0
    indices = _lattice_indices(spec.basis, cutoff + spread)

    contacts, violations = [], []
    min_gap, checked = math.inf, 0
    for ia, ib in itertools.combinations_with_replacement(range(len(spec.motif)), 2):
        core_a, core_b = spec.motif[ia], spec.motif[ib]
        for n in indices:
            if ia == ib and tuple(n) <= (0, 0, 0):
                continue
            offset = n @ spec.basis
            separation = float(np.linalg.norm(core_b.center_array + offset - core_a.center_array))
            if separation > cutoff:
                continue
            checked += 1
            lower = separation - core_a.radius - core_b.radius
            if lower > touch + EXACT_CHECK_MARGIN:
                min_gap = min(min_gap, lower - touch)
                continue

            distance = circle_circle_distance(core_a, core_b.translated(offset))
            min_gap = min(min_gap, distance - touch)
            pair = ContactPair(ia, ib, tuple(int(k) for k in n), tuple(float(x) for x in offset), distance)
            if distance < touch - tolerance:
                violations.append(pair)
            elif distance <= touch + tolerance:
                contacts.append(pair)

    certified = not violations
    if certified:
        logging.info(f"{spec.name}: certified, {len(contacts)} contact pairs, minimal gap {min_gap:.3e}")
    else:
        worst = min(violations, key=lambda p: p.distance)
        logging.warning(f"{spec.name}: tubes overlap, e.g. motif {worst.motif_a} vs motif {worst.motif_b} "
                        f"translate {worst.translate} at core distance {worst.distance:.12g}")
    return CertificationReport(
        spec=spec.with_certification(certified),
        certified=certified,
        min_gap=min_gap,
        contacts=tuple(contacts),
        violations=tuple(violations),
        pairs_checked=checked,
        cutoff=cutoff,
    )


@utils.certified_required
def analytic_density(spec):
    """Σ bialy volumes (Pappus: 2π²·R·r²) over the cell volume"""
    volume = sum(BIALY_VOLUME * core.radius * spec.tube_radius ** 2 for core in spec.motif)
    return volume / spec.volume


def _candidate_cores(spec):
    """Every core translate whose tube can reach the fundamental cell"""
    corner_sum = np.sum(spec.basis, axis=0)
    cell_center = 0.5 * corner_sum
    corners = np.array(list(itertools.product((0, 1), repeat=3))) @ spec.basis
    cell_radius = float(np.max(np.linalg.norm(corners - cell_center, axis=1)))

    candidates = []
    for core in spec.motif:
        reach = cell_radius + core.radius + spec.tube_radius
        shift = float(np.linalg.norm(core.center_array - cell_center))
        for n in _lattice_indices(spec.basis, reach + shift):
            offset = n @ spec.basis
            if np.linalg.norm(core.center_array + offset - cell_center) <= reach:
                candidates.append(core.translated(offset))
    return candidates


def _covered(points, cores, tube_radius):
    covered = np.zeros(len(points), dtype=bool)
    for core in cores:
        covered |= point_to_circle_distance(points, core) <= tube_radius
    return covered


def _report(analytic, hits, samples, seed):
    estimate = hits / samples
    return DensityReport(
        analytic=analytic,
        monte_carlo=estimate,
        half_width=utils.binomial_half_width(estimate, samples),
        std_error=utils.binomial_std_error(estimate, samples),
        samples=samples,
        seed=seed,
    )


def _check_samples(samples, seed):
    samples = settings.DEFAULT_SAMPLES if samples is None else int(samples)
    seed = settings.DEFAULT_SEED if seed is None else int(seed)
    if samples < 1:
        raise InputError("Monte Carlo needs at least one sample")
    return samples, seed


@utils.certified_required
def monte_carlo_density(spec, samples=None, seed=None, workers=None):
    """Covered fraction of uniform samples in the fundamental parallelepiped"""
    samples, seed = _check_samples(samples, seed)
    cores = _candidate_cores(spec)

    def count_chunk(job):
        index, count = job
        points = utils.rng_for(seed, index).random((count, 3)) @ spec.basis
        return int(np.count_nonzero(_covered(points, cores, spec.tube_radius)))

    hits = sum(utils.parallel_map(count_chunk, list(enumerate(utils.chunk_counts(samples))), workers))
    report = _report(analytic_density(spec), hits, samples, seed)
    logging.info(f"{spec.name}: Monte Carlo density {report.monte_carlo:.5f} ± {report.half_width:.5f} "
                 f"(analytic {report.analytic:.5f})")
    return report


@utils.certified_required
def ball_density(spec, center, radius, samples=None, seed=None, workers=None):
    """Covered fraction of uniform samples in a ball; tends to the lattice density as the ball grows"""
    if not radius > 0:
        raise InputError(f"ball radius must be positive, got {radius}")
    samples, seed = _check_samples(samples, seed)
    center = np.asarray(center, dtype=float)
    cores = _candidate_cores(spec)
    inverse = np.linalg.inv(spec.basis)

    def count_chunk(job):
        index, count = job
        rng = utils.rng_for(seed, index)
        directions = random_unit_vectors(count, 3, rng)
        points = center + radius * np.cbrt(rng.random(count))[:, None] * directions
        # fold into the fundamental cell
        cells = np.floor(points @ inverse)
        folded = points - cells @ spec.basis
        return int(np.count_nonzero(_covered(folded, cores, spec.tube_radius)))

    hits = sum(utils.parallel_map(count_chunk, list(enumerate(utils.chunk_counts(samples))), workers))
    return hits / samples


def bialy_volume_report(samples=None, seed=None, tube_radius=1.0, scale=1.0):
    """Monte Carlo volume of a bialy (unit core scaled by `scale`) in the box [−2, 2]³·scale"""
    samples, seed = _check_samples(samples, seed)
    if not 0.0 <= tube_radius <= 1.0:
        raise InputError(f"tube radius must lie in [0, 1], got {tube_radius}")
    core = make_circle((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), scale)
    half = 2.0 * scale
    box = (2.0 * half) ** 3

    hits = 0
    for index, count in enumerate(utils.chunk_counts(samples)):
        points = utils.rng_for(seed, index).uniform(-half, half, size=(count, 3))
        hits += int(np.count_nonzero(point_to_circle_distance(points, core) < tube_radius * scale))

    fraction = hits / samples
    return DensityReport(
        analytic=BIALY_VOLUME * tube_radius ** 2 * scale ** 3,
        monte_carlo=box * fraction,
        half_width=box * utils.binomial_half_width(fraction, samples),
        std_error=box * utils.binomial_std_error(fraction, samples),
        samples=samples,
        seed=seed,
    )


def bialy_volume_check(samples=None, seed=None, tube_radius=1.0, scale=1.0):
    return bialy_volume_report(samples, seed, tube_radius, scale).monte_carlo
