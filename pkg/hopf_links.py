"""Geometric Hopf links in S³ lifted from S² configurations, and (m,2) torus knots on Clifford tori.

The Hopf projection doubles distances between fibers, so the fibers over a configuration
with packing radius r are pairwise at least r apart and the lifted link has thickness r/2.
"""
import logging
import math

import numpy as np
from scipy.optimize import minimize_scalar

import settings
import utils
from curves import curve_from_function, spherical_thickness
from errors import InconsistencyError, InputError
from geom_core import fiber_distance, hopf_fiber, hopf_project, point_to_great_circle_distance, random_unit_vectors
from models import Ambient, DensityReport, DiscreteLink, HopfLink, HopfThickness, TorusKnotSpec
from s2_packing import packing_radius

LIFT_TOL = 1e-9
ASPECT_XTOL = 1e-5
DEFAULT_FIBER_SAMPLES = 256
DEFAULT_ASPECT_GRID = 64


def lift_configuration(config, samples=DEFAULT_FIBER_SAMPLES):
    """One sampled Hopf fiber per base point"""
    if samples < settings.MIN_CURVE_SAMPLES:
        raise InputError(f"need at least {settings.MIN_CURVE_SAMPLES} samples per fiber, got {samples}")
    fibers = []
    for index, point in enumerate(config.points):
        fiber = hopf_fiber(point)
        error = float(np.max(np.abs(hopf_project(fiber.sample(samples)) - point)))
        if error > LIFT_TOL:
            raise InconsistencyError(f"fiber {index} projects {error:.3e} away from its base point")
        fibers.append(fiber)
    logging.debug(f"lifted {config.n} base points to Hopf fibers with {samples} samples each")
    return HopfLink(config, tuple(fibers), samples)


def closed_form_thickness(link):
    """Half the packing radius of the base, capped at π/2"""
    return min(math.pi / 2.0, packing_radius(link.base) / 2.0)


def hopf_link_thickness(link, method="pruned", tolerance=None):
    """Thickness both in closed form and from the triple scan of the sampled fibers"""
    tolerance = settings.FIBER_AGREEMENT_TOL if tolerance is None else tolerance
    result = HopfThickness(
        closed_form=closed_form_thickness(link),
        sampled=spherical_thickness(link.link, method),
        tolerance=tolerance,
    )
    if not result.agree:
        raise InconsistencyError(
            f"Hopf link thickness: closed form {result.closed_form:.12g} vs sampled {result.sampled:.12g} "
            f"differ by {result.discrepancy:.3e} (tolerance {tolerance:g})")
    logging.info(f"{link.base.n}-component Hopf link thickness {result.closed_form:.10f} "
                 f"(sampled {result.sampled:.10f})")
    return result


def fiber_separations(link):
    """(i, j, fiber distance in S³, half the base distance on S²) for every pair of fibers"""
    rows = []
    points = link.base.points
    for i in range(len(link.fibers)):
        for j in range(i + 1, len(link.fibers)):
            base = math.acos(float(np.clip(np.dot(points[i], points[j]), -1.0, 1.0)))
            rows.append((i, j, fiber_distance(link.fibers[i], link.fibers[j]), base / 2.0))
    return rows


def hopf_link_density(link):
    """Volume fraction of S³ filled by the thick link; a tube of radius r about a great circle has volume 2π²·sin²r"""
    thickness = closed_form_thickness(link)
    return min(1.0, link.base.n * math.sin(thickness) ** 2)


def hopf_link_mc_density(link, samples=None, seed=None, workers=None):
    """Monte Carlo volume fraction over uniform points of S³"""
    samples = settings.DEFAULT_SAMPLES if samples is None else int(samples)
    seed = settings.DEFAULT_SEED if seed is None else int(seed)
    if samples < 1:
        raise InputError("Monte Carlo needs at least one sample")
    thickness = closed_form_thickness(link)

    def count_chunk(job):
        index, count = job
        points = random_unit_vectors(count, 4, utils.rng_for(seed, index))
        nearest = np.full(count, np.inf)
        for fiber in link.fibers:
            nearest = np.minimum(nearest, point_to_great_circle_distance(points, fiber))
        return int(np.count_nonzero(nearest < thickness))

    jobs = list(enumerate(utils.chunk_counts(samples)))
    hits = sum(utils.parallel_map(count_chunk, jobs, workers))
    estimate = hits / samples
    return DensityReport(
        analytic=hopf_link_density(link),
        monte_carlo=estimate,
        half_width=utils.binomial_half_width(estimate, samples),
        std_error=utils.binomial_std_error(estimate, samples),
        samples=samples,
        seed=seed,
    )


def parallel_link(samples=DEFAULT_FIBER_SAMPLES):
    """Two parallels at latitude ±π/4 on a great S²: a trivial link that is also π/4 thick"""
    radius = 1.0 / math.sqrt(2.0)

    def parallel(height):
        return curve_from_function(
            lambda t: (radius * np.cos(t), radius * np.sin(t), height + 0.0 * t, 0.0 * t),
            samples, Ambient.SPHERICAL)

    return DiscreteLink.of(parallel(radius), parallel(-radius))


def torus_knot_curve(spec):
    """(m,2) torus knot t ↦ (a·cos mt, a·sin mt, b·cos 2t, b·sin 2t) with a² + b² = 1"""
    a = spec.aspect
    b = math.sqrt(1.0 - a * a)
    return curve_from_function(
        lambda t: (a * np.cos(spec.m * t), a * np.sin(spec.m * t), b * np.cos(2.0 * t), b * np.sin(2.0 * t)),
        spec.samples, Ambient.SPHERICAL)


def torus_knot_thickness(m, aspect, samples=DEFAULT_FIBER_SAMPLES):
    return spherical_thickness(DiscreteLink.of(torus_knot_curve(TorusKnotSpec(m, aspect, samples))))


def aspect_sweep(m, samples=DEFAULT_FIBER_SAMPLES, grid=DEFAULT_ASPECT_GRID, workers=None):
    """(a, thickness) rows at the cell midpoints a = (i + ½)/grid"""
    if grid < 3:
        raise InputError(f"aspect grid needs at least 3 points, got {grid}")
    TorusKnotSpec(m, 0.5, samples)  # validates m and samples before the sweep
    aspects = (np.arange(grid) + 0.5) / grid
    values = utils.parallel_map(lambda a: torus_knot_thickness(m, float(a), samples), aspects, workers)
    return [(float(a), float(v)) for a, v in zip(aspects, values)]


def optimize_aspect(m, samples=DEFAULT_FIBER_SAMPLES, grid=DEFAULT_ASPECT_GRID, workers=None):
    """Clifford-torus aspect maximizing the knot's thickness.

    Grid argmax first, then bounded Brent refinement (scipy's `minimize_scalar`, method
    'bounded') on the bracket formed by the argmax's grid neighbours, to ASPECT_XTOL. Brent
    stands in for golden-section search and converges to the same bracketed maximum.
    """
    sweep = aspect_sweep(m, samples, grid, workers)
    values = np.array([v for _, v in sweep])
    best = int(np.argmax(values))
    lower = sweep[max(best - 1, 0)][0] if best > 0 else 0.5 * sweep[0][0]
    upper = sweep[min(best + 1, grid - 1)][0] if best < grid - 1 else 0.5 * (1.0 + sweep[-1][0])

    result = minimize_scalar(
        lambda a: -torus_knot_thickness(m, a, samples),
        bounds=(lower, upper),
        method='bounded',
        options={'xatol': ASPECT_XTOL},
    )
    if result.success and -result.fun >= values[best]:
        aspect, thickness = float(result.x), float(-result.fun)
    else:
        aspect, thickness = sweep[best]
    logging.info(f"({m},2) torus knot: best aspect {aspect:.6f}, thickness {thickness:.8f}")
    return aspect, thickness
