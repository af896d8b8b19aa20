"""Disk packings on S²: packing radius, density, and a maximin optimizer giving lower bounds for the optimal radius."""
import logging
import math

import numpy as np
from scipy.optimize import minimize

import settings
import utils
from errors import InputError, OverlapError
from geom_core import RHO_INF, random_unit_vectors
from models import OptimizationResult, PackingSummary, S2Config

DENSITY_SNAP = 1e-12
ACHIEVED_TOL = 1e-7

# soft-min ascent schedule
START_TEMPERATURE = 0.5
TEMPERATURE_DECAY = 0.95
MIN_TEMPERATURE = 1e-4
STEP_SCALE = 0.5

DEFAULT_RESTARTS = 8
DEFAULT_ITERS = 400
POLISH_MAXITER = 500
POLISH_FTOL = 1e-14

SCAN_NOTE = ("densities are for the configurations found, which are lower bounds for the optimal ones; "
             "staying below the hexagonal density is evidence, not proof")

# Minimum angular separation (degrees) of the best known configurations, n = 7..11
_KNOWN_SEPARATIONS = {
    7: 77.8695421,
    8: 74.8584922,
    9: 70.5287794,
    10: 66.1468220,
    11: 63.4349488,
}


def best_known_radius(n):
    """Known optimal packing radius for n ≤ 12, None beyond"""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    exact = {
        1: math.pi,
        2: math.pi / 2.0,
        3: math.pi / 3.0,
        4: 0.5 * math.acos(-1.0 / 3.0),
        5: math.pi / 4.0,
        6: math.pi / 4.0,
        12: 0.5 * math.atan(2.0),
    }
    if n in exact:
        return exact[n]
    if n in _KNOWN_SEPARATIONS:
        return 0.5 * math.radians(_KNOWN_SEPARATIONS[n])
    return None


def packing_radius(config):
    """Half the smallest pairwise geodesic distance; π for a single point"""
    if config.n < 2:
        logging.warning("packing radius of a single point is taken as π (the whole sphere)")
        return math.pi
    distances = utils.calculate_distances(config.points)
    upper = distances[np.triu_indices(config.n, k=1)]
    return 0.5 * float(np.min(upper))


def packing_density(n, radius):
    """Fraction of S² covered by n caps of the given radius, n(1 − cos r)/2"""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if not 0.0 < radius <= math.pi:
        raise InputError(f"cap radius must lie in (0, π], got {radius}")
    density = n * (1.0 - math.cos(radius)) / 2.0
    if abs(density - 1.0) <= DENSITY_SNAP:
        return 1.0
    if density > 1.0:
        raise OverlapError(f"{n} caps of radius {radius:.12g} would cover {density:.12g} of the sphere")
    return density


def achieved_pairs(config, radius=None):
    """Index pairs at the minimum distance, lexicographic"""
    if config.n < 2:
        return ()
    radius = packing_radius(config) if radius is None else radius
    distances = utils.calculate_distances(config.points)
    close = np.triu(distances <= 2.0 * radius + ACHIEVED_TOL, k=1)
    return tuple((int(i), int(j)) for i, j in np.argwhere(close))


def summarize(config):
    radius = packing_radius(config)
    best = best_known_radius(config.n)
    return PackingSummary(
        n=config.n,
        radius=radius,
        density=packing_density(config.n, radius),
        achieved_pairs=achieved_pairs(config, radius),
        best_known_radius=best,
        best_known_density=None if best is None else packing_density(config.n, best),
    )


def regular_configuration(name):
    """Named symmetric configurations: antipodal, triangle, tetrahedron, octahedron, icosahedron"""
    if name == "antipodal":
        points = [(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)]
    elif name == "triangle":
        angles = 2.0 * np.pi * np.arange(3) / 3.0
        points = np.column_stack([np.cos(angles), np.sin(angles), np.zeros(3)])
    elif name == "tetrahedron":
        points = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif name == "octahedron":
        points = np.vstack([np.eye(3), -np.eye(3)])
    elif name == "icosahedron":
        phi = (1.0 + math.sqrt(5.0)) / 2.0
        points = []
        for a in (1.0, -1.0):
            for b in (phi, -phi):
                points += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    else:
        raise InputError(f"unknown configuration '{name}'")
    return S2Config.normalized(points)


def _soft_min_ascent(points, iters):
    """Gradient ascent on a log-sum-exp smoothing of the minimum pairwise angle"""
    for k in range(iters):
        t = max(START_TEMPERATURE * TEMPERATURE_DECAY ** k, MIN_TEMPERATURE)
        gram = np.clip(points @ points.T, -1.0, 1.0)
        angles = np.arccos(gram)
        sines = np.maximum(np.sin(angles), 1e-9)
        np.fill_diagonal(sines, 1.0)
        np.fill_diagonal(angles, np.inf)
        weights = np.exp(-(angles - np.min(angles)) / t)
        weights /= np.sum(weights)
        coef = weights / sines
        # ∂θ_ij/∂x_i = −(x_j − ⟨x_i, x_j⟩ x_i) / sin θ_ij
        grad = -(coef @ points) + np.sum(coef * gram, axis=1)[:, None] * points
        norms = np.linalg.norm(grad, axis=1)
        grad = grad / np.maximum(norms, 1.0)[:, None]
        points = points + STEP_SCALE * t * grad
        points = points / np.linalg.norm(points, axis=1)[:, None]
    return points


def _polish(points):
    """SLSQP on the epigraph form: minimize z subject to ⟨xᵢ, xⱼ⟩ ≤ z and |xᵢ| = 1"""
    n = len(points)
    ii, jj = np.triu_indices(n, k=1)
    pairs = len(ii)
    size = 3 * n + 1

    def unpack(z):
        return z[:-1].reshape(n, 3)

    def objective(z):
        return z[-1]

    def objective_grad(z):
        grad = np.zeros(size)
        grad[-1] = 1.0
        return grad

    def separation(z):
        x = unpack(z)
        return z[-1] - np.sum(x[ii] * x[jj], axis=1)

    def separation_jac(z):
        x = unpack(z)
        jac = np.zeros((pairs, size))
        rows = np.arange(pairs)
        for d in range(3):
            jac[rows, 3 * ii + d] = -x[jj, d]
            jac[rows, 3 * jj + d] = -x[ii, d]
        jac[:, -1] = 1.0
        return jac

    def unit_norm(z):
        return np.sum(unpack(z) ** 2, axis=1) - 1.0

    def unit_norm_jac(z):
        x = unpack(z)
        jac = np.zeros((n, size))
        for d in range(3):
            jac[np.arange(n), 3 * np.arange(n) + d] = 2.0 * x[:, d]
        return jac

    start = np.append(points.ravel(), np.max(np.sum(points[ii] * points[jj], axis=1)))
    result = minimize(
        objective, start, jac=objective_grad, method='SLSQP',
        constraints=[
            {'type': 'ineq', 'fun': separation, 'jac': separation_jac},
            {'type': 'eq', 'fun': unit_norm, 'jac': unit_norm_jac},
        ],
        options={'maxiter': POLISH_MAXITER, 'ftol': POLISH_FTOL},
    )
    polished = unpack(result.x)
    return polished / np.linalg.norm(polished, axis=1)[:, None], bool(result.success)


def _single_restart(n, seed, restart, iters):
    rng = utils.rng_for(seed ^ restart)
    start = _soft_min_ascent(random_unit_vectors(n, 3, rng), iters)
    polished, converged = _polish(start)

    candidates = []
    for points in (polished, start):
        try:
            config = S2Config(points)
        except InputError:
            continue
        candidates.append((packing_radius(config), config))
    radius, config = max(candidates, key=lambda pair: pair[0])
    return radius, config, converged


def optimize_maximin(n, seed=None, restarts=DEFAULT_RESTARTS, iters=DEFAULT_ITERS, workers=None):
    """Best of several seeded restarts; the packing radius found is a lower bound for the optimum"""
    if n < 2:
        raise InputError(f"the maximin optimizer needs n >= 2, got {n}")
    if restarts < 1 or iters < 0:
        raise InputError("restarts must be >= 1 and iters >= 0")
    seed = settings.DEFAULT_SEED if seed is None else int(seed)

    outcomes = utils.parallel_map(lambda r: _single_restart(n, seed, r, iters), range(restarts), workers)
    best_restart = 0
    for index, outcome in enumerate(outcomes):
        if outcome[0] > outcomes[best_restart][0]:
            best_restart = index
    radius, config, converged = outcomes[best_restart]

    if not converged:
        logging.warning(f"maximin polish did not converge for n={n} (restart {best_restart}); "
                        f"keeping radius {radius:.12g}")
    logging.info(f"n={n}: packing radius {radius:.10f} from restart {best_restart} of {restarts}")
    return OptimizationResult(
        config=config,
        summary=summarize(config),
        converged=converged,
        best_restart=best_restart,
        seed=seed,
        restarts=restarts,
        iters=iters,
    )


def density_scan(n_max, seed=None, restarts=DEFAULT_RESTARTS, iters=DEFAULT_ITERS, workers=None):
    """Optimized densities for n = 3..n_max compared with the hexagonal density"""
    if n_max < 3:
        raise InputError(f"the density scan needs n_max >= 3, got {n_max}")
    rows = []
    for n in range(3, n_max + 1):
        result = optimize_maximin(n, seed, restarts, iters, workers)
        summary = result.summary
        rows.append({
            'n': n,
            'r_hat': summary.radius,
            'rho_hat': summary.density,
            'below_rho_inf': summary.density < RHO_INF,
            'converged': result.converged,
            'best_known_density': summary.best_known_density,
        })
    return rows
