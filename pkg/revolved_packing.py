"""Unit disks packed hexagonally in the upper half-plane, tangent to the axis, then revolved about it.

Coordinates are meridian (x along the axis, y = distance from the axis). Each disk sweeps a
unit tube and each Voronoi cell sweeps its revolved cell; by Pappus both volumes are 2π times
the first moment of area about the axis, so the density of a cell is π·(disk height) / moment.
"""
import logging
import math

import numpy as np
from scipy import integrate

import settings
import utils
from errors import InputError
from geom_core import RHO_INF, make_circle, point_to_circle_distance
from models import DensityReport, RevolvedCell

SQRT3 = math.sqrt(3.0)
# row-1 cell: rectangle up to the side vertices, then a triangle up to the apex
ROW1_SIDE = 1.0 + 1.0 / SQRT3
ROW1_APEX = 1.0 + 2.0 / SQRT3
HEX_CIRCUMRADIUS = 2.0 / SQRT3


def disk_center(row):
    """Meridian position of the disk of a row; rows alternate between x = 0 and x = 1"""
    if row < 1:
        raise InputError(f"rows are numbered from 1, got {row}")
    return float((row - 1) % 2), 1.0 + (row - 1) * SQRT3


def revolved_cell(row):
    """Voronoi cell of the row's disk, counter-clockwise"""
    x0, y0 = disk_center(row)
    if row == 1:
        region = ((-1.0, 0.0), (1.0, 0.0), (1.0, ROW1_SIDE), (0.0, ROW1_APEX), (-1.0, ROW1_SIDE))
    else:
        angles = np.radians([-90.0, -30.0, 30.0, 90.0, 150.0, 210.0])
        region = tuple((x0 + HEX_CIRCUMRADIUS * math.cos(a), y0 + HEX_CIRCUMRADIUS * math.sin(a)) for a in angles)
    return RevolvedCell(row, region, y0)


def cell_area_and_moment(row):
    """Area and first moment about the axis of the cell polygon (shoelace sums)"""
    vertices = np.array(revolved_cell(row).region)
    x, y = vertices[:, 0], vertices[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * float(np.sum(cross))
    moment = float(np.sum((y + yn) * cross)) / 6.0
    return area, moment


def row1_closed_form():
    """Rectangle [−1,1]×[0,h] plus the triangle on top, h = 1 + 1/√3"""
    h = ROW1_SIDE
    triangle = 1.0 / SQRT3
    area = 2.0 * h + triangle
    moment = h * h + triangle * (h + (ROW1_APEX - h) / 3.0)
    return area, moment


def row1_quadrature():
    """Numerical area and moment of the row-1 cell under its roof line"""
    def top(x):
        return ROW1_APEX - abs(x) / SQRT3

    area, _ = integrate.quad(top, -1.0, 1.0, points=[0.0], epsabs=1e-14, epsrel=1e-14)
    moment, _ = integrate.quad(lambda x: 0.5 * top(x) ** 2, -1.0, 1.0, points=[0.0], epsabs=1e-14, epsrel=1e-14)
    return area, moment


def _moment(row):
    if row == 1:
        return row1_closed_form()[1]
    return 2.0 * SQRT3 * disk_center(row)[1]


def cell_density(row):
    """Torus volume 2π²·R over revolved cell volume 2π·moment"""
    if row < 1:
        raise InputError(f"rows are numbered from 1, got {row}")
    if row >= 2:
        return RHO_INF
    return math.pi * disk_center(row)[1] / _moment(row)


def revolved_density_profile(rows):
    """Per-row densities and the cumulative density of rows 1..k"""
    if rows < 1:
        raise InputError(f"rows must be >= 1, got {rows}")
    table = []
    torus_total, cell_total = 0.0, 0.0
    for row in range(1, rows + 1):
        torus_total += math.pi * disk_center(row)[1]
        cell_total += _moment(row)
        table.append({'row': row, 'cell_density': cell_density(row), 'cumulative': torus_total / cell_total})
    return table


def _cores(rows):
    """Core circles (axis = x-axis) of the disks nearest to the slab x ∈ [−1, 1]"""
    cores, owners = [], []
    for row in range(1, rows + 1):
        x0, y0 = disk_center(row)
        for x in ((0.0,) if x0 == 0.0 else (-1.0, 1.0)):
            cores.append(make_circle((x, 0.0, 0.0), (1.0, 0.0, 0.0), y0))
            owners.append(row)
    return cores, np.array(owners)


def _solid_points(rng, count, x_range, height):
    """Uniform points of the solid cylinder of revolution x ∈ x_range, distance to axis ≤ height"""
    x = rng.uniform(x_range[0], x_range[1], count)
    radius = height * np.sqrt(rng.random(count))
    angle = rng.uniform(0.0, 2.0 * math.pi, count)
    return np.column_stack([x, radius * np.cos(angle), radius * np.sin(angle)])


def revolved_mc_report(rows, samples=None, seed=None):
    """Covered fraction of the revolved cells of rows 1..k, by nearest-core cell assignment"""
    if rows < 1:
        raise InputError(f"rows must be >= 1, got {rows}")
    samples = settings.DEFAULT_SAMPLES if samples is None else int(samples)
    seed = settings.DEFAULT_SEED if seed is None else int(seed)
    if samples < 1:
        raise InputError("Monte Carlo needs at least one sample")

    cores, owners = _cores(rows + 1)
    height = disk_center(rows)[1] + HEX_CIRCUMRADIUS
    kept, hits = 0, 0
    for index, count in enumerate(utils.chunk_counts(samples)):
        points = _solid_points(utils.rng_for(seed, index), count, (-1.0, 1.0), height)
        distances = np.column_stack([point_to_circle_distance(points, core) for core in cores])
        nearest = np.argmin(distances, axis=1)
        inside = owners[nearest] <= rows
        kept += int(np.count_nonzero(inside))
        hits += int(np.count_nonzero(inside & (distances[np.arange(count), nearest] <= 1.0)))

    if kept == 0:
        raise InputError("no samples landed in the revolved cells")
    estimate = hits / kept
    analytic = revolved_density_profile(rows)[-1]['cumulative']
    logging.info(f"revolved rows 1..{rows}: Monte Carlo {estimate:.5f} vs Pappus {analytic:.5f}")
    return DensityReport(
        analytic=analytic,
        monte_carlo=estimate,
        half_width=utils.binomial_half_width(estimate, kept),
        std_error=utils.binomial_std_error(estimate, kept),
        samples=kept,
        seed=seed,
    )


def revolved_mc_check(rows, samples=None, seed=None):
    return revolved_mc_report(rows, samples, seed).monte_carlo


def pappus_cell_volume(row):
    return 2.0 * math.pi * cell_area_and_moment(row)[1]


def cell_volume_mc(row, samples=None, seed=None):
    """Monte Carlo volume of one revolved cell and its standard error"""
    samples = settings.DEFAULT_SAMPLES if samples is None else int(samples)
    seed = settings.DEFAULT_SEED if seed is None else int(seed)
    if samples < 1:
        raise InputError("Monte Carlo needs at least one sample")
    x0, y0 = disk_center(row)
    height = y0 + HEX_CIRCUMRADIUS if row > 1 else ROW1_APEX

    # the cell's own center first, then its neighbours
    centers = [(x0, y0), (x0 - 2.0, y0), (x0 + 2.0, y0)]
    for other in (row - 1, row + 1):
        if other >= 1:
            _, oy = disk_center(other)
            centers += [(x0 - 1.0, oy), (x0 + 1.0, oy)]
    centers = np.array(centers)

    inside = 0
    for index, count in enumerate(utils.chunk_counts(samples)):
        points = _solid_points(utils.rng_for(seed, index), count, (x0 - 1.0, x0 + 1.0), height)
        meridian = np.column_stack([points[:, 0], np.hypot(points[:, 1], points[:, 2])])
        nearest = np.argmin(np.linalg.norm(meridian[:, None, :] - centers[None, :, :], axis=2), axis=1)
        inside += int(np.count_nonzero(nearest == 0))

    box = 2.0 * math.pi * height ** 2
    fraction = inside / samples
    return box * fraction, box * utils.binomial_std_error(fraction, samples)
