"""Exact-formula primitives on ℝ³, ℝ⁴, S² and S³: distances, circumradii, the Hopf map and its fibers.

Everything here is pure; the vectorized helpers (`circumradii`, `spherical_tube_radii`,
`point_to_circle_distance`) broadcast over leading axes so the curve scans can feed them
whole blocks of triples at once.
"""
import math

import numpy as np
from scipy.optimize import minimize_scalar

from errors import DegenerateInputError
from models import Circle3, GreatCircle, UnitVec3, UnitVec4, UnitVector

COLLINEAR_TOL = 1e-12
RHO_INF = math.pi / math.sqrt(12.0)  # hexagonal disk packing density
FIBER_GRID = 64
FIBER_XTOL = 1e-9


def _as_array(p):
    if isinstance(p, UnitVector):
        return p.array
    return np.asarray(p, dtype=float)


def _dot(u, v):
    """Component-wise dot product over the last axis, summed in a fixed order"""
    total = u[..., 0] * v[..., 0]
    for k in range(1, u.shape[-1]):
        total = total + u[..., k] * v[..., k]
    return total


def _wedge_sq(u, v):
    """|u ∧ v|² as a sum of squared 2×2 minors (Lagrange identity without cancellation)"""
    dim = u.shape[-1]
    total = np.zeros(np.broadcast_shapes(u.shape[:-1], v.shape[:-1]))
    for i in range(dim):
        for j in range(i + 1, dim):
            minor = u[..., i] * v[..., j] - u[..., j] * v[..., i]
            total = total + minor * minor
    return total


def spherical_distance(p, q):
    """Geodesic distance on the unit sphere, arccos of the clamped inner product"""
    p, q = _as_array(p), _as_array(q)
    if p.shape[-1] != q.shape[-1]:
        raise DegenerateInputError("points must have equal dimension")
    inner = np.clip(_dot(p, q), -1.0, 1.0)
    result = np.arccos(inner)
    return float(result) if np.ndim(result) == 0 else result


def chord_to_arc(chord):
    """Geodesic length of a chord of the unit sphere, 2·arcsin(c/2), accurate for short chords"""
    return 2.0 * np.arcsin(np.clip(np.asarray(chord) / 2.0, 0.0, 1.0))


def _triangle_terms(a, b, c):
    u = b - a
    v = c - a
    w = c - b
    uu, vv, ww = _dot(u, u), _dot(v, v), _dot(w, w)
    if np.any(uu == 0.0) or np.any(vv == 0.0) or np.any(ww == 0.0):
        raise DegenerateInputError("circumradius of a triple with coincident points is undefined")
    return u, v, uu, vv, ww, _wedge_sq(u, v)


def circumradii(a, b, c):
    """Vectorized circumradius; +inf where the triple is collinear within tolerance"""
    a, b, c = _as_array(a), _as_array(b), _as_array(c)
    _, _, uu, vv, ww, wedge2 = _triangle_terms(a, b, c)
    longest = np.maximum(np.maximum(uu, vv), ww)
    area = 0.5 * np.sqrt(wedge2)
    collinear = area < COLLINEAR_TOL * longest
    with np.errstate(divide='ignore', invalid='ignore'):
        radius = np.sqrt(uu * vv * ww) / (2.0 * np.sqrt(wedge2))
    return np.where(collinear, np.inf, radius)


def circumradius(a, b, c):
    """Euclidean radius of the circle through a, b, c (points of ℝ³ or ℝ⁴)"""
    return float(circumradii(a, b, c))


def spherical_tube_radii(a, b, c):
    """Spherical radius of the round circle through three points of S³.

    The circle lies in an affine plane at distance δ from the origin and has Euclidean
    radius ρ with ρ² + δ² = 1, so its spherical radius arcsin(min(1, ρ)) equals atan2(ρ, δ);
    the atan2 form keeps full precision near great circles (ρ → 1).

    δ is the norm of the residual of `a` against an orthonormal (QR) basis of the plane's
    direction space. It vanishes to rounding for triples on a great circle, where solving
    for the circle center would leave an O(1e-12) offset.
    """
    a, b, c = _as_array(a), _as_array(b), _as_array(c)
    u, v, uu, vv, ww, wedge2 = _triangle_terms(a, b, c)
    longest = np.maximum(np.maximum(uu, vv), ww)
    collinear = 0.5 * np.sqrt(wedge2) < COLLINEAR_TOL * longest
    with np.errstate(divide='ignore', invalid='ignore'):
        rho = np.sqrt(uu * vv * ww) / (2.0 * np.sqrt(wedge2))
    delta = _plane_offset(np.broadcast_to(a, u.shape), u, v)
    with np.errstate(invalid='ignore'):
        radius = np.arctan2(rho, delta)
    return np.where(collinear, np.pi / 2.0, radius)


def _plane_offset(a, u, v):
    """Distance from the origin to the affine plane a + span(u, v), broadcast over leading axes"""
    basis, _ = np.linalg.qr(np.stack([u, v], axis=-1))
    coords = np.einsum('...ki,...k->...i', basis, a)
    residual = a - np.einsum('...ki,...i->...k', basis, coords)
    return np.sqrt(_dot(residual, residual))


def hopf_project(p):
    """Hopf map S³ → S², reading p as the complex pair (z₁, z₂)"""
    array = _as_array(p)
    x0, x1, x2, x3 = array[..., 0], array[..., 1], array[..., 2], array[..., 3]
    image = np.stack([
        x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3,
        2.0 * (x0 * x2 + x1 * x3),
        2.0 * (x1 * x2 - x0 * x3),
    ], axis=-1)
    if isinstance(p, UnitVector):
        return UnitVec3.normalized(image)
    return image


def hopf_fiber(q):
    """The great circle {(e^{it}z₁, e^{it}z₂)} over q ∈ S²"""
    q1, q2, q3 = _as_array(q)
    if q1 >= 0.0:
        z1 = complex(math.sqrt((1.0 + q1) / 2.0), 0.0)
        z2 = complex(q2, -q3) / (2.0 * z1.real)
    else:
        z2 = complex(math.sqrt((1.0 - q1) / 2.0), 0.0)
        z1 = complex(q2, q3) / (2.0 * z2.real)
    u = UnitVec4.normalized([z1.real, z1.imag, z2.real, z2.imag])
    a0, a1, a2, a3 = u.coords
    v = UnitVec4((-a1, a0, -a3, a2))
    return GreatCircle(u, v)


def point_to_great_circle_distance(x, g):
    """Closed form: angle between x and its projection onto the circle's plane"""
    x = _as_array(x)
    along = np.sqrt(_dot(x, g.u.array) ** 2 + _dot(x, g.v.array) ** 2)
    inner = x - (_dot(x, g.u.array)[..., None] * g.u.array + _dot(x, g.v.array)[..., None] * g.v.array)
    across = np.sqrt(_dot(inner, inner))
    result = np.arctan2(across, along)
    return float(result) if np.ndim(result) == 0 else result


def fiber_distance(f, g):
    """Distance between two great circles: coarse scan along f, then bounded refinement"""
    step = 2.0 * math.pi / FIBER_GRID
    grid = step * np.arange(FIBER_GRID)
    points = np.outer(np.cos(grid), f.u.array) + np.outer(np.sin(grid), f.v.array)
    values = point_to_great_circle_distance(points, g)
    best = int(np.argmin(values))

    result = minimize_scalar(
        lambda s: point_to_great_circle_distance(f.point(s), g),
        bounds=(grid[best] - step, grid[best] + step),
        method='bounded',
        options={'xatol': FIBER_XTOL},
    )
    return float(min(values[best], result.fun))


def point_to_circle_distance(x, circle):
    """Exact distance from point(s) x to a round circle: axial height h and radial offset ρ_r"""
    x = _as_array(x)
    normal = circle.normal.array
    offset = x - circle.center_array
    height = _dot(offset, normal)
    planar = offset - height[..., None] * normal
    radial = np.sqrt(_dot(planar, planar))
    result = np.sqrt((radial - circle.radius) ** 2 + height ** 2)
    return float(result) if np.ndim(result) == 0 else result


def closest_point_on_circle(x, circle):
    """Nearest point of the circle to x (any point when x is on the axis)"""
    x = _as_array(x)
    normal = circle.normal.array
    offset = x - circle.center_array
    planar = offset - np.dot(offset, normal) * normal
    length = np.linalg.norm(planar)
    if length < 1e-15:
        planar, length = circle.plane_basis[0], 1.0
    return circle.center_array + circle.radius * planar / length


def random_rotation(dim, rng):
    """Haar-random proper rotation of ℝ^dim"""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_unit_vectors(count, dim, rng):
    points = rng.standard_normal((count, dim))
    return points / np.linalg.norm(points, axis=1)[:, None]


def make_circle(center, normal, radius):
    return Circle3(tuple(center), UnitVec3.normalized(normal), float(radius))
