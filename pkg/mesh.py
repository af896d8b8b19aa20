"""Triangle meshes of thick tubes for visual inspection: tori around round cores, tubes around sampled
curves in ℝ³, and tubes around S³ curves carried to ℝ³ by stereographic projection. Written as OBJ.
"""
import itertools
import logging
from dataclasses import dataclass

import numpy as np

import utils
from errors import DegenerateInputError, InputError
from geom_core import random_unit_vectors
from models import Ambient

DEFAULT_MAJOR = 64
DEFAULT_MINOR = 32
POLE_CANDIDATES = 256


@dataclass(frozen=True, eq=False)
class Mesh:
    name: str
    vertices: np.ndarray
    faces: np.ndarray

    @property
    def euler_characteristic(self):
        edges = set()
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                edges.add((min(u, v), max(u, v)))
        return len(self.vertices) - len(edges) + len(self.faces)


def _ring_faces(rings, ring_size):
    """Triangles joining consecutive rings cyclically in both directions"""
    faces = []
    for i in range(rings):
        ni = (i + 1) % rings
        for j in range(ring_size):
            nj = (j + 1) % ring_size
            a, b = i * ring_size + j, ni * ring_size + j
            c, d = ni * ring_size + nj, i * ring_size + nj
            faces += [(a, b, c), (a, c, d)]
    return np.array(faces, dtype=int)


def _check_resolution(major, minor):
    if major < 3 or minor < 3:
        raise InputError(f"mesh resolution must be at least 3×3, got {major}×{minor}")


def torus_mesh(core, tube_radius, major=DEFAULT_MAJOR, minor=DEFAULT_MINOR, name="torus"):
    """Tube of radius tube_radius around a round core circle"""
    _check_resolution(major, minor)
    if not 0.0 < tube_radius:
        raise InputError(f"tube radius must be positive, got {tube_radius}")
    e1, e2 = core.plane_basis
    normal = core.normal.array
    u = 2.0 * np.pi * np.arange(major) / major
    v = 2.0 * np.pi * np.arange(minor) / minor
    radial = np.outer(np.cos(u), e1) + np.outer(np.sin(u), e2)
    centers = core.center_array + core.radius * radial
    offsets = (np.cos(v)[None, :, None] * radial[:, None, :]
               + np.sin(v)[None, :, None] * normal[None, None, :])
    vertices = (centers[:, None, :] + tube_radius * offsets).reshape(-1, 3)
    return Mesh(name, vertices, _ring_faces(major, minor))


def _tangents(samples):
    tangents = np.roll(samples, -1, axis=0) - np.roll(samples, 1, axis=0)
    return tangents / np.linalg.norm(tangents, axis=1)[:, None]


def _transported_frame(tangents):
    """Normals carried along the curve by projection onto each new normal plane"""
    first = tangents[0]
    helper = np.eye(len(first))[int(np.argmin(np.abs(first)))]
    normal = helper - np.dot(helper, first) * first
    normals = []
    for t in tangents:
        normal = normal - np.dot(normal, t) * t
        length = np.linalg.norm(normal)
        if length < 1e-12:
            raise DegenerateInputError("curve frame collapsed; the curve turns back on itself")
        normal = normal / length
        normals.append(normal)
    return np.array(normals)


def curve_tube_mesh(curve, tube_radius, minor=DEFAULT_MINOR, name="tube"):
    """Tube around a closed Euclidean polygon"""
    if curve.ambient is not Ambient.EUCLIDEAN:
        raise InputError("curve_tube_mesh needs a curve in ℝ³; use spherical_tube_mesh for S³")
    _check_resolution(len(curve), minor)
    samples = curve.samples
    tangents = _tangents(samples)
    normals = _transported_frame(tangents)
    binormals = np.cross(tangents, normals)
    v = 2.0 * np.pi * np.arange(minor) / minor
    offsets = (np.cos(v)[None, :, None] * normals[:, None, :]
               + np.sin(v)[None, :, None] * binormals[:, None, :])
    vertices = (samples[:, None, :] + tube_radius * offsets).reshape(-1, 3)
    return Mesh(name, vertices, _ring_faces(len(samples), minor))


def spherical_tube_points(curve, tube_radius, minor=DEFAULT_MINOR):
    """Points of S³ at geodesic distance tube_radius from each sample, one ring per sample"""
    samples = curve.samples
    tangents = np.roll(samples, -1, axis=0) - np.roll(samples, 1, axis=0)
    tangents = tangents - np.sum(tangents * samples, axis=1)[:, None] * samples
    tangents = tangents / np.linalg.norm(tangents, axis=1)[:, None]

    rings = []
    for x, t in zip(samples, tangents):
        # orthonormal complement of span{x, t} in ℝ⁴
        q, _ = np.linalg.qr(np.column_stack([x, t, np.eye(4)]))
        n1, n2 = q[:, 2], q[:, 3]
        v = 2.0 * np.pi * np.arange(minor) / minor
        directions = np.outer(np.cos(v), n1) + np.outer(np.sin(v), n2)
        rings.append(np.cos(tube_radius) * x + np.sin(tube_radius) * directions)
    return np.array(rings)


def choose_pole(points, seed=0):
    """Point of S³ farthest (in the worst case) from the given points"""
    candidates = random_unit_vectors(POLE_CANDIDATES, 4, utils.rng_for(seed))
    closest = np.max(candidates @ points.reshape(-1, 4).T, axis=1)
    return candidates[int(np.argmin(closest))]


def stereographic(points, pole):
    """Projection from the pole onto the 3-space orthogonal to it"""
    q, _ = np.linalg.qr(np.column_stack([pole, np.eye(4)]))
    frame = q[:, 1:4]
    height = points @ pole
    if np.any(height >= 1.0 - 1e-12):
        raise DegenerateInputError("a point lies at the projection pole")
    return (points @ frame) / (1.0 - height)[..., None]


def spherical_tube_mesh(curve, tube_radius, pole, minor=DEFAULT_MINOR, name="tube"):
    if curve.ambient is not Ambient.SPHERICAL:
        raise InputError("spherical_tube_mesh needs a curve in S³")
    if not 0.0 < tube_radius < np.pi / 2:
        raise InputError(f"spherical tube radius must lie in (0, π/2), got {tube_radius}")
    _check_resolution(len(curve), minor)
    rings = spherical_tube_points(curve, tube_radius, minor)
    vertices = stereographic(rings.reshape(-1, 4), pole)
    return Mesh(name, vertices, _ring_faces(len(curve), minor))


def link_meshes(link, tube_radius, minor=DEFAULT_MINOR, seed=0):
    """One tube mesh per component; S³ links share a single projection pole"""
    if link.ambient is Ambient.EUCLIDEAN:
        return [curve_tube_mesh(c, tube_radius, minor, name=f"component_{i}")
                for i, c in enumerate(link.components)]
    rings = np.concatenate([spherical_tube_points(c, tube_radius, minor).reshape(-1, 4) for c in link.components])
    pole = choose_pole(rings, seed)
    return [spherical_tube_mesh(c, tube_radius, pole, minor, name=f"component_{i}")
            for i, c in enumerate(link.components)]


def lattice_block_meshes(spec, block=3, major=DEFAULT_MAJOR, minor=DEFAULT_MINOR):
    """Tori for every motif core in a block×block×block patch of the lattice"""
    if block < 1:
        raise InputError(f"block size must be positive, got {block}")
    meshes = []
    for n in itertools.product(range(block), repeat=3):
        offset = np.array(n) @ spec.basis
        for index, core in enumerate(spec.motif):
            label = "_".join(str(k) for k in n)
            meshes.append(torus_mesh(core.translated(offset), spec.tube_radius, major, minor,
                                     name=f"{spec.name}_{label}_{index}"))
    return meshes


def obj_text(meshes):
    lines = []
    base = 1
    for mesh in meshes:
        lines.append(f"o {mesh.name}")
        lines.extend(f"v {x:.9f} {y:.9f} {z:.9f}" for x, y, z in mesh.vertices)
        lines.extend(f"f {a + base} {b + base} {c + base}" for a, b, c in mesh.faces)
        base += len(mesh.vertices)
    return "\n".join(lines) + "\n"


def write_obj(meshes, path):
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(obj_text(meshes))
    logging.info(f"wrote {len(meshes)} tube meshes to {path}")
