import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import ClassVar, Optional

import numpy as np
from scipy.spatial.distance import cdist, pdist

import settings
from errors import DegenerateInputError, InputError


def _frozen_array(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


class Ambient(str, Enum):
    EUCLIDEAN = "r3"
    SPHERICAL = "s3"

    @property
    def dimension(self):
        return 3 if self is Ambient.EUCLIDEAN else 4


@dataclass(frozen=True)
class UnitVector:
    coords: tuple
    dimension: ClassVar[Optional[int]] = None

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, 'coords', coords)
        if self.dimension is not None and len(coords) != self.dimension:
            raise DegenerateInputError(f"expected {self.dimension} coordinates, got {len(coords)}")
        norm = math.sqrt(sum(c * c for c in coords))
        if abs(norm - 1.0) > settings.UNIT_NORM_TOL:
            raise DegenerateInputError(f"not a unit vector (norm {norm:.17g})")

    @classmethod
    def normalized(cls, values):
        array = np.asarray(values, dtype=float)
        norm = np.linalg.norm(array)
        if norm == 0.0:
            raise DegenerateInputError("cannot normalize the zero vector")
        return cls(tuple(array / norm))

    @property
    def array(self):
        return np.array(self.coords)

    def __neg__(self):
        return type(self)(tuple(-c for c in self.coords))

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class UnitVec3(UnitVector):
    """A point of S², also used as a direction in ℝ³"""
    dimension: ClassVar[Optional[int]] = 3


@dataclass(frozen=True)
class UnitVec4(UnitVector):
    """A point of S³"""
    dimension: ClassVar[Optional[int]] = 4


@dataclass(frozen=True)
class GreatCircle:
    """γ(t) = u·cos t + v·sin t"""
    u: UnitVec4
    v: UnitVec4

    def __post_init__(self):
        inner = float(np.dot(self.u.array, self.v.array))
        if abs(inner) > settings.UNIT_NORM_TOL:
            raise DegenerateInputError(f"great circle frame is not orthogonal (<u,v> = {inner:.3e})")

    def point(self, t):
        return self.u.array * math.cos(t) + self.v.array * math.sin(t)

    def sample(self, count):
        t = 2.0 * np.pi * np.arange(count) / count
        return np.outer(np.cos(t), self.u.array) + np.outer(np.sin(t), self.v.array)


@dataclass(frozen=True)
class Circle3:
    """A round circle in ℝ³, the core of a bialy"""
    center: tuple
    normal: UnitVec3
    radius: float

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        if len(center) != 3:
            raise DegenerateInputError("circle center must have 3 coordinates")
        object.__setattr__(self, 'center', center)
        if not self.radius > 0:
            raise DegenerateInputError(f"circle radius must be positive, got {self.radius}")

    @property
    def center_array(self):
        return np.array(self.center)

    @cached_property
    def plane_basis(self):
        """Orthonormal e1, e2 spanning the circle's plane"""
        n = self.normal.array
        helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = np.cross(n, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        return e1, e2

    def points(self, angles):
        angles = np.asarray(angles, dtype=float)
        e1, e2 = self.plane_basis
        return (self.center_array
                + self.radius * (np.multiply.outer(np.cos(angles), e1) + np.multiply.outer(np.sin(angles), e2)))

    def sample(self, count):
        return self.points(2.0 * np.pi * np.arange(count) / count)

    def translated(self, offset):
        return replace(self, center=tuple(self.center_array + np.asarray(offset, dtype=float)))

    def scaled(self, factor):
        return Circle3(tuple(self.center_array * factor), self.normal, self.radius * factor)


@dataclass(frozen=True, eq=False)
class DiscreteCurve:
    """Ordered samples of one closed curve component"""
    samples: np.ndarray
    ambient: Ambient = Ambient.EUCLIDEAN
    closed: bool = True

    def __post_init__(self):
        ambient = Ambient(self.ambient)
        object.__setattr__(self, 'ambient', ambient)
        samples = _frozen_array(self.samples)
        object.__setattr__(self, 'samples', samples)

        if samples.ndim != 2 or samples.shape[1] != ambient.dimension:
            raise DegenerateInputError(
                f"{ambient.value} curve samples must have shape (n, {ambient.dimension}), got {samples.shape}")
        if len(samples) < settings.MIN_CURVE_SAMPLES:
            raise DegenerateInputError(
                f"a curve needs at least {settings.MIN_CURVE_SAMPLES} samples, got {len(samples)}")
        if not np.all(np.isfinite(samples)):
            raise DegenerateInputError("curve samples must be finite")

        steps = np.linalg.norm(np.roll(samples, -1, axis=0) - samples, axis=1)
        if np.any(steps == 0.0):
            index = int(np.argmin(steps))
            raise DegenerateInputError(f"consecutive samples {index} and {(index + 1) % len(samples)} coincide")

        if ambient is Ambient.SPHERICAL:
            norms = np.linalg.norm(samples, axis=1)
            worst = float(np.max(np.abs(norms - 1.0)))
            if worst > settings.CURVE_NORM_TOL:
                raise DegenerateInputError(f"spherical samples must lie on S³ (worst norm error {worst:.3e})")

    def __len__(self):
        return len(self.samples)

    def scaled(self, factor):
        return DiscreteCurve(self.samples * factor, self.ambient)

    def transformed(self, rotation, offset=None):
        moved = self.samples @ np.asarray(rotation).T
        if offset is not None:
            moved = moved + np.asarray(offset)
        return DiscreteCurve(moved, self.ambient)

    def refined(self):
        """Insert a midpoint between each pair of samples (projected back to S³ for spherical curves)"""
        midpoints = 0.5 * (self.samples + np.roll(self.samples, -1, axis=0))
        if self.ambient is Ambient.SPHERICAL:
            midpoints /= np.linalg.norm(midpoints, axis=1)[:, None]
        merged = np.empty((2 * len(self.samples), self.samples.shape[1]))
        merged[0::2] = self.samples
        merged[1::2] = midpoints
        return DiscreteCurve(merged, self.ambient)


@dataclass(frozen=True, eq=False)
class DiscreteLink:
    components: tuple

    def __post_init__(self):
        components = tuple(self.components)
        object.__setattr__(self, 'components', components)
        if not components:
            raise DegenerateInputError("a link needs at least one component")
        ambients = {c.ambient for c in components}
        if len(ambients) != 1:
            raise DegenerateInputError("all link components must share one ambient space")
        for i in range(len(components)):
            for j in range(i + 1, len(components)):
                if float(np.min(cdist(components[i].samples, components[j].samples))) == 0.0:
                    raise DegenerateInputError(f"components {i} and {j} share a sample point")

    @classmethod
    def of(cls, *curves):
        return cls(tuple(curves))

    @property
    def ambient(self):
        return self.components[0].ambient

    @cached_property
    def points(self):
        return _frozen_array(np.concatenate([c.samples for c in self.components]))

    @cached_property
    def component_index(self):
        return _frozen_array(np.concatenate([np.full(len(c), i) for i, c in enumerate(self.components)]), dtype=int)

    @property
    def total_samples(self):
        return sum(len(c) for c in self.components)

    def scaled(self, factor):
        return DiscreteLink(tuple(c.scaled(factor) for c in self.components))

    def transformed(self, rotation, offset=None):
        return DiscreteLink(tuple(c.transformed(rotation, offset) for c in self.components))


@dataclass(frozen=True)
class ThicknessResult:
    value: float
    triple: tuple
    method: str


@dataclass(frozen=True, eq=False)
class S2Config:
    """n points on S², the centers of a disk packing"""
    points: np.ndarray

    def __post_init__(self):
        points = _frozen_array(self.points)
        if points.ndim == 1:
            points = _frozen_array(points.reshape(1, -1))
        object.__setattr__(self, 'points', points)
        if points.ndim != 2 or points.shape[1] != 3 or len(points) < 1:
            raise DegenerateInputError(f"an S² configuration needs shape (n>=1, 3), got {points.shape}")
        worst = float(np.max(np.abs(np.linalg.norm(points, axis=1) - 1.0)))
        if worst > settings.CURVE_NORM_TOL:
            raise DegenerateInputError(f"configuration points must lie on S² (worst norm error {worst:.3e})")
        if len(points) > 1 and float(np.min(pdist(points))) == 0.0:
            raise DegenerateInputError("configuration points must be pairwise distinct")

    @classmethod
    def normalized(cls, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(points / np.linalg.norm(points, axis=1)[:, None])

    @property
    def n(self):
        return len(self.points)

    def rotated(self, rotation):
        return S2Config(self.points @ np.asarray(rotation).T)


@dataclass(frozen=True)
class PackingSummary:
    n: int
    radius: float
    density: float
    achieved_pairs: tuple
    best_known_radius: Optional[float] = None
    best_known_density: Optional[float] = None


@dataclass(frozen=True)
class OptimizationResult:
    config: S2Config
    summary: PackingSummary
    converged: bool
    best_restart: int
    seed: int
    restarts: int
    iters: int


@dataclass(frozen=True, eq=False)
class HopfLink:
    base: S2Config
    fibers: tuple
    samples_per_fiber: int

    def __post_init__(self):
        object.__setattr__(self, 'fibers', tuple(self.fibers))
        if len(self.fibers) != self.base.n:
            raise DegenerateInputError("a Hopf link needs one fiber per base point")

    @cached_property
    def link(self):
        return DiscreteLink(tuple(
            DiscreteCurve(fiber.sample(self.samples_per_fiber), Ambient.SPHERICAL) for fiber in self.fibers))


@dataclass(frozen=True)
class HopfThickness:
    closed_form: float
    sampled: float
    tolerance: float

    @property
    def discrepancy(self):
        return abs(self.closed_form - self.sampled)

    @property
    def agree(self):
        return self.discrepancy <= self.tolerance


@dataclass(frozen=True)
class TorusKnotSpec:
    """(m, 2) torus knot on the Clifford torus of aspect a"""
    m: int
    aspect: float
    samples: int = 256

    def __post_init__(self):
        if self.m < 3 or self.m % 2 == 0:
            raise InputError(f"m must be odd and >= 3 for an (m,2) torus knot, got {self.m}")
        if not 0.0 < self.aspect < 1.0:
            raise InputError(f"aspect must lie in (0, 1), got {self.aspect}")
        if self.samples < settings.MIN_CURVE_SAMPLES:
            raise InputError(f"need at least {settings.MIN_CURVE_SAMPLES} samples, got {self.samples}")


@dataclass(frozen=True, eq=False)
class PackingSpec:
    """Periodic packing of ℝ³: lattice rows in `basis`, one tube per motif core and translate"""
    basis: np.ndarray
    motif: tuple
    tube_radius: float = 1.0
    certified: bool = False
    name: str = "custom"

    def __post_init__(self):
        basis = _frozen_array(self.basis)
        object.__setattr__(self, 'basis', basis)
        object.__setattr__(self, 'motif', tuple(self.motif))
        if basis.shape != (3, 3):
            raise DegenerateInputError(f"basis must be 3 vectors in ℝ³, got shape {basis.shape}")
        if abs(float(np.linalg.det(basis))) <= 1e-12:
            raise DegenerateInputError("basis vectors are linearly dependent")
        if not self.tube_radius >= 0:
            raise DegenerateInputError(f"tube radius must be nonnegative, got {self.tube_radius}")

    @property
    def volume(self):
        return abs(float(np.linalg.det(self.basis)))

    def with_certification(self, certified=True):
        return replace(self, certified=certified)


@dataclass(frozen=True)
class ContactPair:
    motif_a: int
    motif_b: int
    translate: tuple
    offset: tuple
    distance: float


@dataclass(frozen=True)
class CertificationReport:
    spec: PackingSpec
    certified: bool
    min_gap: float
    contacts: tuple
    violations: tuple
    pairs_checked: int
    cutoff: float

    def as_dict(self):
        def pair(p):
            return {'motif': [p.motif_a, p.motif_b], 'translate': list(p.translate),
                    'offset': [round(x, 12) for x in p.offset], 'distance': p.distance}
        return {
            'lattice': self.spec.name,
            'certified': self.certified,
            'min_gap': self.min_gap,
            'pairs_checked': self.pairs_checked,
            'cutoff': self.cutoff,
            'contacts': [pair(p) for p in self.contacts],
            'violations': [pair(p) for p in self.violations],
        }


@dataclass(frozen=True)
class DensityReport:
    analytic: float
    monte_carlo: float
    half_width: float
    std_error: float
    samples: int
    seed: int
    confidence: float = 0.99

    def agrees(self, sigmas=None):
        sigmas = settings.MC_SIGMAS if sigmas is None else sigmas
        return abs(self.analytic - self.monte_carlo) <= sigmas * self.std_error

    def as_dict(self):
        return {
            'analytic': self.analytic,
            'monte_carlo': self.monte_carlo,
            'half_width': self.half_width,
            'std_error': self.std_error,
            'confidence': self.confidence,
            'samples': self.samples,
            'seed': self.seed,
        }


@dataclass(frozen=True)
class RevolvedCell:
    """Meridian cell of one revolved torus; region vertices in (axial x, height y)"""
    row: int
    region: tuple
    disk_center_height: float

    def __post_init__(self):
        if self.row < 1:
            raise InputError(f"rows are numbered from 1, got {self.row}")


@dataclass(frozen=True)
class ReportRow:
    quantity: str
    reference_value: float
    computed: float
    tolerance: float
    status: str
    note: str = ""

    @property
    def delta(self):
        return abs(self.computed - self.reference_value)

    def as_dict(self):
        return {
            'quantity': self.quantity,
            'reference_value': self.reference_value,
            'computed': self.computed,
            'delta': self.delta,
            'tolerance': self.tolerance,
            'status': self.status,
            'note': self.note,
        }


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = field(default_factory=lambda: settings.DEFAULT_SEED)
    samples: int = field(default_factory=lambda: settings.DEFAULT_SAMPLES)
    tolerances: dict = field(default_factory=dict)
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    output_format: str = "table"

    def metadata(self):
        return {
            'command': self.command,
            'version': settings.VERSION,
            'seed': self.seed,
            'samples': self.samples,
            'tolerances': dict(self.tolerances),
            'input': self.input_path,
            'settings': settings.current_settings(),
        }
