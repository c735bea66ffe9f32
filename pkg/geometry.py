"""Points, origin-centred balls, hyperspherical coordinates and Kelvin point inversion."""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import DomainError, SingularityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Point:
    """An n-dimensional coordinate vector."""

    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise DomainError("A point needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise DomainError(f"Point coordinates must be finite, got {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *values):
        return cls(tuple(values))

    @classmethod
    def origin(cls, n):
        return cls((0.0,) * n)

    @classmethod
    def basis(cls, n, i=0, length=1.0):
        """length times the i-th unit vector of R^n."""
        if not 0 <= i < n:
            raise DomainError(f"Basis index {i} out of range for dimension {n}")
        coords = [0.0] * n
        coords[i] = length
        return cls(tuple(coords))

    @property
    def dim(self):
        return len(self.coords)

    def to_array(self):
        return np.array(self.coords)

    def norm_sq(self):
        return sum(c * c for c in self.coords)

    def norm(self):
        return math.sqrt(self.norm_sq())

    def dot(self, other):
        self._check_dim(other)
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def distance(self, other):
        return (self - other).norm()

    def _check_dim(self, other):
        if other.dim != self.dim:
            raise DomainError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check_dim(other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check_dim(other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, factor):
        return Point(tuple(factor * c for c in self.coords))

    __rmul__ = __mul__

    def __neg__(self):
        return Point(tuple(-c for c in self.coords))

    def __getitem__(self, i):
        return self.coords[i]


@dataclass(frozen=True)
class BallDomain:
    """The ball of radius `radius` centred at the origin of R^dim."""

    dim: int
    radius: float = 1.0

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise DomainError(f"Ball dimension must be a positive integer, got {self.dim!r}")
        radius = float(self.radius)
        if not (math.isfinite(radius) and radius > 0):
            raise DomainError(f"Ball radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "radius", radius)

    def contains(self, p):
        return p.norm() < self.radius

    def distance_to_boundary(self, p):
        return self.radius - p.norm()


@dataclass(frozen=True)
class HypersphericalCoord:
    rho: float
    angles: Tuple[float, ...] = ()


def _check_angles(angles, n):
    if len(angles) != max(n - 1, 0):
        raise DomainError(f"Expected {max(n - 1, 0)} angles for n={n}, got {len(angles)}")
    for k, angle in enumerate(angles):
        upper = 2.0 * math.pi if k == len(angles) - 1 else math.pi
        if not 0.0 <= angle <= upper:
            raise DomainError(f"Angle {k} = {angle} outside [0, {upper}]")


def hyperspherical_to_cartesian(hc, n):
    """Maps (rho, theta, theta_1, ..., theta_{n-2}) to Cartesian coordinates.

    The first angle is measured from the last axis; the last angle turns in the
    (y_1, y_2) plane. For n = 1 the radius is signed and there are no angles.
    """
    rho = float(hc.rho)
    angles = tuple(float(a) for a in hc.angles)
    if n < 1:
        raise DomainError(f"Dimension must be positive, got {n}")
    if n == 1:
        _check_angles(angles, n)
        return Point((rho,))
    if rho < 0:
        raise DomainError(f"Radius must be nonnegative for n={n}, got {rho}")
    _check_angles(angles, n)

    coords = [0.0] * n
    sin_product = rho
    for k, angle in enumerate(angles):
        coords[n - 1 - k] = sin_product * math.cos(angle)
        sin_product *= math.sin(angle)
    coords[0] = sin_product
    return Point(tuple(coords))


def hyperspherical_jacobian(hc, n):
    """rho^(n-1) sin^(n-2) theta sin^(n-3) theta_1 ... sin theta_{n-3}."""
    value = abs(hc.rho) ** (n - 1)
    for k, angle in enumerate(hc.angles[: max(n - 2, 0)]):
        value *= math.sin(angle) ** (n - 2 - k)
    return value


def _check_center(x0, r):
    if not x0.norm() < r:
        raise DomainError(f"Inversion centre {x0.coords} must lie inside the ball of radius {r}")


def kelvin_invert(x0, r, y):
    """Inversion with centre x0 in the sphere of radius r: x0 - (r^2-|x0|^2)(y-x0)/|y-x0|^2."""
    _check_center(x0, r)
    d = y - x0
    dist_sq = d.norm_sq()
    if dist_sq == 0.0:
        raise SingularityError(f"Kelvin inversion is singular at its centre {x0.coords}")
    return x0 - d * ((r * r - x0.norm_sq()) / dist_sq)


def inversion_jacobian(x0, r, y):
    """Volume-element ratio |det DK|(y) = ((r^2-|x0|^2)/|y-x0|^2)^n."""
    _check_center(x0, r)
    dist_sq = (y - x0).norm_sq()
    if dist_sq == 0.0:
        raise SingularityError(f"Inversion Jacobian is singular at its centre {x0.coords}")
    return ((r * r - x0.norm_sq()) / dist_sq) ** y.dim


def distance_identity(x0, r, x, y):
    """Both sides of |y*-x*| = (r^2-|x0|^2)|y-x| / (|y-x0||x-x0|)."""
    lhs = kelvin_invert(x0, r, y).distance(kelvin_invert(x0, r, x))
    rhs = (r * r - x0.norm_sq()) * y.distance(x) / (y.distance(x0) * x.distance(x0))
    return lhs, rhs


def firsttr_sides(x0, r, y):
    """Both sides of |y-x0|^2 / ((r^2-|x0|^2)(r^2-|y|^2)) = 1/(|y*|^2-r^2), y* = K_x0(y)."""
    y_star = kelvin_invert(x0, r, y)
    gap = r * r - y.norm_sq()
    if gap == 0.0:
        raise SingularityError("Both sides are infinite for y on the sphere")
    lhs = (y - x0).norm_sq() / ((r * r - x0.norm_sq()) * gap)
    rhs = 1.0 / (y_star.norm_sq() - r * r)
    return lhs, rhs


def ray_exit(center, direction, radius):
    """Distance from `center` (inside the sphere) to the sphere of `radius` along a unit direction."""
    b = center.dot(direction)
    c = center.norm_sq() - radius * radius
    if c >= 0:
        raise DomainError(f"Ray start {center.coords} is not inside the sphere of radius {radius}")
    # Root of t^2 + 2bt + c = 0 written without cancellation.
    root = math.sqrt(b * b - c)
    return -c / (b + root) if b >= 0 else root - b


def sphere_crossings(origin, direction, radius):
    """Sorted positive ray parameters where origin + t*direction meets |y| = radius."""
    b = origin.dot(direction)
    c = origin.norm_sq() - radius * radius
    disc = b * b - c
    if disc < 0:
        return ()
    root = math.sqrt(disc)
    q = -(b + math.copysign(root, b)) if b != 0 else root
    candidates = {q, c / q} if q != 0 else {0.0}
    return tuple(sorted(t for t in candidates if t > 0))
