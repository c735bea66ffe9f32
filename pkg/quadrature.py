"""Numerical integration engine.

One-dimensional backbone: Gauss-Jacobi p-refinement when endpoint exponents are
declared, tanh-sinh (double exponential) h-halving otherwise and on
semi-infinite ranges. Ball cubature runs the 1-D rules along rays from a polar
centre and refines a product rule over directions. Exterior domains are pulled
back into the ball through Kelvin inversion.
"""
import enum
import functools
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

import constants
from config import Config
from errors import BudgetExceeded, DomainError, NonFiniteSample
from geometry import Point, inversion_jacobian, kelvin_invert, ray_exit, sphere_crossings
from specfun import check_order

logger = logging.getLogger(__name__)


class Smoothness(enum.Enum):
    """Regularity a field declares; CONTINUOUS fields are smooth off their singular spheres."""

    CONTINUOUS = "continuous"
    HOLDER = "C^{2s+eps}"
    SMOOTH = "smooth"


_GJ_START = 8
_GJ_MAX = 512

_TS_TMAX = 6.5
_TS_MAX_LEVEL = 12
_TS_MIN_LEVEL = 3
# Semi-infinite nodes beyond this complement (z ~ 1e150) are dropped.
_TS_TINY = 1e-150
# Finite-range nodes closer than this to an endpoint are subnormal and dropped.
_TS_FLOOR = float(np.finfo(float).tiny)

_MAX_HALF_PERIODS = 2048

_SPHERE_START = 8
_MAX_SPHERE_LEVEL = {1: 0, 2: 7, 3: 3}

# Ray samples this close (relative) to either end of a ray are skipped.
_RAY_GUARD = 1e-14


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances, node budget and declared endpoint exponents (x-a)^left, (b-x)^right."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_nodes: int = 200_000
    left_exponent: Optional[float] = None
    right_exponent: Optional[float] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError(f"Quadrature tolerances must be positive, got {self.rel_tol}, {self.abs_tol}")
        if self.max_nodes < 16:
            raise DomainError(f"Quadrature node budget must be at least 16, got {self.max_nodes}")
        for name in ("left_exponent", "right_exponent"):
            value = getattr(self, name)
            if value is not None and not value > -1.0:
                raise DomainError(f"{name} must exceed -1, got {value}")

    @property
    def has_exponents(self):
        return self.left_exponent is not None or self.right_exponent is not None

    def with_exponents(self, left=None, right=None):
        return replace(self, left_exponent=left, right_exponent=right)

    def plain(self):
        return self.with_exponents()

    def tightened(self, factor):
        return replace(self, rel_tol=self.rel_tol / factor, abs_tol=self.abs_tol / factor)

    def tolerance(self, value):
        return max(self.rel_tol * abs(value), self.abs_tol)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    nodes_used: int
    converged: bool

    @classmethod
    def zero(cls):
        return cls(0.0, 0.0, 0, True)

    def checked(self):
        """Returns self, or raises BudgetExceeded when the result did not converge."""
        if not self.converged:
            raise BudgetExceeded(
                f"Quadrature did not reach tolerance: value={self.value!r}, "
                f"error estimate={self.error_estimate!r}, nodes={self.nodes_used}"
            )
        return self

    def scaled(self, factor):
        return QuadResult(factor * self.value, abs(factor) * self.error_estimate, self.nodes_used, self.converged)

    def __add__(self, other):
        return QuadResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.nodes_used + other.nodes_used,
            self.converged and other.converged,
        )

    def __sub__(self, other):
        return self + other.scaled(-1.0)


def _sample(f, x):
    value = float(f(x))
    if not math.isfinite(value):
        raise NonFiniteSample(f"Integrand returned {value} at {x!r}")
    return value


# --- one-dimensional rules -------------------------------------------------


@functools.lru_cache(maxsize=512)
def _jacobi_rule(m, left, right):
    """m-node rule on [0, 1] for the weight t^left (1-t)^right.

    Returns the node distances to 0 and to 1 (both kept accurate) and the weights.
    """
    x, w = roots_jacobi(m, right, left)
    lo = 0.5 * (1.0 + x)
    hi = 0.5 * (1.0 - x)
    w = w * 0.5 ** (1.0 + left + right)
    for arr in (lo, hi, w):
        arr.setflags(write=False)
    return lo, hi, w


def _gauss_jacobi(f, a, b, spec):
    left = spec.left_exponent or 0.0
    right = spec.right_exponent or 0.0
    width = b - a
    scale = width ** (1.0 + left + right)

    nodes = 0
    previous = None
    value, error = math.nan, math.inf
    m = _GJ_START
    while m <= _GJ_MAX and nodes + m <= spec.max_nodes:
        lo, hi, w = _jacobi_rule(m, left, right)
        samples = np.empty(m)
        for i in range(m):
            dl = width * lo[i]
            dr = width * hi[i]
            t = a + dl if dl <= dr else b - dr
            samples[i] = _sample(f, t) / (dl ** left * dr ** right)
        value = scale * float(np.sum(w * samples))
        nodes += m
        if previous is not None:
            error = abs(value - previous)
            logger.debug(f"Gauss-Jacobi m={m} on [{a}, {b}]: {value!r} (+/- {error:.3e})")
            if error <= spec.tolerance(value):
                return QuadResult(value, error, nodes, True)
        previous = value
        m *= 2

    logger.warning(f"Gauss-Jacobi on [{a}, {b}] stopped at {nodes} nodes, error estimate {error:.3e}")
    return QuadResult(value, error, nodes, False)


@functools.lru_cache(maxsize=None)
def _tanh_sinh_nodes(level):
    """New nodes of refinement `level` on [0, 1]: distances to 0 and to 1, and weights without h."""
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(-math.floor(_TS_TMAX), math.floor(_TS_TMAX) + 1, dtype=float)
    else:
        positive = h * np.arange(1, 2 * math.ceil(_TS_TMAX / h), 2, dtype=float)
        positive = positive[positive <= _TS_TMAX]
        t = np.concatenate([-positive[::-1], positive])
    u = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    frac = e / (1.0 + e)
    weight = 0.5 * (0.5 * math.pi * np.cosh(t)) * 4.0 * e / (1.0 + e) ** 2
    lo = np.where(t < 0, frac, 1.0 - frac)
    hi = np.where(t < 0, 1.0 - frac, frac)
    for arr in (lo, hi, weight):
        arr.setflags(write=False)
    return lo, hi, weight


def _tanh_sinh(f, a, b, spec):
    infinite = math.isinf(b)
    width = None if infinite else b - a

    level_sums = []
    nodes = 0
    previous = None
    value, error = math.nan, math.inf
    for level in range(_TS_MAX_LEVEL + 1):
        lo, hi, weight = _tanh_sinh_nodes(level)
        if nodes + len(weight) > spec.max_nodes:
            break
        contributions = np.zeros(len(weight))
        for i in range(len(weight)):
            if weight[i] == 0.0 or lo[i] == 0.0 or hi[i] == 0.0:
                continue
            if infinite:
                if hi[i] < _TS_TINY:
                    continue
                x = a + lo[i] / hi[i]
                jac = 1.0 / (hi[i] * hi[i])
            else:
                if width * min(lo[i], hi[i]) < _TS_FLOOR:
                    continue
                x = a + width * lo[i] if lo[i] <= hi[i] else b - width * hi[i]
                jac = width
            if x <= a or x >= b:
                continue
            contributions[i] = weight[i] * jac * _sample(f, x)
        level_sums.append(float(np.sum(contributions)))
        nodes += len(weight)
        value = 2.0 ** -level * float(np.sum(level_sums))
        if previous is not None:
            error = abs(value - previous)
            logger.debug(f"tanh-sinh level {level} on [{a}, {b}]: {value!r} (+/- {error:.3e})")
            if level >= _TS_MIN_LEVEL and error <= spec.tolerance(value):
                return QuadResult(value, error, nodes, True)
        previous = value

    logger.warning(f"tanh-sinh on [{a}, {b}] stopped at {nodes} nodes, error estimate {error:.3e}")
    return QuadResult(value, error, nodes, False)


def integrate_interval(f, a, b, spec=None):
    """Integrates f over [a, b]; b may be +inf.

    Declared exponents select Gauss-Jacobi on finite ranges; everything else
    (including semi-infinite ranges, mapped by z = a + tau/(1-tau)) uses tanh-sinh.
    """
    spec = spec or Config.quad_spec()
    a, b = float(a), float(b)
    if math.isnan(a) or math.isnan(b) or math.isinf(a):
        raise DomainError(f"Unsupported integration range [{a}, {b}]")
    if a == b:
        return QuadResult.zero()
    if a > b:
        raise DomainError(f"Integration range must satisfy a < b, got [{a}, {b}]")
    if math.isinf(b) or not spec.has_exponents:
        return _tanh_sinh(f, a, b, spec)
    return _gauss_jacobi(f, a, b, spec)


def _euler_average(partial_sums):
    row = np.array(partial_sums, dtype=float)
    while len(row) > 1:
        row = 0.5 * (row[:-1] + row[1:])
    return float(row[0])


def integrate_half_periods(f, start, half_period, spec=None):
    """Integrates an oscillatory f over [start, inf) piece by piece.

    The pieces [start + k*half_period, start + (k+1)*half_period] must alternate
    in sign; their partial sums are accelerated by repeated averaging.
    """
    spec = spec or Config.quad_spec()
    if not half_period > 0:
        raise DomainError(f"half_period must be positive, got {half_period}")
    piece_spec = spec.plain().tightened(10.0)

    partial_sums = []
    total = 0.0
    nodes = 0
    pieces_ok = True
    previous = None
    value, error = math.nan, math.inf
    target = 16
    while target <= _MAX_HALF_PERIODS:
        while len(partial_sums) < target:
            lower = start + len(partial_sums) * half_period
            piece = integrate_interval(f, lower, lower + half_period, piece_spec)
            nodes += piece.nodes_used
            pieces_ok = pieces_ok and piece.converged
            total += piece.value
            partial_sums.append(total)
        value = _euler_average(partial_sums)
        if previous is not None:
            error = abs(value - previous)
            if error <= spec.tolerance(value):
                return QuadResult(value, error, nodes, pieces_ok)
        previous = value
        target *= 2

    logger.warning(f"Half-period summation from {start} stopped after {len(partial_sums)} pieces")
    return QuadResult(value, error, nodes, False)


# --- cubature --------------------------------------------------------------


@functools.lru_cache(maxsize=64)
def sphere_rule(n, level):
    """Directions and weights on the unit sphere of R^n; the weights sum to its measure."""
    if n == 1:
        return (Point((1.0,)), Point((-1.0,))), np.array([1.0, 1.0])
    m = _SPHERE_START * 2 ** level
    if n == 2:
        phi = 2.0 * math.pi * (np.arange(m) + 0.5) / m
        directions = tuple(Point((math.cos(p), math.sin(p))) for p in phi)
        return directions, np.full(m, 2.0 * math.pi / m)
    if n == 3:
        mu, mu_weights = roots_legendre(m)
        m_phi = 2 * m
        phi = 2.0 * math.pi * (np.arange(m_phi) + 0.5) / m_phi
        directions = []
        weights = []
        for z, wz in zip(mu, mu_weights):
            ring = math.sqrt(max(0.0, 1.0 - z * z))
            for p in phi:
                directions.append(Point((ring * math.cos(p), ring * math.sin(p), float(z))))
                weights.append(wz * 2.0 * math.pi / m_phi)
        return tuple(directions), np.array(weights)
    raise DomainError(f"Cubature supports n <= {Config.MAX_CUBATURE_DIM}, got n={n}")


def _sphere_integral(n, ray, spec, label):
    """Integrates ray(direction) -> QuadResult over the unit sphere with level refinement."""
    previous = None
    nodes = 0
    value, error = math.nan, math.inf
    for level in range(_MAX_SPHERE_LEVEL[n] + 1):
        directions, weights = sphere_rule(n, level)
        results = [ray(omega) for omega in directions]
        value = float(np.sum(weights * np.array([r.value for r in results])))
        ray_error = float(np.sum(weights * np.array([r.error_estimate for r in results])))
        rays_ok = all(r.converged for r in results)
        nodes += sum(r.nodes_used for r in results)
        if n == 1:
            return QuadResult(value, ray_error, nodes, rays_ok and ray_error <= spec.tolerance(value))
        if previous is not None:
            error = abs(value - previous) + ray_error
            logger.debug(f"{label} sphere level {level}: {value!r} (+/- {error:.3e})")
            if rays_ok and error <= spec.tolerance(value):
                return QuadResult(value, error, nodes, True)
        previous = value

    logger.warning(f"{label} cubature stopped at level {_MAX_SPHERE_LEVEL[n]}, error estimate {error:.3e}")
    return QuadResult(value, error, nodes, False)


def _check_cubature_dim(n):
    if n > Config.MAX_CUBATURE_DIM:
        raise DomainError(f"Cubature supports n <= {Config.MAX_CUBATURE_DIM}, got n={n}")


def _ray_pieces(length, split_radius, breaks):
    points = [0.0]
    if split_radius is not None and 0.0 < split_radius < length:
        points.append(float(split_radius))
    points.extend(b for b in breaks if 0.0 < b < length)
    points.append(length)
    points = sorted(set(points))
    return list(zip(points[:-1], points[1:]))


def _ray_integral(f, origin, direction, length, n, spec, split_radius=None, breaks=()):
    """Integrates rho^(n-1) f(origin + rho*direction) over rho in (0, length)."""
    guard = _RAY_GUARD * length

    def radial(rho):
        if rho <= guard or length - rho <= guard:
            return 0.0
        return rho ** (n - 1) * f(origin + direction * rho)

    left = spec.left_exponent
    pieces = _ray_pieces(length, split_radius, breaks)
    total = QuadResult.zero()
    for k, (lower, upper) in enumerate(pieces):
        piece_left = left if k == 0 else None
        piece_right = spec.right_exponent if k == len(pieces) - 1 else None
        total = total + integrate_interval(radial, lower, upper, spec.with_exponents(piece_left, piece_right))
    return total


def integrate_ball(f, domain, spec=None, center=None, split_radius=None, breakpoints=None):
    """Integrates f over the ball `domain` (n <= 3) in ray-polar coordinates about `center`.

    spec.left_exponent is the exponent at rho = 0 of the radial integrand
    rho^(n-1) f(center + rho*omega) and spec.right_exponent its exponent at the
    sphere. With `split_radius` the left exponent applies to (0, split_radius)
    and the right one to the remainder.
    `breakpoints(direction)` may return extra ray parameters where f has kinks.
    """
    spec = spec or Config.quad_spec()
    n = domain.dim
    _check_cubature_dim(n)
    center = center if center is not None else Point.origin(n)
    if not domain.contains(center):
        raise DomainError(f"Polar centre {center.coords} must lie inside the ball")
    ray_spec = spec.tightened(4.0)

    def ray(direction):
        length = ray_exit(center, direction, domain.radius)
        breaks = breakpoints(direction) if breakpoints is not None else ()
        return _ray_integral(f, center, direction, length, n, ray_spec, split_radius, breaks)

    return _sphere_integral(n, ray, spec, "ball")


def _image_sphere_crossings(inversion_center, k, origin, direction, radius):
    """Positive rho with |K(origin + rho*direction)| = radius, K the inversion about inversion_center."""
    c = inversion_center
    e = origin - c
    q = c.norm_sq() - radius * radius
    qa = q
    qb = 2.0 * (q * e.dot(direction) - k * c.dot(direction))
    qc = q * e.norm_sq() - 2.0 * k * c.dot(e) + k * k
    if qa == 0.0:
        roots = (-qc / qb,) if qb != 0.0 else ()
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            return ()
        root = math.sqrt(disc)
        w = -0.5 * (qb + math.copysign(root, qb))
        roots = (w / qa, qc / w) if w != 0.0 else (0.0,)
    return tuple(sorted(t for t in roots if t > 0.0))


def integrate_exterior(f, domain, spec=None, inversion_center=None, polar_center=None, singular_radii=(),
                       split_radius=None, breakpoints=None):
    """Integrates f over the complement of the ball, pulled back by Kelvin inversion.

    With y = K(y*) about `inversion_center` the integral becomes the ball
    integral of f(K(y*)) ((r^2-|c|^2)/|y*-c|^2)^n. The exponents in `spec`
    describe the pulled-back integrand at `polar_center` (default: the
    inversion centre) and at the sphere. `singular_radii` are radii of
    origin-centred spheres across which f has kinks; `split_radius` and
    `breakpoints` (ray parameters in the pulled-back ball) are passed on to
    integrate_ball.
    """
    n = domain.dim
    _check_cubature_dim(n)
    r = domain.radius
    c = inversion_center if inversion_center is not None else Point.origin(n)
    if not domain.contains(c):
        raise DomainError(f"Inversion centre {c.coords} must lie inside the ball")
    p = polar_center if polar_center is not None else c
    k = r * r - c.norm_sq()

    def pulled_back(y_star):
        return f(kelvin_invert(c, r, y_star)) * inversion_jacobian(c, r, y_star)

    radii = tuple(R for R in singular_radii if R > r)
    extra = breakpoints
    ray_breaks = extra
    if radii:
        def ray_breaks(direction):
            breaks = list(extra(direction)) if extra is not None else []
            for R in radii:
                breaks.extend(_image_sphere_crossings(c, k, p, direction, R))
            return tuple(breaks)

    return integrate_ball(pulled_back, domain, spec, center=p, split_radius=split_radius, breakpoints=ray_breaks)


# --- fractional Laplacian --------------------------------------------------


def _field_radii(field):
    radii = list(field.singular_radii)
    if field.support_radius is not None:
        radii.append(field.support_radius)
    return sorted(set(radii))


def _ray_reach(field, origin, direction):
    """Where a ray leaves a compactly supported field's support for good; inf otherwise."""
    if field.support_radius is None:
        return math.inf
    crossings = sphere_crossings(origin, direction, field.support_radius)
    return crossings[-1] if crossings else 0.0


def _piecewise_ray(f, start, stop, breaks, spec):
    """Integrates f over (start, stop) split at `breaks`, stop possibly infinite."""
    points = [start] + sorted(b for b in breaks if start < b < stop) + [stop]
    total = QuadResult.zero()
    for lower, upper in zip(points[:-1], points[1:]):
        total = total + integrate_interval(f, lower, upper, spec)
    return total


def frac_laplacian_result(field, x, s, spec=None, inner_radius=None, curvature_bound=None):
    """Evaluates (-Delta)^s u(x) as a weighted second difference quotient.

    Within `inner_radius` the second difference 2u(x)-u(x+y)-u(x-y) is integrated
    along rays with the Gauss-Jacobi weight rho^(1-2s); beyond it the constant
    part is integrated in closed form and the rest along rays split where they
    cross the field's singular spheres. Continuous fields must name those
    spheres, and only smooth ones may size the inner radius from a curvature bound.
    """
    spec = spec or Config.quad_spec()
    n = x.dim
    _check_cubature_dim(n)
    n, s = check_order(n, s)
    if field.decay is None:
        raise DomainError(f"Field '{field.name}' declares no far-field decay")

    hint = field.smoothness_hint
    if hint is Smoothness.CONTINUOUS and not field.singular_radii:
        raise DomainError(f"Field '{field.name}' is only continuous and names no sphere off which it is smooth")
    radii = _field_radii(field)
    if inner_radius is None:
        if curvature_bound is None:
            raise DomainError("frac_laplacian_pointwise needs inner_radius or curvature_bound")
        if hint is Smoothness.HOLDER:
            raise DomainError(f"A curvature bound needs a C^2 field; '{field.name}' is only C^(2s+eps)")
        inner_radius = (spec.abs_tol / (4.0 * curvature_bound)) ** (1.0 / (2.0 - 2.0 * s))
    delta = float(inner_radius)
    if not delta > 0:
        raise DomainError(f"inner_radius must be positive, got {delta}")
    near = min((abs(x.norm() - R) for R in radii), default=math.inf)
    if delta >= near:
        logger.warning(f"inner_radius {delta} reaches a singular sphere of '{field.name}' ({near} away)")
    if curvature_bound is not None:
        taylor = constants.sphere_measure(n) * curvature_bound * delta ** (2.0 - 2.0 * s) / (2.0 - 2.0 * s)
        logger.debug(f"Taylor bound on the inner piece: {taylor:.3e}")

    u_x = field(x)
    ray_spec = spec.tightened(4.0)
    inner_spec = ray_spec.with_exponents(1.0 - 2.0 * s, None)
    outer_spec = ray_spec.plain()

    def second_difference(direction):
        def g(rho):
            return (2.0 * u_x - field(x + direction * rho) - field(x - direction * rho)) * rho ** (-1.0 - 2.0 * s)
        return integrate_interval(g, 0.0, delta, inner_spec)

    def far_field(direction):
        reach = _ray_reach(field, x, direction)
        if reach <= delta:
            return QuadResult.zero()
        breaks = []
        for R in radii:
            breaks.extend(sphere_crossings(x, direction, R))
        return _piecewise_ray(lambda t: field(x + direction * t) * t ** (-1.0 - 2.0 * s),
                              delta, reach, breaks, outer_spec)

    def ray(direction):
        return second_difference(direction) - far_field(direction).scaled(2.0)

    total = _sphere_integral(n, ray, spec, "fractional Laplacian")
    big_c = constants.big_c_const(n, s)
    closed = 2.0 * u_x * constants.sphere_measure(n) * delta ** (-2.0 * s) / (2.0 * s)
    result = QuadResult(total.value + closed, total.error_estimate, total.nodes_used, total.converged)
    return result.scaled(0.5 * big_c)


def frac_laplacian_pointwise(field, x, s, spec=None, inner_radius=None, curvature_bound=None):
    """(-Delta)^s u(x) as a number; raises BudgetExceeded when the cubature did not converge."""
    return frac_laplacian_result(field, x, s, spec, inner_radius, curvature_bound).checked().value


def integrate_s_mean(field, x, rho, s, spec=None):
    """Integral of ((|y|^2-rho^2)^(-s) |y|^(-n)) u(x-y) over |y| > rho, without the c rho^(2s) factor."""
    spec = spec or Config.quad_spec()
    n = x.dim
    _check_cubature_dim(n)
    n, s = check_order(n, s)
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if field.decay is None:
        raise DomainError(f"Field '{field.name}' declares no far-field decay")

    radii = _field_radii(field)
    ray_spec = spec.tightened(4.0)

    def weight(t):
        return ((t - rho) * (t + rho)) ** (-s) / t

    def ray(direction):
        back = -direction
        reach = _ray_reach(field, x, back)
        if reach <= rho:
            return QuadResult.zero()
        breaks = sorted(t for R in radii for t in sphere_crossings(x, back, R) if rho < t < reach)
        first = min(breaks[0] if breaks else math.inf, reach)
        head_end = rho + min(rho, 0.5 * (first - rho))
        head = integrate_interval(lambda t: weight(t) * field(x + back * t), rho, head_end,
                                  ray_spec.with_exponents(-s, None))
        tail = _piecewise_ray(lambda t: weight(t) * field(x + back * t), head_end, reach, breaks, ray_spec.plain())
        return head + tail

    return _sphere_integral(n, ray, spec, "s-mean")
