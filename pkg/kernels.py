"""Fundamental solution, s-mean kernel, Poisson kernel and the Green function of the ball."""
import logging
import math
from dataclasses import dataclass

from config import Config
from constants import ConstantsBundle
from errors import DiagonalSingularity, DomainError, RegimeError, SingularityError
from geometry import BallDomain, Point
from quadrature import integrate_exterior
from specfun import Regime, RegimeTag, boundary_integral, classify_regime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelContext:
    """Dimension, order, ball radius and the constants they fix."""

    n: int
    s: float
    r: float
    constants: ConstantsBundle
    tag: RegimeTag

    @classmethod
    def create(cls, n, s, r=1.0):
        tag = classify_regime(n, s)
        r = float(r)
        if not (math.isfinite(r) and r > 0):
            raise DomainError(f"Ball radius must be positive, got {r}")
        return cls(tag.n, tag.s, r, ConstantsBundle.create(tag.n, tag.s), tag)

    @property
    def regime(self):
        return self.tag.regime

    @property
    def domain(self):
        return BallDomain(self.n, self.r)

    def _check_point(self, p):
        if p.dim != self.n:
            raise DomainError(f"Point {p.coords} is not in R^{self.n}")


@dataclass(frozen=True)
class GreenEval:
    value: float
    r0: float
    diagonal: bool = False


def fundamental_solution(ctx, x):
    """a(n,s)|x|^(2s-n), or -(1/pi) log|x| when n = 2s."""
    ctx._check_point(x)
    radius = x.norm()
    if radius == 0.0:
        if ctx.regime is Regime.SUB:
            return 0.0
        raise SingularityError("The fundamental solution is singular at the origin")
    if ctx.regime is Regime.CRITICAL:
        return ctx.constants.a * math.log(radius)
    return ctx.constants.a * radius ** (2.0 * ctx.s - ctx.n)


def s_mean_kernel(ctx, y):
    """c(n,s) r^(2s) / ((|y|^2-r^2)^s |y|^n) outside the closed ball, 0 inside."""
    ctx._check_point(y)
    radius = y.norm()
    if radius <= ctx.r:
        return 0.0
    return ctx.constants.c * ctx.r ** (2.0 * ctx.s) / ((radius * radius - ctx.r * ctx.r) ** ctx.s * radius ** ctx.n)


def poisson_kernel(ctx, y, x):
    """c(n,s) ((r^2-|x|^2)/(|y|^2-r^2))^s |x-y|^(-n) for |x| < r < |y|."""
    ctx._check_point(y)
    ctx._check_point(x)
    r_sq = ctx.r * ctx.r
    inner = r_sq - x.norm_sq()
    outer = y.norm_sq() - r_sq
    if not inner > 0:
        raise DomainError(f"Poisson kernel needs |x| < r, got x={x.coords}")
    if not outer > 0:
        raise DomainError(f"Poisson kernel needs |y| > r, got y={y.coords}")
    return ctx.constants.c * (inner / outer) ** ctx.s * x.distance(y) ** (-ctx.n)


def r0(ctx, x, z):
    """(r^2-|x|^2)(r^2-|z|^2) / (r^2 |x-z|^2)."""
    ctx._check_point(x)
    ctx._check_point(z)
    dist_sq = (x - z).norm_sq()
    if dist_sq == 0.0:
        raise SingularityError(f"r0 is singular on the diagonal x = z = {x.coords}")
    r_sq = ctx.r * ctx.r
    return max(0.0, (r_sq - x.norm_sq()) * (r_sq - z.norm_sq()) / (r_sq * dist_sq))


def green_diagonal_limit(ctx, x):
    """Finite value of G(x, x) when n < 2s."""
    if ctx.regime is not Regime.SUB:
        raise RegimeError("The Green function has a finite diagonal only when n < 2s")
    s = ctx.s
    gap = ctx.r * ctx.r - x.norm_sq()
    if gap <= 0:
        return 0.0
    return ctx.constants.kappa / (s - 0.5) * gap ** (2.0 * s - 1.0) * ctx.r ** (1.0 - 2.0 * s)


def green_closed(ctx, x, z):
    """Closed-form Green function of the ball; zero when either point is outside."""
    ctx._check_point(x)
    ctx._check_point(z)
    r = ctx.r
    if x.norm() >= r or z.norm() >= r:
        return GreenEval(0.0, 0.0)

    dist = x.distance(z)
    if dist < Config.DIAGONAL_EPSILON * r:
        if ctx.regime is Regime.SUB:
            return GreenEval(green_diagonal_limit(ctx, x), math.inf, diagonal=True)
        raise DiagonalSingularity(f"Green function is infinite at x = z = {x.coords}")

    ratio = r0(ctx, x, z)
    if ctx.regime is Regime.CRITICAL:
        xs, zs = x[0], z[0]
        root = math.sqrt(max(0.0, (r * r - xs * xs) * (r * r - zs * zs)))
        value = ctx.constants.kappa * math.log((r * r - xs * zs + root) / (r * abs(zs - xs)))
    else:
        value = ctx.constants.kappa * dist ** (2.0 * ctx.s - ctx.n) * boundary_integral(ctx.n, ctx.s, ratio)
    if value < 0.0:
        logger.debug(f"Green function rounded to {value!r} at x={x.coords} z={z.coords}; clamped to 0")
        value = 0.0
    return GreenEval(value, ratio)


def green_definition(ctx, x, z, spec=None):
    """G(x, z) = Phi(x-z) - integral of Phi(z-y) P_r(y, x) over the exterior.

    The exterior integral is pulled back with inversion centre x, where the
    Poisson kernel becomes c |y*-x|^(2s-n) (r^2-|y*|^2)^(-s).
    """
    ctx._check_point(x)
    ctx._check_point(z)
    if x.norm() >= ctx.r or z.norm() >= ctx.r:
        raise DomainError("green_definition needs both points inside the ball")
    if x.distance(z) == 0.0:
        raise DiagonalSingularity(f"Green function is infinite at x = z = {x.coords}")
    spec = (spec or Config.quad_spec()).with_exponents(None, -ctx.s)
    # For n = 2s the pulled-back integrand is logarithmic at x; tanh-sinh takes the inner piece.
    split = 0.5 * (ctx.r - x.norm()) if ctx.regime is Regime.CRITICAL else None

    exterior = integrate_exterior(
        lambda y: fundamental_solution(ctx, z - y) * poisson_kernel(ctx, y, x),
        ctx.domain, spec, inversion_center=x, split_radius=split,
    ).checked()
    return fundamental_solution(ctx, x - z) - exterior.value
