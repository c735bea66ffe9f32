"""Representation-formula solvers on the ball and the s-mean-value diagnostic."""
import enum
import logging
import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, List, Optional, Tuple

from config import Config
from constants import c_const, dydares_constant
from errors import DiagonalSingularity, DomainError
from geometry import Point
from kernels import fundamental_solution, green_closed, poisson_kernel
from quadrature import (QuadResult, Smoothness, frac_laplacian_result, integrate_ball, integrate_exterior,
                        integrate_s_mean)
from specfun import Regime, beta

logger = logging.getLogger(__name__)

# Diagonal neighbourhood of the Green convolution, as a fraction of dist(x, sphere).
_DIAGONAL_FRACTION = 0.1


class Decay(enum.Enum):
    COMPACT = "compact"
    POWER = "power"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class ScalarField:
    """A real function of a Point plus the hints the quadrature policy relies on.

    decay_power p states |u(y)| <= A |y|^(-p) for large |y| when decay is POWER
    (p may be negative for slowly growing data). singular_radii are radii of
    origin-centred spheres across which u is not smooth.
    """

    eval: Callable[[Point], float]
    smoothness_hint: Smoothness = Smoothness.SMOOTH
    support_radius: Optional[float] = None
    decay: Optional[Decay] = None
    decay_power: float = 0.0
    singular_radii: Tuple[float, ...] = ()
    name: str = "field"

    def __post_init__(self):
        if self.support_radius is not None and self.decay is None:
            object.__setattr__(self, "decay", Decay.COMPACT)
        object.__setattr__(self, "singular_radii", tuple(float(R) for R in self.singular_radii))

    def __call__(self, p):
        return float(self.eval(p))

    @property
    def support_hint(self):
        return self.support_radius


@dataclass
class SolveReport:
    values: List[Tuple[Point, float]] = dataclass_field(default_factory=list)
    residuals: Optional[List[Tuple[Point, float]]] = None
    quadrature_diagnostics: List[QuadResult] = dataclass_field(default_factory=list)

    def max_residual(self):
        if not self.residuals:
            return 0.0
        return max(abs(value) for _, value in self.residuals)


# --- preset fields ---------------------------------------------------------


def constant_field(value):
    value = float(value)
    return ScalarField(lambda p: value, decay=Decay.BOUNDED, name=f"constant({value!r})")


def dydares_forcing(n, s):
    """The constant forcing whose Dirichlet solution on B_1 is (1-|x|^2)^s."""
    field = constant_field(dydares_constant(n, s))
    return ScalarField(field.eval, decay=Decay.BOUNDED, name="dydares")


def dydares_solution(s):
    """(1-|x|^2)_+^s."""
    def value(p):
        gap = 1.0 - p.norm_sq()
        return gap ** s if gap > 0 else 0.0

    return ScalarField(value, Smoothness.CONTINUOUS, support_radius=1.0, singular_radii=(1.0,),
                       name="dydares_solution")


def gaussian_field(width=1.0, amplitude=1.0):
    def value(p):
        return amplitude * math.exp(-p.norm_sq() / (width * width))

    return ScalarField(value, decay=Decay.BOUNDED, name=f"gaussian({width!r})")


def polynomial_field(coefficients):
    """Radial polynomial sum_k c_k |x|^k (forcing data: no far-field decay)."""
    coefficients = tuple(float(c) for c in coefficients)

    def value(p):
        radius = p.norm()
        return sum(c * radius ** k for k, c in enumerate(coefficients))

    return ScalarField(value, name=f"polynomial{coefficients}")


def fundamental_field(ctx, center=None):
    """Phi(y - center) as exterior data."""
    center = center if center is not None else Point.origin(ctx.n)
    if ctx.regime is Regime.CRITICAL:
        decay, power = Decay.BOUNDED, 0.0
    else:
        decay, power = Decay.POWER, ctx.n - 2.0 * ctx.s
    radii = (0.0,) if center.norm() == 0.0 else ()
    return ScalarField(lambda y: fundamental_solution(ctx, y - center), Smoothness.SMOOTH,
                       decay=decay, decay_power=power, singular_radii=radii, name="fundamental")


def poisson_extended_field(ctx, g, spec=None):
    """The field equal to the Poisson extension of g inside B_r and to g outside."""
    return ScalarField(lambda p: poisson_extend(ctx, g, p, spec), Smoothness.CONTINUOUS,
                       support_radius=g.support_radius, decay=g.decay, decay_power=g.decay_power,
                       singular_radii=tuple(sorted(set(g.singular_radii) | {ctx.r})),
                       name=f"poisson({g.name})")


# --- solvers ---------------------------------------------------------------


def _field_radii(g):
    radii = set(g.singular_radii)
    if g.support_radius is not None:
        radii.add(g.support_radius)
    return tuple(sorted(radii))


def poisson_extend(ctx, g, x, spec=None):
    """u_g(x): integral of P_r(y, x) g(y) over the exterior, or g(x) outside the ball."""
    ctx._check_point(x)
    if x.norm() >= ctx.r:
        return g(x)
    if g.decay is None:
        raise DomainError(f"Boundary data '{g.name}' declares no far-field decay")

    spec = spec or Config.quad_spec()
    s = ctx.s
    split = None
    if g.decay is Decay.COMPACT:
        left = None
    elif ctx.regime is Regime.CRITICAL:
        left = None
        split = 0.5 * (ctx.r - x.norm())
    else:
        # P pulled back about x is c|y*-x|^(2s-n)(r^2-|y*|^2)^(-s); g adds |y*-x|^p near x.
        power = g.decay_power if g.decay is Decay.POWER else 0.0
        left = 2.0 * s - 1.0 + power
    result = integrate_exterior(
        lambda y: poisson_kernel(ctx, y, x) * g(y),
        ctx.domain, spec.with_exponents(left, -s), inversion_center=x,
        singular_radii=_field_radii(g), split_radius=split,
    )
    return result.checked().value


def dirichlet_solve(ctx, h, x, spec=None):
    """u(x) = integral of G(x, y) h(y) over B_r; 0 outside the ball."""
    ctx._check_point(x)
    if x.norm() >= ctx.r:
        return 0.0
    spec = spec or Config.quad_spec()
    n, s = ctx.n, ctx.s
    split = _DIAGONAL_FRACTION * (ctx.r - x.norm())
    leading, leading_exponent = _leading_green_term(ctx, x)

    def integrand(y):
        try:
            green = green_closed(ctx, x, y).value
        except DiagonalSingularity:
            return 0.0
        if leading is not None:
            green -= leading(y)
        return h(y) * green if green != 0.0 else 0.0

    if leading is None:
        result = integrate_ball(integrand, ctx.domain, spec.with_exponents(None, s), center=x, split_radius=split)
    else:
        # G - leading is bounded at y = x; the leading term goes in with its own ray weight.
        result = integrate_ball(integrand, ctx.domain, spec.with_exponents(0.0, None), center=x, split_radius=split)
        result = result + integrate_ball(lambda y: h(y) * leading(y), ctx.domain,
                                         spec.with_exponents(leading_exponent, None), center=x)
    logger.debug(f"Dirichlet solve at {x.coords}: {result.value!r} ({result.nodes_used} nodes, n={n})")
    return result.checked().value


def _leading_green_term(ctx, x):
    """The part of G(x, y) that blows up at y = x, with its radial exponent; (None, None) when n < 2s.

    kappa B(s, n/2-s) |x-y|^(2s-n) when n > 2s and -kappa log|x-y| when n = 2s.
    """
    kappa = ctx.constants.kappa
    if ctx.regime is Regime.SUB:
        return None, None
    if ctx.regime is Regime.CRITICAL:
        def logarithmic(y):
            dist = x.distance(y)
            return -kappa * math.log(dist) if dist > 0.0 else 0.0

        return logarithmic, None

    scale = kappa * beta(ctx.s, ctx.n / 2.0 - ctx.s)
    power = 2.0 * ctx.s - ctx.n

    def algebraic(y):
        dist = x.distance(y)
        return scale * dist ** power if dist > 0.0 else 0.0

    return algebraic, 2.0 * ctx.s - 1.0


def s_mean_average(ctx_like, u, x, rho, spec=None):
    """(A_rho * u)(x)."""
    n, s = x.dim, ctx_like.s
    result = integrate_s_mean(u, x, rho, s, spec).checked()
    return c_const(n, s) * rho ** (2.0 * s) * result.value


def residual_check(ctx, h, u_provider, check_points, spec=None, inner_radius=None):
    """|(-Delta)^s u - h| at each check point."""
    report = SolveReport(residuals=[])
    radii = _field_radii(u_provider)
    for x in check_points:
        ctx._check_point(x)
        if x.norm() >= ctx.r:
            raise DomainError(f"Check point {x.coords} is not inside the ball")
        delta = inner_radius
        if delta is None:
            gaps = [abs(x.norm() - R) for R in radii if R > 0] + [ctx.r - x.norm()]
            delta = 0.5 * min(gaps)
        result = frac_laplacian_result(u_provider, x, ctx.s, spec, inner_radius=delta)
        report.values.append((x, result.value))
        report.residuals.append((x, abs(result.value - h(x))))
        report.quadrature_diagnostics.append(result)
    logger.info(f"Residual check on {len(report.values)} points: max {report.max_residual():.3e}")
    return report


def boundary_discrepancy(ctx, g, y0, distances, spec=None):
    """|u_g(x_k) - g(y0)| for x_k approaching y0 on the sphere along its radius."""
    ctx._check_point(y0)
    radius = y0.norm()
    if radius == 0.0:
        raise DomainError("The approach point must lie on the sphere")
    target = g(y0)
    discrepancies = []
    for distance in distances:
        if not 0.0 < distance < ctx.r:
            raise DomainError(f"Approach distance must lie in (0, r), got {distance}")
        x = y0 * ((ctx.r - distance) / radius)
        discrepancies.append(abs(poisson_extend(ctx, g, x, spec) - target))
    return discrepancies
