"""Registry of closed-form and integral identities checked by `fraclap verify`.

Each identity expands into cases; a case is a parameter label plus a callable
returning (lhs, rhs). Cases are independent, so the runner may evaluate them
on a worker pool while keeping their order.
"""
import functools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from config import Config
from constants import (big_c_const, big_c_quadrature, c_const, dydares_constant, k_const,
                       sphere_measure)
from errors import DiagonalSingularity, DomainError, FracLapError
from geometry import (Point, distance_identity, firsttr_sides, inversion_jacobian, kelvin_invert,
                      ray_exit)
from kernels import (KernelContext, fundamental_solution, green_closed, green_definition,
                     poisson_kernel, s_mean_kernel)
from quadrature import integrate_ball, integrate_exterior, integrate_half_periods, integrate_interval
from solver import dirichlet_solve, dydares_forcing, fundamental_field
from specfun import (Regime, beta, boundary_integral, classify_regime, gamma, hyp2f1, sine_moment,
                     wallis)

logger = logging.getLogger(__name__)

_SEED = 20240917
_NS = (1, 2, 3)
_SS = (0.25, 0.5, 0.75)
_RS = (1.0,)


@dataclass(frozen=True)
class Sample:
    """Optional restriction of the identity grids to one (n, s, r) and one point."""

    n: Optional[int] = None
    s: Optional[float] = None
    r: Optional[float] = None
    x: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class IdentityRow:
    name: str
    params: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    passed: bool

    @classmethod
    def compare(cls, name, params, lhs, rhs, tolerance):
        abs_err = abs(lhs - rhs)
        rel_err = abs_err / abs(rhs) if rhs != 0.0 else abs_err
        passed = math.isfinite(rel_err) and rel_err <= tolerance
        return cls(name, params, float(lhs), float(rhs), abs_err, rel_err, passed)

    def as_dict(self):
        return {
            "name": self.name,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class Case:
    identity: str
    params: str
    compute: Callable[[], Tuple[float, float]]
    tolerance: float

    def run(self):
        try:
            lhs, rhs = self.compute()
        except FracLapError as e:
            logger.warning(f"{self.identity} [{self.params}] could not be evaluated: {e}")
            return IdentityRow(self.identity, self.params, math.nan, math.nan, math.nan, math.nan, False)
        row = IdentityRow.compare(self.identity, self.params, lhs, rhs, self.tolerance)
        if not row.passed:
            logger.warning(f"{self.identity} [{self.params}] failed: lhs={lhs!r} rhs={rhs!r} rel={row.rel_err:.3e}")
        return row


@dataclass(frozen=True)
class Identity:
    name: str
    tolerance: float
    cases: Callable
    summary: str

    def expand(self, sample=None, tol=None):
        """The identity's cases for `sample`, judged against `tol` or the identity's own tolerance."""
        sample = sample or Sample()
        tolerance = self.tolerance if tol is None else float(tol)
        spec = _spec_for(self.tolerance)
        return [Case(self.name, params, compute, tolerance) for params, compute in self.cases(sample, spec)]

    def run(self, sample=None, tol=None):
        return [case.run() for case in self.expand(sample, tol)]


REGISTRY = {}


def identity(name, tolerance, summary):
    def register(cases):
        REGISTRY[name] = Identity(name, tolerance, cases, summary)
        return cases
    return register


def names():
    return list(REGISTRY)


def expand_cases(selected=None, sample=None, tol=None):
    selected = list(REGISTRY) if not selected else list(selected)
    unknown = [name for name in selected if name not in REGISTRY]
    if unknown:
        raise DomainError(f"Unknown identities: {', '.join(unknown)}")
    cases = []
    for name in selected:
        cases.extend(REGISTRY[name].expand(sample, tol))
    return cases


def run_identities(selected=None, sample=None, tol=None, mapper=map):
    """Evaluates the selected identities (all by default) and returns their rows in registry order."""
    cases = expand_cases(selected, sample, tol)
    logger.info(f"Checking {len(cases)} identity cases")
    rows = list(mapper(Case.run, cases))
    failed = sum(1 for row in rows if not row.passed)
    logger.info(f"{len(rows) - failed} of {len(rows)} identity cases passed")
    return rows


# --- helpers ---------------------------------------------------------------


def _spec_for(tolerance):
    return Config.quad_spec(rel_tol=max(1e-2 * tolerance, 1e-12), abs_tol=1e-13)


def _fmt(value):
    if isinstance(value, Point):
        return "(" + ",".join(f"{c:g}" for c in value.coords) + ")"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def _params(**values):
    return " ".join(f"{key}={_fmt(value)}" for key, value in values.items())


def _grid(sample, ns=_NS, ss=_SS, rs=_RS, regimes=None):
    ns = (sample.n,) if sample.n is not None else ns
    ss = (float(sample.s),) if sample.s is not None else ss
    rs = (float(sample.r),) if sample.r is not None else rs
    triples = []
    for n in ns:
        for s in ss:
            if regimes is not None and classify_regime(n, s, warn=False).regime not in regimes:
                continue
            for r in rs:
                triples.append((n, s, r))
    return triples


def _points(sample, n, r, fractions):
    if sample.x is not None:
        return [Point(sample.x)] if len(sample.x) == n else []
    return [Point.basis(n, 0, f * r) for f in fractions]


def _values(sample_value, defaults):
    return (sample_value,) if sample_value is not None else defaults


def _phi_layout(ctx, inversion_center, polar_center):
    """Left exponent, split radius and ray breaks for Phi-type data pulled back about polar_center.

    For n = 2s the pulled-back integrand is logarithmic both at the polar centre
    and at the inversion centre, so the rays are cut there and tanh-sinh takes
    the pieces.
    """
    if ctx.regime is not Regime.CRITICAL:
        return 2.0 * ctx.s - 1.0, None, None
    offset = inversion_center - polar_center

    def breaks(direction):
        t = offset.dot(direction)
        if t <= 0.0:
            return ()
        return (t, 0.5 * (t + ray_exit(polar_center, direction, ctx.r)))

    return None, 0.5 * (ctx.r - polar_center.norm()), breaks


# --- kernel normalizations -------------------------------------------------


def _ir_case(n, s, r, spec):
    ctx = KernelContext.create(n, s, r)
    result = integrate_exterior(lambda y: s_mean_kernel(ctx, y), ctx.domain, spec.with_exponents(2.0 * s - 1.0, -s))
    return result.value, 1.0


@identity("Ir", 1e-6, "the s-mean kernel integrates to 1 over the exterior of the ball")
def _ir_cases(sample, spec):
    for n, s, r in _grid(sample, rs=_values(sample.r, (1.0, 2.0))):
        yield _params(n=n, s=s, r=r), functools.partial(_ir_case, n, s, r, spec)


def _ip_case(n, s, r, x, spec):
    ctx = KernelContext.create(n, s, r)
    result = integrate_exterior(lambda y: poisson_kernel(ctx, y, x), ctx.domain,
                                spec.with_exponents(2.0 * s - 1.0, -s), inversion_center=x)
    return result.value, 1.0


@identity("Ip", 1e-6, "the Poisson kernel integrates to 1 over the exterior for every interior x")
def _ip_cases(sample, spec):
    for n, s, r in _grid(sample):
        for x in _points(sample, n, r, (0.0, 0.5)):
            yield _params(n=n, s=s, r=r, x=x), functools.partial(_ip_case, n, s, r, x, spec)


def _if_case(n, s, r, x, spec):
    c = c_const(n, s)

    def f(y):
        return c * (r * r - y.norm_sq()) ** (-s) * x.distance(y) ** (2.0 * s - n)

    ctx = KernelContext.create(n, s, r)
    result = integrate_ball(f, ctx.domain, spec.with_exponents(2.0 * s - 1.0, -s), center=x)
    return result.value, 1.0


@identity("If", 1e-6, "c(n,s) times the ball integral of (r^2-|y|^2)^(-s) |x-y|^(2s-n) is 1")
def _if_cases(sample, spec):
    for n, s, r in _grid(sample):
        for x in _points(sample, n, r, (0.0, 0.5)):
            yield _params(n=n, s=s, r=r, x=x), functools.partial(_if_case, n, s, r, x, spec)


def _ifu_case(n, s, r, x, spec):
    ctx = KernelContext.create(n, s, r)
    data = fundamental_field(ctx, center=x)
    origin = Point.origin(n)
    polar = kelvin_invert(origin, r, x)
    left, split, breaks = _phi_layout(ctx, origin, polar)
    result = integrate_exterior(
        lambda y: s_mean_kernel(ctx, y) * data(y),
        ctx.domain, spec.with_exponents(left, -s), inversion_center=origin, polar_center=polar,
        split_radius=split, breakpoints=breaks,
    )
    return result.value, fundamental_solution(ctx, x)


@identity("Ifu", 1e-5, "the s-mean kernel reproduces the fundamental solution outside the ball")
def _ifu_cases(sample, spec):
    for n, s, r in _grid(sample):
        for x in _points(sample, n, r, (1.5, 3.0)):
            if x.norm() <= r:
                continue
            yield _params(n=n, s=s, r=r, x=x), functools.partial(_ifu_case, n, s, r, x, spec)


def _ipu_case(n, s, r, x0, x, spec):
    ctx = KernelContext.create(n, s, r)
    data = fundamental_field(ctx, center=x)
    polar = kelvin_invert(x0, r, x)
    left, split, breaks = _phi_layout(ctx, x0, polar)
    result = integrate_exterior(
        lambda y: poisson_kernel(ctx, y, x0) * data(y),
        ctx.domain, spec.with_exponents(left, -s), inversion_center=x0, polar_center=polar,
        split_radius=split, breakpoints=breaks,
    )
    return result.value, fundamental_solution(ctx, x - x0)


@identity("Ipu", 1e-5, "the Poisson kernel reproduces Phi(x - x0) outside the ball")
def _ipu_cases(sample, spec):
    for n, s, r in _grid(sample):
        for x0 in _points(sample, n, r, (0.3,)):
            if x0.norm() >= r:
                continue
            for x in (Point.basis(n, 0, 1.5 * r), Point.basis(n, 0, -2.0 * r)):
                yield (_params(n=n, s=s, r=r, x0=x0, x=x),
                       functools.partial(_ipu_case, n, s, r, x0, x, spec))


# --- one-dimensional integrals ---------------------------------------------


def _logid_case(a, spec):
    if abs(a) <= 1.0:
        # cos t + a = -2 sin((t+t_a)/2) sin((t-t_a)/2) with cos t_a = -a
        t_a = math.acos(-a)

        def f(t):
            return (math.log(2.0) + math.log(abs(math.sin(0.5 * (t + t_a))))
                    + math.log(abs(math.sin(0.5 * (t - t_a)))))

        value = integrate_interval(f, 0.0, t_a, spec).value + integrate_interval(f, t_a, math.pi, spec).value
        return value, -math.pi * math.log(2.0)
    # v = -cos t removes the (1-v^2)^(-1/2) endpoint weight
    value = integrate_interval(lambda t: math.log(abs(math.cos(t) + a)), 0.0, math.pi, spec).value
    return value, math.pi * math.log(abs(a) + math.sqrt(a * a - 1.0)) - math.pi * math.log(2.0)


@identity("logid", 1e-8, "integral of log|v-a| (1-v^2)^(-1/2) over [-1, 1]")
def _logid_cases(sample, spec):
    for a in (0.0, 0.5, 1.0, 1.5, 3.0):
        yield _params(a=a), functools.partial(_logid_case, a, spec.plain())


def _prop1_case(n, tau, spec):
    def f(theta):
        return math.sin(theta) ** (n - 2) / (tau * tau - 2.0 * tau * math.cos(theta) + 1.0) ** (n / 2.0)

    value = integrate_interval(f, 0.0, math.pi, spec).value
    return value, wallis(n - 2) / (tau ** (n - 2) * (tau * tau - 1.0))


@identity("prop1", 1e-8, "angular integral of sin^(n-2) / |tau e - omega|^n for tau > 1")
def _prop1_cases(sample, spec):
    for n in _values(sample.n, (2, 3, 4)):
        if n < 2:
            continue
        for tau in (1.1, 2.0, 5.0):
            yield _params(n=n, tau=tau), functools.partial(_prop1_case, n, tau, spec.plain())


def _prop2_case(n):
    return math.pi * math.prod(wallis(k) for k in range(1, n - 1)), math.pi ** (n / 2.0) / gamma(n / 2.0)


@identity("prop2", 1e-12, "pi times the product of Wallis integrals is half the sphere measure")
def _prop2_cases(sample, spec):
    for n in _values(sample.n, tuple(range(2, 9))):
        if n >= 2:
            yield _params(n=n), functools.partial(_prop2_case, n)


def _uss_case(alpha, b, s, spec):
    def f(x):
        return (alpha - x) ** (s - 1.0) * x ** (-s) / (b + x)

    value = integrate_interval(f, 0.0, alpha, spec.with_exponents(-s, s - 1.0)).value
    return value, math.pi / math.sin(math.pi * s) * (alpha + b) ** (s - 1.0) * b ** (-s)


@identity("uss", 1e-8, "integral of (a-x)^(s-1) x^(-s) / (b+x) over [0, a]")
def _uss_cases(sample, spec):
    for alpha, b, s in ((1.0, 1.0, 0.3), (2.0, 0.5, 0.5), (0.5, 3.0, 0.7)):
        s = float(sample.s) if sample.s is not None else s
        yield _params(a=alpha, b=b, s=s), functools.partial(_uss_case, alpha, b, s, spec)


def _ctcomp_case(s, spec):
    def f(t):
        return t ** (2.0 * s - 1.0) * (math.sin(t) / t)

    return integrate_half_periods(f, 0.0, math.pi, spec).value, sine_moment(s)


@identity("ctcomp1111", 1e-7, "integral of t^(2s-2) sin t over (0, inf)")
def _ctcomp_cases(sample, spec):
    for s in _values(sample.s, (0.1, 0.25, 0.4, 0.5)):
        if 0.0 < s <= 0.5:
            yield _params(s=s), functools.partial(_ctcomp_case, s, spec)


def _beta_case(x, y, spec):
    value = integrate_interval(lambda t: t ** (x - 1.0) * (1.0 + t) ** (-x - y), 0.0, math.inf, spec).value
    return value, beta(x, y)


@identity("beta", 1e-8, "Beta function as an integral over (0, inf)")
def _beta_cases(sample, spec):
    for x, y in ((0.5, 0.5), (2.0, 3.0), (0.3, 1.7)):
        yield _params(x=x, y=y), functools.partial(_beta_case, x, y, spec.plain())


def _betappl_case(s, spec):
    value = integrate_interval(lambda z: z ** (-s) / (z + 1.0), 0.0, math.inf, spec).value
    return value, math.pi / math.sin(math.pi * s)


@identity("betappl", 1e-8, "integral of z^(-s) / (z+1) over (0, inf) is pi / sin(pi s)")
def _betappl_cases(sample, spec):
    for s in _values(sample.s, (0.2, 0.5, 0.8)):
        yield _params(s=s), functools.partial(_betappl_case, s, spec.plain())


def _knsinfty_closed(n, s):
    return k_const(n, s) * boundary_integral(n, s, math.inf), 1.0


def _knsinfty_quadrature(n, s, spec):
    def f(tau):
        return tau ** (n - 2.0 * s - 1.0) * ((1.0 - tau) * (1.0 + tau)) ** (s - 1.0)

    result = integrate_interval(f, 0.0, 1.0, spec.with_exponents(n - 2.0 * s - 1.0, s - 1.0))
    return 2.0 * k_const(n, s) * result.value, 1.0


@identity("knsinfty", 1e-8, "k(n,s) normalizes the boundary integral at infinity")
def _knsinfty_cases(sample, spec):
    pairs = ((1, 0.25), (2, 0.4), (3, 0.3), (3, 0.7), (2, 0.9))
    if sample.n is not None or sample.s is not None:
        pairs = [(n, s) for n, s, _ in _grid(sample, ss=(0.25, 0.4, 0.7), regimes=(Regime.SUPER,))]
    for n, s in pairs:
        yield _params(n=n, s=s, route="closed"), functools.partial(_knsinfty_closed, n, s)
        yield _params(n=n, s=s, route="quadrature"), functools.partial(_knsinfty_quadrature, n, s, spec)


def _cn2s_case(spec):
    def f(y):
        return math.log((1.0 + math.sqrt((1.0 - y) * (1.0 + y))) / y)

    return 2.0 * integrate_interval(f, 0.0, 1.0, spec).value, math.pi


@identity("cn2s", 1e-9, "integral of log((1+sqrt(1-y^2))/|y|) over [-1, 1] is pi")
def _cn2s_cases(sample, spec):
    yield _params(), functools.partial(_cn2s_case, spec.plain())


# --- special functions -----------------------------------------------------


_GAMMA_S = (0.1, 0.3, 0.45, 0.7, 0.9)


@identity("gam1", 1e-12, "Gamma(1/2-s) Gamma(1/2+s) = pi / cos(pi s)")
def _gam1_cases(sample, spec):
    for s in _values(sample.s, _GAMMA_S):
        yield _params(s=s), functools.partial(
            lambda s: (gamma(0.5 - s) * gamma(0.5 + s), math.pi / math.cos(math.pi * s)), s)


@identity("gam2", 1e-12, "Gamma(1/2+x) / Gamma(2x) = sqrt(pi) 2^(1-2x) / Gamma(x)")
def _gam2_cases(sample, spec):
    for x in (0.1, 0.3, 0.75, 1.6, 3.2, 7.5):
        yield _params(x=x), functools.partial(
            lambda x: (gamma(0.5 + x) / gamma(2.0 * x), math.sqrt(math.pi) * 2.0 ** (1.0 - 2.0 * x) / gamma(x)), x)


@identity("gam3", 1e-12, "Gamma(s) Gamma(1-s) = pi / sin(pi s)")
def _gam3_cases(sample, spec):
    for s in _values(sample.s, _GAMMA_S):
        yield _params(s=s), functools.partial(
            lambda s: (gamma(s) * gamma(1.0 - s), math.pi / math.sin(math.pi * s)), s)


@identity("gam4", 1e-12, "Gamma(1-s) = -s Gamma(-s)")
def _gam4_cases(sample, spec):
    for s in _values(sample.s, _GAMMA_S):
        yield _params(s=s), functools.partial(lambda s: (gamma(1.0 - s), -s * gamma(-s)), s)


@identity("hypelc1", 1e-9, "2F1(a, b; b; w) = (1-w)^(-a)")
def _hypelc1_cases(sample, spec):
    for a, b in ((0.3, 0.5), (1.7, 2.5), (-0.4, 1.2)):
        for w in (-0.9, -0.3, 0.2, 0.6, 0.95):
            yield _params(a=a, b=b, w=w), functools.partial(
                lambda a, b, w: (hyp2f1(a, b, b, w), (1.0 - w) ** (-a)), a, b, w)


@identity("hypelc2", 1e-9, "2F1(a, a+1/2; 1/2; w^2) = ((1+w)^(-2a) + (1-w)^(-2a)) / 2")
def _hypelc2_cases(sample, spec):
    for a in (0.15, 0.3, 0.7):
        for w in (0.1, 0.5, 0.8, 0.95):
            yield _params(a=a, w=w), functools.partial(
                lambda a, w: (hyp2f1(a, 0.5 + a, 0.5, w * w), 0.5 * ((1.0 + w) ** (-2.0 * a) + (1.0 - w) ** (-2.0 * a))),
                a, w)


_HYP_PARAMS = ((0.5, 0.3, 1.25), (1.5, 0.25, 2.1), (0.75, 1.2, 0.6))


def _linear_transform(form, a, b, c, w):
    direct = hyp2f1(a, b, c, w)
    if form == "hyp1":
        other = (1.0 - w) ** (c - a - b) * hyp2f1(c - a, c - b, c, w)
    elif form == "hyp2":
        other = (1.0 - w) ** (-a) * hyp2f1(a, c - b, c, w / (w - 1.0))
    else:
        other = (1.0 - w) ** (-b) * hyp2f1(b, c - a, c, w / (w - 1.0))
    return other, direct


@identity("hyp123", 1e-9, "2F1 agrees with its Euler and Pfaff transformations")
def _hyp123_cases(sample, spec):
    for a, b, c in _HYP_PARAMS:
        for w in (-0.7, 0.3, 0.8):
            for form in ("hyp1", "hyp2", "hyp3"):
                yield (_params(form=form, a=a, b=b, c=c, w=w),
                       functools.partial(_linear_transform, form, a, b, c, w))


def _direct_series(a, b, c, w):
    term, total = 1.0, 1.0
    for k in range(20000):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * w
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
    return total


@identity("hyp4", 1e-9, "the 1-w connection formula agrees with the Gauss series on (1/2, 1)")
def _hyp4_cases(sample, spec):
    for a, b, c in _HYP_PARAMS:
        for w in (0.6, 0.75, 0.9):
            yield _params(a=a, b=b, c=c, w=w), functools.partial(
                lambda a, b, c, w: (hyp2f1(a, b, c, w), _direct_series(a, b, c, w)), a, b, c, w)


# --- Kelvin inversion ------------------------------------------------------


def _random_point(rng, n, low, high):
    direction = rng.normal(size=n)
    direction /= np.linalg.norm(direction)
    return Point(tuple(rng.uniform(low, high) * direction))


def _inversion_samples(sample, count=4):
    """Deterministic (n, r, index, x0, x, y) samples with |x0| < r."""
    rng = np.random.default_rng(_SEED)
    for n in _values(sample.n, _NS):
        for r in _values(sample.r, (1.0, 2.5)):
            for index in range(count):
                x0 = _random_point(rng, n, 0.0, 0.8 * r)
                x = _random_point(rng, n, 0.1 * r, 3.0 * r)
                y = _random_point(rng, n, 0.1 * r, 3.0 * r)
                yield n, r, index, x0, x, y


@identity("firsttr", 1e-10, "|y-x0|^2 / ((r^2-|x0|^2)(r^2-|y|^2)) = 1 / (|y*|^2 - r^2)")
def _firsttr_cases(sample, spec):
    for n, r, index, x0, _, y in _inversion_samples(sample):
        if abs(y.norm() - r) < 1e-3 * r:
            continue
        yield _params(n=n, r=r, sample=index), functools.partial(firsttr_sides, x0, r, y)


@identity("sectr", 1e-10, "|y*-x*| = (r^2-|x0|^2)|y-x| / (|y-x0||x-x0|)")
def _sectr_cases(sample, spec):
    for n, r, index, x0, x, y in _inversion_samples(sample):
        yield _params(n=n, r=r, sample=index), functools.partial(distance_identity, x0, r, x, y)


def _dxtr_case(x0, r, y):
    n = y.dim
    step = 1e-6 * y.distance(x0)
    columns = []
    for i in range(n):
        e = Point.basis(n, i, step)
        forward = kelvin_invert(x0, r, y + e).to_array()
        backward = kelvin_invert(x0, r, y - e).to_array()
        columns.append((forward - backward) / (2.0 * step))
    return abs(float(np.linalg.det(np.column_stack(columns)))), inversion_jacobian(x0, r, y)


@identity("dxtr", 1e-6, "the inversion Jacobian matches a finite-difference determinant")
def _dxtr_cases(sample, spec):
    for n, r, index, x0, _, y in _inversion_samples(sample):
        yield _params(n=n, r=r, sample=index), functools.partial(_dxtr_case, x0, r, y)


# --- constants and the flagship solution -----------------------------------


@identity("GCNS", 1e-6, "closed-form C(n,s) against its defining integral")
def _gcns_cases(sample, spec):
    for n in _values(sample.n, _NS):
        for s in _values(sample.s, (0.1, 0.3, 0.5, 0.7, 0.9)):
            yield _params(n=n, s=s), functools.partial(
                lambda n, s: (big_c_quadrature(n, s, spec), big_c_const(n, s)), n, s)


def _constant_fubini(n, s, spec):
    """Boundary integral at x = (1-rho^2)/rho^2 against rho^(2s-1), split at x = 1."""
    tag = classify_regime(n, s, warn=False)
    edge = math.sqrt(0.5)
    if tag.regime is Regime.CRITICAL:
        # 2 asinh(sqrt(x)) = 2 log(1 + sqrt(1-rho^2)) - 2 log(rho); the log term is integrated exactly
        head = 2.0 * edge * (1.0 - math.log(edge))

        def inner(rho):
            return 2.0 * math.log1p(math.sqrt((1.0 - rho) * (1.0 + rho)))
    else:
        # for x > 1 the boundary integral is total - rho^(2p)/p F(p, 1-s; p+1; rho^2)
        p = n / 2.0 - s
        if tag.regime is Regime.SUPER:
            total = beta(s, p)
        else:
            total = boundary_integral(n, s, 1.0) + 0.5 ** p / p * hyp2f1(p, 1.0 - s, p + 1.0, 0.5)
        head = total * edge ** (2.0 * s) / (2.0 * s)

        def inner(rho):
            return -rho ** (n - 1) / p * hyp2f1(p, 1.0 - s, p + 1.0, rho * rho)

    def outer(rho):
        return rho ** (2.0 * s - 1.0) * boundary_integral(n, s, (1.0 - rho) * (1.0 + rho) / (rho * rho))

    body = integrate_interval(inner, 0.0, edge, spec.with_exponents(0.0, 0.0)).checked()
    rim = integrate_interval(outer, edge, 1.0, spec.with_exponents(0.0, s)).checked()
    value = sphere_measure(n) * (head + body.value + rim.value)
    return value, sphere_measure(n) / (2.0 * s) * beta(s, n / 2.0)


def _constant_chain(n, s, spec):
    ctx = KernelContext.create(n, s)
    origin = Point.origin(n)
    kappa = ctx.constants.kappa

    # rho^(n-1) G(0, rho e) minus its non-smooth part at rho = 0, which is integrated exactly
    if ctx.regime is Regime.SUPER:
        scale = kappa * beta(s, n / 2.0 - s)
        head = scale / (2.0 * s)

        def leading(rho):
            return scale * rho ** (2.0 * s - 1.0)
    elif ctx.regime is Regime.CRITICAL:
        head = kappa

        def leading(rho):
            return -kappa * math.log(rho)
    else:
        head = 0.0

        def leading(rho):
            return 0.0

    def f(rho):
        try:
            green = green_closed(ctx, origin, Point.basis(n, 0, rho)).value
        except DiagonalSingularity:
            # the bounded remainder on the diagonal threshold is dropped
            return 0.0
        return rho ** (n - 1) * green - leading(rho)

    remainder = integrate_interval(f, 0.0, 1.0, spec.plain()).checked()
    green_mass = sphere_measure(n) * (head + remainder.value)
    return dydares_constant(n, s) * green_mass, 1.0


@identity("constant", 1e-8, "mass of the Green function at the centre of the unit ball")
def _constant_cases(sample, spec):
    for n, s, _ in _grid(Sample(n=sample.n, s=sample.s)):
        yield _params(n=n, s=s, route="fubini"), functools.partial(_constant_fubini, n, s, spec)
        yield _params(n=n, s=s, route="chain"), functools.partial(_constant_chain, n, s, spec)


_GREEN_PAIRS = ((1, 0.5), (1, 0.75), (3, 0.5), (2, 0.4))


def _greendefn_case(n, s, r, x, z, spec):
    ctx = KernelContext.create(n, s, r)
    return green_definition(ctx, x, z, spec), green_closed(ctx, x, z).value


@identity("greendefn", 1e-4, "defining integral of the Green function against its closed form")
def _greendefn_cases(sample, spec):
    pairs = _GREEN_PAIRS
    if sample.n is not None or sample.s is not None:
        pairs = [(n, s) for n, s, _ in _grid(sample, ns=(1, 2, 3), ss=(0.4, 0.5, 0.75))]
    offsets = ((0.0, 0.5), (0.2, -0.3), (-0.6, 0.1), (0.45, 0.7), (-0.25, -0.8))
    for n, s in pairs:
        r = float(sample.r) if sample.r is not None else 1.0
        for a, b in offsets:
            x, z = Point.basis(n, 0, a * r), Point.basis(n, 0, b * r)
            if n > 1:
                z = z + Point.basis(n, 1, 0.1 * r)
            yield _params(n=n, s=s, r=r, x=x, z=z), functools.partial(_greendefn_case, n, s, r, x, z, spec)


def _dydares_case(n, s, x, spec):
    ctx = KernelContext.create(n, s)
    return dirichlet_solve(ctx, dydares_forcing(n, s), x, spec), (1.0 - x.norm_sq()) ** s


@identity("dydares", 1e-4, "the Dirichlet solve of the dydares forcing is (1-|x|^2)^s")
def _dydares_cases(sample, spec):
    pairs = ((1, 0.5), (1, 0.75), (2, 0.5), (3, 0.3))
    if sample.n is not None or sample.s is not None:
        pairs = [(n, s) for n, s, _ in _grid(sample)]
    for n, s in pairs:
        fractions = (0.0, 0.3, 0.6, -0.9) if n == 1 else (0.0, 0.5)
        for x in _points(Sample(x=sample.x), n, 1.0, fractions):
            if x.norm() >= 1.0:
                continue
            yield _params(n=n, s=s, x=x), functools.partial(_dydares_case, n, s, x, spec)
