"""Normalization constants a, c, k, kappa, C and the unit-sphere measure."""
import logging
import math
from dataclasses import dataclass

from config import Config
from errors import ConvergenceError, DomainError, RegimeError
from specfun import Regime, beta, check_order, classify_regime, gamma, wallis

logger = logging.getLogger(__name__)

_KAPPA_ROUTE_TOLERANCE = 1e-12


def a_const(n, s):
    """Constant of the fundamental solution."""
    tag = classify_regime(n, s)
    if tag.regime is Regime.CRITICAL:
        return -1.0 / math.pi
    if tag.regime is Regime.SUB:
        return 1.0 / (2.0 * math.cos(math.pi * s) * gamma(2.0 * s))
    return gamma(n / 2.0 - s) / (2.0 ** (2.0 * s) * math.pi ** (n / 2.0) * gamma(s))


def c_const(n, s):
    """Constant of the s-mean and Poisson kernels."""
    n, s = check_order(n, s)
    return gamma(n / 2.0) * math.sin(math.pi * s) / math.pi ** (n / 2.0 + 1.0)


def k_const(n, s):
    """Normalizer of the Green function integral."""
    tag = classify_regime(n, s)
    if tag.regime is Regime.CRITICAL:
        raise RegimeError("k(n, s) is not defined for n = 2s")
    if tag.regime is Regime.SUB:
        return (c_const(1, s) * gamma(0.5) * gamma(-s) * gamma(s + 1.0)
                / (gamma(0.5 - s) * gamma(s)))
    return gamma(n / 2.0) / (gamma(n / 2.0 - s) * gamma(s))


def kappa_const(n, s):
    """Prefactor of the closed-form Green function."""
    tag = classify_regime(n, s)
    if tag.regime is Regime.CRITICAL:
        return 1.0 / math.pi
    return gamma(n / 2.0) / (2.0 ** (2.0 * s) * math.pi ** (n / 2.0) * gamma(s) ** 2)


def big_c_const(n, s):
    """Constant in front of the singular integral defining (-Delta)^s."""
    n, s = check_order(n, s)
    return 2.0 ** (2.0 * s) * s * gamma(n / 2.0 + s) / (math.pi ** (n / 2.0) * gamma(1.0 - s))


def sphere_measure(n):
    """Measure of the unit sphere in R^n: 2 pi^(n/2) / Gamma(n/2)."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"Dimension n must be a positive integer, got {n!r}")
    return 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)


def sphere_measure_product(n):
    """The same measure as 2 pi times the product of wallis(k), k = 1..n-2."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"Dimension n must be a positive integer, got {n!r}")
    if n == 1:
        return 2.0
    value = 2.0 * math.pi
    for k in range(1, n - 1):
        value *= wallis(k)
    return value


def dydares_constant(n, s):
    """(-Delta)^s of (1-|x|^2)_+^s inside the unit ball."""
    return big_c_const(n, s) * sphere_measure(n) / 2.0 * beta(s, 1.0 - s)


@dataclass(frozen=True)
class ConstantsBundle:
    n: int
    s: float
    a: float
    c: float
    k: float
    kappa: float
    big_c: float
    omega_n: float

    @classmethod
    def create(cls, n, s):
        tag = classify_regime(n, s)
        n, s = tag.n, tag.s
        a = a_const(n, s)
        kappa = kappa_const(n, s)
        k = math.nan if tag.regime is Regime.CRITICAL else k_const(n, s)

        if tag.regime is Regime.SUB:
            # Two independent routes to kappa(1, s); a sign slip in Gamma(-s) shows up here.
            via_ak = -a * k
            tolerance = _KAPPA_ROUTE_TOLERANCE
            if tag.near_critical:
                tolerance *= Config.CONDITIONING_BAND / abs(s - 0.5)
            if abs(via_ak - kappa) > tolerance * abs(kappa):
                raise ConvergenceError(f"kappa(1, {s}) routes disagree: -a*k={via_ak!r}, closed form={kappa!r}")

        return cls(n, s, a, c_const(n, s), k, kappa, big_c_const(n, s), sphere_measure(n))


def bundle(n, s):
    return ConstantsBundle.create(n, s)


def _sin_squared_half_over_square(u):
    # (1 - cos u)/u^2 written without cancellation near u = 0
    if u == 0.0:
        return 0.5
    half = math.sin(0.5 * u)
    return 2.0 * half * half / (u * u)


def big_c_quadrature(n, s, spec=None):
    """C(n, s) from its defining integral: 1 / (radial factor * angular factor).

    The radial factor is the integral of (1 - cos u) u^(-1-2s) over (0, inf):
    Gauss-Jacobi on (0, pi/2], the non-oscillating tail in closed form and the
    cosine tail by half periods. The angular factor integrates |omega_1|^(2s)
    over the unit sphere.
    """
    from quadrature import integrate_half_periods, integrate_interval

    n, s = check_order(n, s)
    if n > Config.MAX_CUBATURE_DIM:
        raise DomainError(f"big_c_quadrature supports n <= {Config.MAX_CUBATURE_DIM}, got n={n}")
    spec = spec or Config.quad_spec()
    edge = 0.5 * math.pi

    near = integrate_interval(
        lambda u: _sin_squared_half_over_square(u) * u ** (1.0 - 2.0 * s),
        0.0, edge, spec.with_exponents(1.0 - 2.0 * s, None),
    )
    cosine_tail = integrate_half_periods(lambda u: math.cos(u) * u ** (-1.0 - 2.0 * s), edge, math.pi, spec)
    radial = near.value + edge ** (-2.0 * s) / (2.0 * s) - cosine_tail.value
    results = [near, cosine_tail]

    if n == 1:
        angular = 2.0
    else:
        polar = integrate_interval(
            lambda theta: math.cos(theta) ** (2.0 * s) * math.sin(theta) ** (n - 2),
            0.0, edge, spec.with_exponents(None, 2.0 * s),
        )
        results.append(polar)
        angular = sphere_measure_product(n - 1) * 2.0 * polar.value

    for result in results:
        if not result.converged:
            raise ConvergenceError(f"C({n}, {s}) quadrature did not converge (error estimate {result.error_estimate:.3e})")
    value = 1.0 / (radial * angular)
    logger.debug(f"C({n}, {s}) by quadrature: {value!r}")
    return value


def comparison_table(n_values, s_values):
    """Rows (n, s, C, c, C/c) for comparing the two normalizations."""
    rows = []
    for n in n_values:
        for s in s_values:
            big_c, small_c = big_c_const(n, s), c_const(n, s)
            rows.append({"n": n, "s": s, "C": big_c, "c": small_c, "ratio": big_c / small_c})
    return rows
