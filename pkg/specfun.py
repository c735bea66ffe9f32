"""Special functions: Gamma, Beta, Pochhammer, Gauss 2F1 and the closed forms built on them."""
import enum
import logging
import math
import warnings
from dataclasses import dataclass

from config import Config
from errors import (ConditioningWarning, ConvergenceError, DivergenceError,
                    DomainError, PoleError)

logger = logging.getLogger(__name__)

_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

_SERIES_RADIUS = 0.5
_SERIES_MAX_TERMS = 2000


@dataclass(frozen=True)
class RealArg:
    """A finite real argument."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value):
            raise DomainError(f"Argument must be finite, got {self.value!r}")
        object.__setattr__(self, "value", value)


def _real(value, name="x"):
    try:
        return RealArg(value).value
    except DomainError:
        raise DomainError(f"{name} must be finite, got {value!r}") from None
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None


def _is_nonpositive_integer(x):
    return x <= 0 and x == math.floor(x)


class Regime(enum.Enum):
    SUPER = "super"        # n > 2s
    SUB = "sub"            # n < 2s
    CRITICAL = "critical"  # n = 2s


@dataclass(frozen=True)
class RegimeTag:
    """The dimension n, the order s and the regime they fall in."""

    n: int
    s: float
    regime: Regime

    @property
    def near_critical(self):
        return self.n == 1 and abs(self.s - 0.5) < Config.CONDITIONING_BAND and self.regime is not Regime.CRITICAL


def check_order(n, s):
    """Validates a (dimension, order) pair and returns it normalized."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"Dimension n must be a positive integer, got {n!r}")
    s = _real(s, "s")
    if not 0.0 < s < 1.0:
        raise DomainError(f"Order s must lie in (0, 1), got {s}")
    return n, s


def classify_regime(n, s, warn=True):
    """Tags (n, s) as SUPER, SUB or CRITICAL."""
    n, s = check_order(n, s)
    if n == 1 and abs(s - 0.5) <= Config.CRITICAL_TOLERANCE:
        tag = RegimeTag(n, s, Regime.CRITICAL)
    elif n < 2.0 * s:
        tag = RegimeTag(n, s, Regime.SUB)
    else:
        tag = RegimeTag(n, s, Regime.SUPER)

    if warn and tag.near_critical:
        message = f"n=1, s={s!r} lies within {Config.CONDITIONING_BAND} of 1/2; a(1,s) is ill-conditioned"
        logger.warning(message)
        warnings.warn(message, ConditioningWarning, stacklevel=2)
    return tag


def gamma(x):
    """Gamma function on the reals minus the nonpositive integers."""
    x = _real(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    if x == math.floor(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))

    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    try:
        return _SQRT_2PI * math.exp((z + 0.5) * math.log(t) - t) * acc
    except OverflowError:
        return math.inf


def rgamma(x):
    """1/Gamma(x), zero at the poles."""
    x = _real(x)
    if _is_nonpositive_integer(x):
        return 0.0
    return 1.0 / gamma(x)


def beta(x, y):
    x, y = _real(x, "x"), _real(y, "y")
    if x <= 0 or y <= 0:
        raise DomainError(f"Beta requires positive arguments, got ({x}, {y})")
    return gamma(x) * gamma(y) / gamma(x + y)


def pochhammer(q, k):
    """Rising factorial (q)_k."""
    q = _real(q, "q")
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise DomainError(f"Pochhammer index must be a nonnegative integer, got {k!r}")
    result = 1.0
    for i in range(k):
        result *= q + i
    return result


def _terminating_degree(a, b):
    degrees = [int(-p) for p in (a, b) if _is_nonpositive_integer(p)]
    return min(degrees) if degrees else None


def _gauss_series(a, b, c, w, terms=None):
    term = 1.0
    total = 1.0
    limit = terms if terms is not None else _SERIES_MAX_TERMS
    for k in range(limit):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * w
        total += term
        if terms is None and abs(term) <= 1e-17 * abs(total):
            return total
    if terms is None:
        raise ConvergenceError(f"2F1({a}, {b}; {c}; {w}) series did not settle in {limit} terms")
    return total


def _hyp2f1_split(a, b, c, w):
    # Connection formula between w and 1 - w.
    d = c - a - b
    if d == math.floor(d):
        raise DomainError(f"2F1({a}, {b}; {c}; {w}): c-a-b={d} is an integer")
    v = 1.0 - w
    first = gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b) * hyp2f1(a, b, 1.0 - d, v)
    second = v ** d * gamma(c) * gamma(-d) * rgamma(a) * rgamma(b) * hyp2f1(c - a, c - b, 1.0 + d, v)
    return first + second


def hyp2f1(a, b, c, w):
    """Gauss hypergeometric function 2F1(a, b; c; w) for real w < 1."""
    a, b, c, w = _real(a, "a"), _real(b, "b"), _real(c, "c"), _real(w, "w")
    degree = _terminating_degree(a, b)
    if _is_nonpositive_integer(c) and (degree is None or degree > -c):
        raise DomainError(f"2F1 undefined for c={c}")
    if degree is not None:
        return _gauss_series(a, b, c, w, terms=degree)
    if w == 0.0:
        return 1.0
    if w >= 1.0:
        raise DomainError(f"2F1({a}, {b}; {c}; w) is not supported at w={w} >= 1")
    if abs(w) <= _SERIES_RADIUS:
        return _gauss_series(a, b, c, w)
    if w < 0.0:
        return (1.0 - w) ** (-a) * hyp2f1(a, c - b, c, w / (w - 1.0))
    return _hyp2f1_split(a, b, c, w)


def hyp2f1_integral(a, b, c, w, spec=None):
    """2F1 from its Euler integral; needs c > b > 0 and w < 1."""
    from quadrature import integrate_interval

    a, b, c, w = _real(a, "a"), _real(b, "b"), _real(c, "c"), _real(w, "w")
    if not c > b > 0 or w >= 1.0:
        raise DomainError(f"Euler integral needs c > b > 0 and w < 1, got b={b}, c={c}, w={w}")
    spec = (spec or Config.quad_spec()).with_exponents(b - 1.0, c - b - 1.0)
    result = integrate_interval(
        lambda t: t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - w * t) ** (-a),
        0.0, 1.0, spec,
    ).checked()
    return result.value / beta(b, c - b)


def _beta_antiderivative(u, p, q):
    # u^p/p * F(p, 1-q; p+1; u) has derivative u^(p-1) (1-u)^(q-1); valid for any p != 0.
    return u ** p / p * hyp2f1(p, 1.0 - q, p + 1.0, u)


def incomplete_beta(x, a, b):
    """Lower incomplete Beta integral over [0, x], 0 <= x < 1."""
    x, a, b = _real(x, "x"), _real(a, "a"), _real(b, "b")
    if a <= 0:
        raise DomainError(f"incomplete_beta requires a > 0, got {a}")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"incomplete_beta requires 0 <= x < 1, got {x}")
    if x == 0.0:
        return 0.0
    return _beta_antiderivative(x, a, b)


def boundary_integral(n, s, x):
    """Integral of t^(s-1) (1+t)^(-n/2) over [0, x]; x may be +inf when n > 2s."""
    tag = classify_regime(n, s, warn=False)
    n, s = tag.n, tag.s
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"boundary_integral requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if tag.regime is Regime.CRITICAL:
        if math.isinf(x):
            raise DivergenceError("boundary_integral diverges at x=inf for n = 2s")
        return 2.0 * math.asinh(math.sqrt(x))

    p = n / 2.0 - s
    if math.isinf(x):
        if tag.regime is not Regime.SUPER:
            raise DivergenceError(f"boundary_integral diverges at x=inf for n={n}, s={s}")
        return beta(s, p)
    if x <= 1.0:
        return x ** s / s * hyp2f1(n / 2.0, s, s + 1.0, -x)

    # Tail in u = 1/(1+t): integrand becomes u^(p-1) (1-u)^(s-1) on (0, 1/(1+x)).
    u = 1.0 / (1.0 + x)
    if tag.regime is Regime.SUPER:
        return beta(s, p) - _beta_antiderivative(u, p, s)
    return boundary_integral(n, s, 1.0) + _beta_antiderivative(0.5, p, s) - _beta_antiderivative(u, p, s)


def sine_moment(s):
    """Integral of t^(2s-2) sin t over (0, inf) for s in (0, 1/2]."""
    s = _real(s, "s")
    if not 0.0 < s <= 0.5:
        raise DomainError(f"sine_moment requires s in (0, 1/2], got {s}")
    if abs(s - 0.5) <= Config.CRITICAL_TOLERANCE:
        return math.pi / 2.0
    return -math.cos(math.pi * s) * gamma(2.0 * s - 1.0)


def wallis(k):
    """Integral of sin^k over [0, pi]."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise DomainError(f"wallis requires a nonnegative integer, got {k!r}")
    value = math.pi if k % 2 == 0 else 2.0
    for j in range(2 + k % 2, k + 1, 2):
        value *= (j - 1) / j
    return value
