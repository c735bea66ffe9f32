class FracLapError(Exception):
    """Base class for every error raised by the toolkit."""


class ConfigError(FracLapError, ValueError):
    """Invalid run configuration or environment setting."""


class DomainError(FracLapError, ValueError):
    """Argument outside the supported domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. Gamma at a nonpositive integer)."""


class RegimeError(DomainError):
    """Operation not defined in the (n, s) regime it was called with."""


class DivergenceError(DomainError):
    """The requested integral diverges."""


class SingularityError(FracLapError, ArithmeticError):
    """Evaluation at a singular point of a map or kernel."""


class DiagonalSingularity(SingularityError):
    """Green function requested on the diagonal x = z where it is infinite."""


class ConvergenceError(FracLapError, ArithmeticError):
    """A series or quadrature failed its residual check."""


class BudgetExceeded(ConvergenceError):
    """Quadrature node budget exhausted before reaching tolerance."""


class NonFiniteSample(ConvergenceError):
    """Integrand returned NaN or infinity at an interior node."""


class ConditioningWarning(UserWarning):
    """Result is valid but numerically ill-conditioned."""
