import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_int(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        return raw  # reported by validate()


def _env_float(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        return raw


class Config:
    """Configuration class for the fractional Laplacian toolkit."""

    # Parallelism
    THREADS = _env_int("FRACLAP_THREADS", 1)

    # Quadrature defaults
    REL_TOL = _env_float("FRACLAP_REL_TOL", 1e-10)
    ABS_TOL = _env_float("FRACLAP_ABS_TOL", 1e-12)
    MAX_NODES = _env_int("FRACLAP_MAX_NODES", 200_000)

    # Output
    OUTPUT_FORMAT = os.getenv("FRACLAP_OUTPUT_FORMAT", "csv").lower()
    OUTPUT_FORMATS = ("csv", "json")
    CSV_DIGITS = 17

    # Regime detection: n = 1 and |s - 1/2| below this is the critical case
    CRITICAL_TOLERANCE = 1e-12
    # n = 1 and |s - 1/2| below this (but not critical) attaches a warning
    CONDITIONING_BAND = 1e-3
    # Green function diagonal threshold, relative to the ball radius
    DIAGONAL_EPSILON = 1e-10
    # Largest dimension handled by cubature
    MAX_CUBATURE_DIM = 3

    # Logging Configuration
    LOG_LEVEL = os.getenv("FRACLAP_LOG_LEVEL", "INFO").upper()
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    @classmethod
    def quad_spec(cls, **overrides):
        """Builds the default QuadSpec, with optional field overrides."""
        from quadrature import QuadSpec

        fields = {"rel_tol": cls.REL_TOL, "abs_tol": cls.ABS_TOL, "max_nodes": cls.MAX_NODES}
        fields.update(overrides)
        return QuadSpec(**fields)

    @classmethod
    def validate(cls):
        """Validate that all environment-driven settings are usable."""
        problems = []
        if not isinstance(cls.THREADS, int) or cls.THREADS < 1:
            problems.append(f"FRACLAP_THREADS={cls.THREADS!r} (expected integer >= 1)")
        for name in ("REL_TOL", "ABS_TOL"):
            value = getattr(cls, name)
            if not isinstance(value, float) or not value > 0:
                problems.append(f"FRACLAP_{name}={value!r} (expected positive real)")
        if not isinstance(cls.MAX_NODES, int) or cls.MAX_NODES < 16:
            problems.append(f"FRACLAP_MAX_NODES={cls.MAX_NODES!r} (expected integer >= 16)")
        if cls.OUTPUT_FORMAT not in cls.OUTPUT_FORMATS:
            problems.append(f"FRACLAP_OUTPUT_FORMAT={cls.OUTPUT_FORMAT!r} (expected csv or json)")
        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"FRACLAP_LOG_LEVEL={cls.LOG_LEVEL!r}")

        if problems:
            raise ValueError(f"Invalid environment settings: {', '.join(problems)}")

        return True
