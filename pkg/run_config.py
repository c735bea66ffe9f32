import json
import logging
import math
from dataclasses import asdict, dataclass, field as dataclass_field, fields
from typing import Dict, List, Optional

from config import Config
from errors import ConfigError

logger = logging.getLogger(__name__)

COMMANDS = ("constants", "eval", "solve", "verify")
SELECTORS = ("phi", "smean", "poisson", "green_closed", "green_definition")
FIELDS = ("constant", "dydares", "gaussian", "polynomial")
PROBLEMS = ("dirichlet", "poisson")


def _default_pairs():
    return [[n, s] for n in (1, 2, 3) for s in (0.25, 0.5, 0.75)]


@dataclass
class GridSpec:
    """count points from start to stop along coordinate axis `axis`."""

    start: float = -0.9
    stop: float = 0.9
    count: int = 9
    axis: int = 0

    def values(self):
        if self.count == 1:
            return [float(self.start)]
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + k * step for k in range(self.count)]


@dataclass
class RunConfig:
    command: Optional[str] = None
    n: Optional[int] = None
    s: Optional[float] = None
    r: Optional[float] = None
    pairs: List[List[float]] = dataclass_field(default_factory=_default_pairs)
    selector: str = "green_closed"
    x: Optional[List[float]] = None
    grid: GridSpec = dataclass_field(default_factory=GridSpec)
    points: Optional[List[List[float]]] = None
    field: str = "dydares"
    field_params: Dict[str, object] = dataclass_field(default_factory=dict)
    problem: str = "dirichlet"
    residual: bool = False
    identities: List[str] = dataclass_field(default_factory=list)
    tol: Optional[float] = None
    out: Optional[str] = None
    format: str = dataclass_field(default_factory=lambda: Config.OUTPUT_FORMAT)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError(f"Run configuration must be a JSON object, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        values = dict(data)
        grid = values.pop("grid", None)
        config = cls(**values)
        if grid is not None:
            if not isinstance(grid, dict):
                raise ConfigError("'grid' must be an object with start, stop, count and axis")
            try:
                config.grid = GridSpec(**grid)
            except TypeError as e:
                raise ConfigError(f"Invalid grid: {e}") from None
        return config

    def to_dict(self):
        return asdict(self)

    @classmethod
    def load(cls, filename):
        """Reads a JSON run configuration; a missing file gives the defaults."""
        if filename is None:
            return cls()
        try:
            with open(filename, 'r') as f:
                data = json.load(f)
        except FileNotFoundError:
            logger.warning(f"Run configuration {filename} not found; using defaults.")
            return cls()
        except json.JSONDecodeError as e:
            raise ConfigError(f"{filename} is not valid JSON: {e}") from None
        return cls.from_dict(data)

    def save(self, filename):
        with open(filename, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)

    def apply_overrides(self, **overrides):
        """Sets every override that is not None (command-line flags win over the file)."""
        for name, value in overrides.items():
            if value is not None:
                setattr(self, name, value)
        return self

    @property
    def dim(self):
        return self.n if self.n is not None else 1

    @property
    def selected_pairs(self):
        """(n, s) pairs for `constants`: n and s together name a single pair, either alone filters `pairs`."""
        if self.n is not None and self.s is not None:
            return [[self.n, self.s]]
        return [pair for pair in self.pairs
                if (self.n is None or pair[0] == self.n) and (self.s is None or pair[1] == self.s)]

    @property
    def radius(self):
        return float(self.r) if self.r is not None else 1.0

    def validate(self):
        """Raises ConfigError listing every problem with the configuration."""
        problems = []
        if self.command not in COMMANDS:
            problems.append(f"command={self.command!r} (expected one of {', '.join(COMMANDS)})")
        if self.n is not None and (isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1):
            problems.append(f"n={self.n!r} (expected integer >= 1)")
        if self.s is not None and not (_is_real(self.s) and 0.0 < self.s < 1.0):
            problems.append(f"s={self.s!r} (expected real in (0, 1))")
        if self.r is not None and not (_is_real(self.r) and self.r > 0):
            problems.append(f"r={self.r!r} (expected positive real)")
        if self.tol is not None and not (_is_real(self.tol) and self.tol > 0):
            problems.append(f"tol={self.tol!r} (expected positive real)")
        if self.format not in Config.OUTPUT_FORMATS:
            problems.append(f"format={self.format!r} (expected csv or json)")

        if self.command == "constants":
            problems.extend(_pair_problems(self.pairs))
        if self.command in ("eval", "solve"):
            if self.n is None or self.s is None:
                problems.append(f"{self.command} needs n and s")
            elif self.n > Config.MAX_CUBATURE_DIM and not (self.command == "eval" and self.selector in
                                                           ("phi", "smean", "poisson", "green_closed")):
                problems.append(f"n={self.n} exceeds the cubature limit {Config.MAX_CUBATURE_DIM}")
            problems.extend(self._grid_problems())
        if self.command == "eval":
            if self.selector not in SELECTORS:
                problems.append(f"selector={self.selector!r} (expected one of {', '.join(SELECTORS)})")
            if self.x is not None:
                problems.extend(_point_problems([self.x], self.dim, "x"))
        if self.command == "solve":
            if self.field not in FIELDS:
                problems.append(f"field={self.field!r} (expected one of {', '.join(FIELDS)})")
            if self.problem not in PROBLEMS:
                problems.append(f"problem={self.problem!r} (expected dirichlet or poisson)")
            problems.extend(self._field_param_problems())
        if self.command == "verify":
            if self.x is not None:
                dim = self.n if self.n is not None else (len(self.x) if isinstance(self.x, list) else 0)
                problems.extend(_point_problems([self.x], dim, "x"))

        if problems:
            raise ConfigError(f"Invalid run configuration: {'; '.join(problems)}")
        return True

    def _grid_problems(self):
        if self.points is not None:
            return _point_problems(self.points, self.dim, "points")
        problems = []
        grid = self.grid
        if isinstance(grid.count, bool) or not isinstance(grid.count, int) or grid.count < 1:
            problems.append(f"grid.count={grid.count!r} (expected integer >= 1)")
        if not (_is_real(grid.start) and _is_real(grid.stop)):
            problems.append("grid.start and grid.stop must be finite reals")
        if isinstance(grid.axis, bool) or not isinstance(grid.axis, int) or not 0 <= grid.axis < self.dim:
            problems.append(f"grid.axis={grid.axis!r} (expected 0 <= axis < n)")
        return problems

    def _field_param_problems(self):
        params = self.field_params or {}
        if self.field == "constant" and "value" in params and not _is_real(params["value"]):
            return [f"field_params.value={params['value']!r} (expected real)"]
        if self.field == "gaussian":
            width = params.get("width", 1.0)
            if not (_is_real(width) and width > 0):
                return [f"field_params.width={width!r} (expected positive real)"]
        if self.field == "polynomial":
            coefficients = params.get("coefficients")
            if not isinstance(coefficients, list) or not coefficients or not all(_is_real(c) for c in coefficients):
                return ["field_params.coefficients must be a non-empty list of reals"]
        return []


def _is_real(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _point_problems(points, n, name):
    problems = []
    if not isinstance(points, list):
        return [f"{name} must be a list of coordinate lists"]
    for p in points:
        if not isinstance(p, list) or len(p) != n or not all(_is_real(c) for c in p):
            problems.append(f"{name} entry {p!r} (expected {n} finite coordinates)")
    return problems


def _pair_problems(pairs):
    problems = []
    if not isinstance(pairs, list):
        return ["pairs must be a list of [n, s] pairs"]
    for pair in pairs:
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2 or isinstance(pair[0], bool)
                or not isinstance(pair[0], int) or pair[0] < 1 or not _is_real(pair[1]) or not 0.0 < pair[1] < 1.0):
            problems.append(f"pair {pair!r} (expected [n >= 1, s in (0, 1)])")
    return problems
