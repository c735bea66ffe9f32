"""Command implementations: constant tables, kernel grids, solves and the identity suite."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from config import Config
from constants import a_const, big_c_const, big_c_quadrature, c_const, k_const, kappa_const
from errors import DiagonalSingularity, DomainError, SingularityError
from geometry import Point
from identities import Sample, run_identities
from kernels import (KernelContext, fundamental_solution, green_closed, green_definition,
                     poisson_kernel, s_mean_kernel)
from solver import (Decay, ScalarField, constant_field, dirichlet_solve, dydares_forcing,
                    dydares_solution, gaussian_field, poisson_extend, poisson_extended_field,
                    polynomial_field, residual_check)
from specfun import Regime, classify_regime
from utils import point_columns, write_table
from workers import ordered_map

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


@dataclass
class Table:
    columns: List[str]
    rows: List[dict] = field(default_factory=list)
    exit_code: int = EXIT_OK


def _quad_spec(config):
    return Config.quad_spec(rel_tol=config.tol) if config.tol is not None else Config.quad_spec()


def _grid_points(config):
    n = config.n
    if config.points is not None:
        return [Point(tuple(p)) for p in config.points]
    axis = config.grid.axis
    return [Point.basis(n, axis, value) for value in config.grid.values()]


def _point_row(p, prefix="x"):
    return dict(zip(point_columns(p.dim, prefix), p.coords))


# --- constants -------------------------------------------------------------


def _constants_row(pair):
    n, s = int(pair[0]), float(pair[1])
    tag = classify_regime(n, s)
    closed = big_c_const(n, s)
    quadrature = big_c_quadrature(n, s) if n <= Config.MAX_CUBATURE_DIM else None
    return {
        "n": n,
        "s": s,
        "a": a_const(n, s),
        "c": c_const(n, s),
        "k": None if tag.regime is Regime.CRITICAL else k_const(n, s),
        "kappa": kappa_const(n, s),
        "C_closed": closed,
        "C_quadrature": quadrature,
        "abs_diff": None if quadrature is None else abs(closed - quadrature),
    }


def cmd_constants(config):
    """One row of normalization constants per (n, s) pair."""
    columns = ["n", "s", "a", "c", "k", "kappa", "C_closed", "C_quadrature", "abs_diff"]
    rows = ordered_map(_constants_row, config.selected_pairs)
    logger.info(f"Computed constants for {len(rows)} (n, s) pairs")
    return Table(columns, rows)


# --- kernel evaluation -----------------------------------------------------


def _evaluate(ctx, selector, x, p, spec):
    """(value, status) of the selected kernel at grid point p; x is the fixed second point."""
    try:
        if selector == "phi":
            return fundamental_solution(ctx, p), "ok"
        if selector == "smean":
            return s_mean_kernel(ctx, p), "ok"
        if selector == "poisson":
            return poisson_kernel(ctx, p, x), "ok"
        if selector == "green_closed":
            result = green_closed(ctx, x, p)
            return result.value, "diagonal" if result.diagonal else "ok"
        return green_definition(ctx, x, p, spec), "ok"
    except DiagonalSingularity:
        return None, "diagonal"
    except SingularityError:
        return None, "singular"
    except DomainError:
        return None, "outside"


def cmd_eval(config):
    """Evaluates one kernel over a grid of points."""
    ctx = KernelContext.create(config.n, config.s, config.radius)
    x = Point(tuple(config.x)) if config.x is not None else Point.origin(ctx.n)
    spec = _quad_spec(config)
    points = _grid_points(config)

    def row(p):
        value, status = _evaluate(ctx, config.selector, x, p, spec)
        return {**_point_row(p), "value": value, "status": status}

    rows = ordered_map(row, points)
    skipped = sum(1 for r in rows if r["status"] != "ok")
    logger.info(f"Evaluated {config.selector} at {len(rows)} points ({skipped} without a value)")
    return Table(point_columns(ctx.n) + ["value", "status"], rows)


# --- solves ----------------------------------------------------------------


def preset_field(config, ctx):
    """The ScalarField named by config.field, built from config.field_params."""
    params = config.field_params or {}
    if config.field == "constant":
        return constant_field(params.get("value", 1.0))
    if config.field == "dydares":
        if config.problem == "poisson":
            return dydares_solution(ctx.s)
        return dydares_forcing(ctx.n, ctx.s)
    if config.field == "gaussian":
        return gaussian_field(params.get("width", 1.0), params.get("amplitude", 1.0))
    if config.field == "polynomial":
        return polynomial_field(params["coefficients"])
    raise DomainError(f"Unknown field preset {config.field!r}")


def exact_solution(config, ctx) -> Optional[ScalarField]:
    """Closed-form solution of the configured problem, when the preset has one."""
    params = config.field_params or {}
    if config.problem == "dirichlet":
        if config.field == "dydares":
            r_sq = ctx.r * ctx.r
            return ScalarField(lambda p: max(r_sq - p.norm_sq(), 0.0) ** ctx.s, support_radius=ctx.r)
        if config.field == "constant" and float(params.get("value", 1.0)) == 0.0:
            return constant_field(0.0)
        return None
    if config.field == "constant":
        return constant_field(params.get("value", 1.0))
    return None


def cmd_solve(config):
    """Evaluates the Dirichlet (forcing) or Poisson (exterior data) solution on a grid."""
    ctx = KernelContext.create(config.n, config.s, config.radius)
    spec = _quad_spec(config)
    data = preset_field(config, ctx)
    points = _grid_points(config)

    if config.problem == "poisson":
        values = ordered_map(lambda p: poisson_extend(ctx, data, p, spec), points)
    else:
        values = ordered_map(lambda p: dirichlet_solve(ctx, data, p, spec), points)

    columns = point_columns(ctx.n) + ["u"]
    rows = [{**_point_row(p), "u": u} for p, u in zip(points, values)]
    if config.residual:
        columns.append("residual")
        residuals = _residuals(config, ctx, data, points, values, spec)
        for row, residual in zip(rows, residuals):
            row["residual"] = residual
    logger.info(f"Solved the {config.problem} problem for '{data.name}' at {len(rows)} points")
    return Table(columns, rows)


def _residuals(config, ctx, data, points, values, spec):
    exact = exact_solution(config, ctx)
    if exact is not None:
        return [abs(u - exact(p)) for p, u in zip(points, values)]
    if config.problem == "poisson" and data.decay is not Decay.COMPACT:
        # s-harmonicity of the extension at the interior grid points
        interior = [p for p in points if p.norm() < ctx.r]
        report = residual_check(ctx, constant_field(0.0), poisson_extended_field(ctx, data, spec), interior, spec)
        by_point = {p.coords: value for p, value in report.residuals}
        return [by_point.get(p.coords) for p in points]
    logger.warning(f"No residual available for the {config.problem} problem with '{data.name}'")
    return [None] * len(points)


# --- verification ----------------------------------------------------------


VERIFY_COLUMNS = ["name", "params", "lhs", "rhs", "abs_err", "rel_err", "passed"]


def cmd_verify(config):
    """Runs the identity suite; exit code 1 when any identity fails."""
    sample = Sample(config.n, config.s, config.r, tuple(config.x) if config.x is not None else None)
    rows = run_identities(config.identities or None, sample, config.tol, mapper=ordered_map)
    failed = [row for row in rows if not row.passed]
    for row in failed:
        logger.error(f"FAILED {row.name} [{row.params}]: rel_err={row.rel_err:.3e}")
    exit_code = EXIT_VERIFY_FAILED if failed else EXIT_OK
    return Table(VERIFY_COLUMNS, [row.as_dict() for row in rows], exit_code)


COMMANDS = {
    "constants": cmd_constants,
    "eval": cmd_eval,
    "solve": cmd_solve,
    "verify": cmd_verify,
}


def run(config):
    """Runs config.command, writes its table and returns the exit code."""
    logger.info(f"Running '{config.command}'...")
    table = COMMANDS[config.command](config)
    write_table(table.rows, table.columns, config.out, config.format)
    if config.out is not None:
        logger.info(f"Wrote {len(table.rows)} rows to {config.out}")
    return table.exit_code