import math

import pytest

from config import Config
from constants import dydares_constant
from errors import DomainError
from geometry import Point
from kernels import KernelContext
from run_config import GridSpec
from solver import (Decay, ScalarField, Smoothness, boundary_discrepancy, constant_field, dirichlet_solve,
                    dydares_forcing, dydares_solution, fundamental_field, gaussian_field, poisson_extend,
                    poisson_extended_field, polynomial_field, residual_check, s_mean_average)


def test_field_hints():
    compact = ScalarField(lambda p: 1.0, support_radius=2.0)
    assert compact.decay is Decay.COMPACT
    assert compact.support_hint == 2.0
    assert constant_field(3.0)(Point.of(5.0)) == 3.0
    assert constant_field(3.0).decay is Decay.BOUNDED
    assert polynomial_field([1.0, 0.0, 2.0])(Point.of(0.0, 2.0)) == 9.0
    assert polynomial_field([1.0]).decay is None
    assert gaussian_field(2.0, 3.0)(Point.of(2.0)) == pytest.approx(3.0 / math.e)


def test_dydares_presets():
    u = dydares_solution(0.5)
    assert u(Point.of(0.6, 0.0)) == pytest.approx(0.8)
    assert u(Point.of(1.5, 0.0)) == 0.0
    assert u.smoothness_hint is Smoothness.CONTINUOUS
    assert dydares_forcing(2, 0.5)(Point.of(0.1, 0.1)) == dydares_constant(2, 0.5)


def test_fundamental_field_hints():
    assert fundamental_field(KernelContext.create(3, 0.5)).decay is Decay.POWER
    assert fundamental_field(KernelContext.create(1, 0.5)).decay is Decay.BOUNDED


@pytest.mark.parametrize("n, s", [(1, 0.25), (1, 0.5), (1, 0.75), (2, 0.5)])
@pytest.mark.parametrize("x", [0.0, 0.5])
def test_poisson_extension_of_a_constant(n, s, x):
    ctx = KernelContext.create(n, s)
    spec = Config.quad_spec(rel_tol=1e-9)
    value = poisson_extend(ctx, constant_field(2.5), Point.basis(n, 0, x), spec)
    assert value == pytest.approx(2.5, rel=1e-7)


def test_poisson_extension_outside_is_the_data():
    ctx = KernelContext.create(2, 0.5)
    g = gaussian_field()
    y = Point.of(1.5, 0.5)
    assert poisson_extend(ctx, g, y) == g(y)


def test_poisson_extension_needs_decay():
    with pytest.raises(DomainError):
        poisson_extend(KernelContext.create(1, 0.5), polynomial_field([1.0, 1.0]), Point.of(0.0))


def test_dirichlet_solve_outside_and_zero_forcing():
    ctx = KernelContext.create(2, 0.5)
    assert dirichlet_solve(ctx, constant_field(1.0), Point.of(1.2, 0.0)) == 0.0
    assert dirichlet_solve(ctx, constant_field(0.0), Point.of(0.2, 0.0)) == 0.0


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("x", [-0.8, -0.4, 0.0, 0.3, 0.7])
def test_torsion_function_in_one_dimension(s, x):
    ctx = KernelContext.create(1, s)
    spec = Config.quad_spec(rel_tol=1e-8)
    u = dirichlet_solve(ctx, dydares_forcing(1, s), Point.of(x), spec)
    assert u == pytest.approx((1.0 - x * x) ** s, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("n, s", [(2, 0.5), (3, 0.3)])
def test_torsion_function_in_higher_dimensions(n, s):
    ctx = KernelContext.create(n, s)
    spec = Config.quad_spec(rel_tol=1e-6)
    for radius in (0.0, 0.5):
        x = Point.basis(n, 0, radius)
        u = dirichlet_solve(ctx, dydares_forcing(n, s), x, spec)
        assert u == pytest.approx((1.0 - radius * radius) ** s, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("n, s", [(1, 0.75), (2, 0.5), (3, 0.3)])
def test_torsion_function_on_the_default_grid(n, s):
    ctx = KernelContext.create(n, s)
    spec = Config.quad_spec(rel_tol=1e-6)
    forcing = dydares_forcing(n, s)
    for value in GridSpec().values():
        x = Point.basis(n, 0, value)
        assert dirichlet_solve(ctx, forcing, x, spec) == pytest.approx((1.0 - value * value) ** s, abs=1e-6)


def test_dirichlet_solve_is_linear():
    ctx = KernelContext.create(1, 0.3)
    spec = Config.quad_spec(rel_tol=1e-9)
    x = Point.of(0.25)
    one, bump = constant_field(1.0), gaussian_field(0.5)
    combined = ScalarField(lambda p: 2.0 * one(p) + 3.0 * bump(p))
    expected = 2.0 * dirichlet_solve(ctx, one, x, spec) + 3.0 * dirichlet_solve(ctx, bump, x, spec)
    assert dirichlet_solve(ctx, combined, x, spec) == pytest.approx(expected, rel=1e-7)


def test_dirichlet_solve_is_positive_for_positive_forcing():
    ctx = KernelContext.create(1, 0.6)
    spec = Config.quad_spec(rel_tol=1e-8)
    for x in (-0.9, 0.0, 0.6):
        assert dirichlet_solve(ctx, gaussian_field(0.3), Point.of(x), spec) > 0


def test_dirichlet_solve_scales_with_the_radius():
    # u_r(x) = r^(2s) u_1(x/r) for constant forcing
    s = 0.4
    spec = Config.quad_spec(rel_tol=1e-9)
    h = constant_field(1.0)
    big = dirichlet_solve(KernelContext.create(1, s, 2.0), h, Point.of(0.6), spec)
    unit = dirichlet_solve(KernelContext.create(1, s), h, Point.of(0.3), spec)
    assert big == pytest.approx(2.0 ** (2.0 * s) * unit, rel=1e-6)


@pytest.mark.parametrize("n, s", [(1, 0.3), (1, 0.7), (2, 0.5)])
def test_s_mean_of_a_constant(n, s):
    ctx = KernelContext.create(n, s)
    spec = Config.quad_spec(rel_tol=1e-9)
    x = Point.basis(n, 0, 0.2)
    assert s_mean_average(ctx, constant_field(1.5), x, 0.3, spec) == pytest.approx(1.5, rel=1e-7)


@pytest.mark.slow
def test_s_mean_value_property_of_the_poisson_extension():
    ctx = KernelContext.create(1, 0.5)
    spec = Config.quad_spec(rel_tol=1e-7)
    u = poisson_extended_field(ctx, gaussian_field(0.7), spec)
    x = Point.of(0.2)
    target = u(x)
    for rho in (0.1, 0.3):
        assert s_mean_average(ctx, u, x, rho, spec) == pytest.approx(target, abs=1e-4)


@pytest.mark.parametrize("s", [0.5, 0.75])
def test_residual_of_the_torsion_function(s):
    ctx = KernelContext.create(1, s)
    spec = Config.quad_spec(rel_tol=1e-8)
    points = [Point.of(0.0), Point.of(0.3), Point.of(-0.5)]
    report = residual_check(ctx, dydares_forcing(1, s), dydares_solution(s), points, spec)
    assert len(report.residuals) == 3
    assert report.max_residual() <= 1e-3


def test_residual_of_zero_is_zero():
    ctx = KernelContext.create(1, 0.4)
    report = residual_check(ctx, constant_field(0.0), constant_field(0.0), [Point.of(0.1)], inner_radius=0.2)
    assert report.max_residual() == 0.0


def test_residual_points_must_be_inside():
    ctx = KernelContext.create(1, 0.4)
    with pytest.raises(DomainError):
        residual_check(ctx, constant_field(0.0), constant_field(0.0), [Point.of(1.5)])


def test_boundary_discrepancy_shrinks():
    ctx = KernelContext.create(1, 0.5)
    spec = Config.quad_spec(rel_tol=1e-9)
    discrepancies = boundary_discrepancy(ctx, gaussian_field(), Point.of(1.0), [0.2, 0.1, 0.05, 0.025], spec)
    assert all(a > b for a, b in zip(discrepancies, discrepancies[1:]))
    with pytest.raises(DomainError):
        boundary_discrepancy(ctx, gaussian_field(), Point.of(1.0), [1.5])
