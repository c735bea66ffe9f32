import logging
import math

import pytest
from hypothesis import assume, given, strategies as st

from config import Config
from errors import DiagonalSingularity, DomainError, RegimeError, SingularityError
import kernels
from geometry import Point
from kernels import (KernelContext, fundamental_solution, green_closed, green_definition,
                     green_diagonal_limit, poisson_kernel, r0, s_mean_kernel)

unit_coordinate = st.floats(min_value=-0.6, max_value=0.6, allow_nan=False, allow_infinity=False)
inside_2d = st.tuples(unit_coordinate, unit_coordinate).map(Point)


def test_context():
    ctx = KernelContext.create(2, 0.5, 2.0)
    assert (ctx.n, ctx.s, ctx.r) == (2, 0.5, 2.0)
    assert ctx.domain.radius == 2.0
    with pytest.raises(DomainError):
        KernelContext.create(2, 0.5, 0.0)
    with pytest.raises(DomainError):
        fundamental_solution(ctx, Point.of(1.0))


def test_fundamental_solution_values():
    assert fundamental_solution(KernelContext.create(3, 0.5), Point.of(2.0, 0.0, 0.0)) == pytest.approx(
        1.0 / (8.0 * math.pi ** 2), rel=1e-14)
    critical = KernelContext.create(1, 0.5)
    assert fundamental_solution(critical, Point.of(1.0)) == 0.0
    assert fundamental_solution(critical, Point.of(math.e)) == pytest.approx(-1.0 / math.pi)


def test_fundamental_solution_at_the_origin():
    with pytest.raises(SingularityError):
        fundamental_solution(KernelContext.create(2, 0.5), Point.of(0.0, 0.0))
    with pytest.raises(SingularityError):
        fundamental_solution(KernelContext.create(1, 0.5), Point.of(0.0))
    assert fundamental_solution(KernelContext.create(1, 0.75), Point.of(0.0)) == 0.0


@given(inside_2d, st.floats(min_value=0.1, max_value=10.0))
def test_fundamental_solution_is_homogeneous(x, scale):
    assume(x.norm() > 1e-3)
    ctx = KernelContext.create(2, 0.3)
    assert fundamental_solution(ctx, x * scale) == pytest.approx(
        scale ** (2.0 * 0.3 - 2.0) * fundamental_solution(ctx, x), rel=1e-12)


def test_s_mean_kernel():
    ctx = KernelContext.create(1, 0.5)
    assert s_mean_kernel(ctx, Point.of(2.0)) == pytest.approx(1.0 / (2.0 * math.sqrt(3.0) * math.pi), rel=1e-14)
    assert s_mean_kernel(ctx, Point.of(0.5)) == 0.0
    assert s_mean_kernel(ctx, Point.of(-1.0)) == 0.0


@pytest.mark.parametrize("y", [1.2, -2.0, 7.5])
def test_poisson_kernel_at_the_centre_is_the_s_mean_kernel(y):
    ctx = KernelContext.create(1, 0.3)
    assert poisson_kernel(ctx, Point.of(y), Point.of(0.0)) == pytest.approx(s_mean_kernel(ctx, Point.of(y)), rel=1e-14)


def test_poisson_kernel_domain():
    ctx = KernelContext.create(2, 0.5)
    with pytest.raises(DomainError):
        poisson_kernel(ctx, Point.of(2.0, 0.0), Point.of(1.0, 0.0))
    with pytest.raises(DomainError):
        poisson_kernel(ctx, Point.of(0.5, 0.0), Point.of(0.0, 0.0))


def test_r0():
    ctx = KernelContext.create(2, 0.5, 2.0)
    x, z = Point.of(0.0, 0.0), Point.of(1.0, 0.0)
    assert r0(ctx, x, z) == pytest.approx(4.0 * 3.0 / 4.0)
    assert r0(ctx, x, z) == r0(ctx, z, x)
    with pytest.raises(SingularityError):
        r0(ctx, x, x)


@given(inside_2d, inside_2d)
def test_green_function_is_symmetric_and_positive(x, z):
    assume(x.distance(z) > 1e-6)
    ctx = KernelContext.create(2, 0.4)
    forward = green_closed(ctx, x, z).value
    assert forward > 0
    assert forward == pytest.approx(green_closed(ctx, z, x).value, rel=1e-12)


def test_green_function_vanishes_outside():
    ctx = KernelContext.create(2, 0.5)
    assert green_closed(ctx, Point.of(0.2, 0.0), Point.of(1.0, 0.0)).value == 0.0
    assert green_closed(ctx, Point.of(1.5, 0.0), Point.of(0.2, 0.0)).value == 0.0


def test_negative_green_values_are_clamped_and_logged(monkeypatch, caplog):
    monkeypatch.setattr(kernels, "boundary_integral", lambda n, s, ratio: -1e-18)
    ctx = KernelContext.create(3, 0.5)
    with caplog.at_level(logging.DEBUG, logger="kernels"):
        result = green_closed(ctx, Point.of(0.1, 0.0, 0.0), Point.of(0.99, 0.0, 0.0))
    assert result.value == 0.0
    assert "clamped to 0" in caplog.text


def test_green_function_decays_towards_the_sphere():
    ctx = KernelContext.create(3, 0.5)
    x = Point.origin(3)
    values = [green_closed(ctx, x, Point.basis(3, 0, t)).value for t in (0.2, 0.5, 0.8, 0.95, 0.999)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_critical_green_function():
    ctx = KernelContext.create(1, 0.5)
    expected = math.log((1.0 + math.sqrt(0.75)) / 0.5) / math.pi
    assert green_closed(ctx, Point.of(0.0), Point.of(0.5)).value == pytest.approx(expected, rel=1e-14)


def test_diagonal_policy():
    x = Point.of(0.3, 0.1)
    with pytest.raises(DiagonalSingularity):
        green_closed(KernelContext.create(2, 0.5), x, x)
    with pytest.raises(DiagonalSingularity):
        green_closed(KernelContext.create(1, 0.5), Point.of(0.3), Point.of(0.3))
    with pytest.raises(RegimeError):
        green_diagonal_limit(KernelContext.create(2, 0.5), x)
    sub = KernelContext.create(1, 0.75)
    result = green_closed(sub, Point.of(0.3), Point.of(0.3))
    assert result.diagonal
    assert result.value == green_diagonal_limit(sub, Point.of(0.3))


@pytest.mark.parametrize("s", [0.6, 0.75, 0.9])
def test_sub_critical_diagonal_is_the_limit(s):
    ctx = KernelContext.create(1, s)
    alpha = 2.0 * s - 1.0
    h = 1e-4
    x = Point.of(0.0)
    near = green_closed(ctx, x, Point.of(h)).value
    nearer = green_closed(ctx, x, Point.of(0.5 * h)).value
    # G(x, x + h) = G(x, x) + A h^alpha + O(h^2)
    extrapolated = (2.0 ** alpha * nearer - near) / (2.0 ** alpha - 1.0)
    assert extrapolated == pytest.approx(green_diagonal_limit(ctx, x), rel=1e-7)


@pytest.mark.parametrize("n, s, x, z", [
    (1, 0.5, (0.0,), (0.5,)),
    (1, 0.75, (0.1,), (0.4,)),
    (1, 0.25, (-0.3,), (0.6,)),
    (2, 0.5, (0.2, 0.0), (-0.3, 0.1)),
])
def test_green_definition_matches_closed_form(n, s, x, z):
    ctx = KernelContext.create(n, s)
    spec = Config.quad_spec(rel_tol=1e-8)
    closed = green_closed(ctx, Point(x), Point(z)).value
    assert green_definition(ctx, Point(x), Point(z), spec) == pytest.approx(closed, rel=1e-5)


@pytest.mark.slow
def test_green_definition_matches_closed_form_in_three_dimensions():
    ctx = KernelContext.create(3, 0.5)
    x, z = Point.of(0.2, 0.0, 0.0), Point.of(-0.3, 0.1, 0.0)
    spec = Config.quad_spec(rel_tol=1e-7)
    assert green_definition(ctx, x, z, spec) == pytest.approx(green_closed(ctx, x, z).value, rel=1e-4)


def test_green_definition_domain():
    ctx = KernelContext.create(1, 0.25)
    with pytest.raises(DomainError):
        green_definition(ctx, Point.of(1.2), Point.of(0.0))
    with pytest.raises(DiagonalSingularity):
        green_definition(ctx, Point.of(0.2), Point.of(0.2))
