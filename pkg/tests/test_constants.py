import math

import pytest
from hypothesis import given, strategies as st

from config import Config
from constants import (ConstantsBundle, a_const, big_c_const, big_c_quadrature, bundle, c_const,
                       comparison_table, dydares_constant, k_const, kappa_const, sphere_measure,
                       sphere_measure_product)
from errors import DomainError, RegimeError


def test_critical_constants():
    assert a_const(1, 0.5) == -1.0 / math.pi
    assert kappa_const(1, 0.5) == 1.0 / math.pi
    assert c_const(1, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-14)
    assert big_c_const(1, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-14)
    with pytest.raises(RegimeError):
        k_const(1, 0.5)


def test_riesz_constant_in_three_dimensions():
    assert a_const(3, 0.5) == pytest.approx(1.0 / (2.0 * math.pi ** 2), rel=1e-14)


def test_super_critical_kappa_is_a_times_k():
    for n, s in [(2, 0.5), (3, 0.3), (5, 0.9)]:
        assert a_const(n, s) * k_const(n, s) == pytest.approx(kappa_const(n, s), rel=1e-13)


@pytest.mark.parametrize("s", [0.55, 0.6, 0.75, 0.9, 0.99])
def test_sub_critical_kappa_routes_agree(s):
    assert -a_const(1, s) * k_const(1, s) == pytest.approx(kappa_const(1, s), rel=1e-12)
    assert ConstantsBundle.create(1, s).kappa == kappa_const(1, s)


def test_bundle_fields():
    b = bundle(2, 0.5)
    assert (b.n, b.s) == (2, 0.5)
    assert b.omega_n == pytest.approx(2.0 * math.pi)
    assert b.big_c == big_c_const(2, 0.5)
    assert math.isnan(bundle(1, 0.5).k)


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, 2.0 * math.pi), (3, 4.0 * math.pi), (4, 2.0 * math.pi ** 2)])
def test_sphere_measure(n, expected):
    assert sphere_measure(n) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 11))
def test_sphere_measure_routes_agree(n):
    assert sphere_measure_product(n) == pytest.approx(sphere_measure(n), rel=1e-13)


def test_sphere_measure_rejects_bad_dimension():
    with pytest.raises(DomainError):
        sphere_measure(0)


def test_dydares_constant_critical_is_one():
    assert dydares_constant(1, 0.5) == pytest.approx(1.0, rel=1e-14)


@given(st.integers(min_value=1, max_value=6), st.floats(min_value=0.05, max_value=0.95))
def test_constants_are_positive(n, s):
    if n == 1 and abs(s - 0.5) < 2.0 * Config.CONDITIONING_BAND:
        return
    assert c_const(n, s) > 0
    assert kappa_const(n, s) > 0
    assert big_c_const(n, s) > 0
    assert dydares_constant(n, s) > 0


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_big_c_by_quadrature(n, s):
    spec = Config.quad_spec(rel_tol=1e-9)
    assert big_c_quadrature(n, s, spec) == pytest.approx(big_c_const(n, s), rel=1e-6)


def test_big_c_quadrature_dimension_cap():
    with pytest.raises(DomainError):
        big_c_quadrature(Config.MAX_CUBATURE_DIM + 1, 0.5)


def test_comparison_table():
    rows = comparison_table([1, 2], [0.25, 0.5])
    assert len(rows) == 4
    for row in rows:
        assert row["ratio"] == pytest.approx(row["C"] / row["c"])
        assert set(row) == {"n", "s", "C", "c", "ratio"}
