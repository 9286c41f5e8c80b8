"""Cylinder function evaluation, checked against an extended-precision
series oracle (mpmath) and the classical identities."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wirepol.errors import DomainError, RangeError
from wirepol.special_functions import (
    IMAG_GUARD,
    bessel_j,
    bessel_j_all_orders,
    bessel_j_derivative,
    bessel_j_log_derivative,
    hankel1,
    hankel1_all_orders,
    hankel1_derivative,
)

mpmath.mp.dps = 50


def oracle_j(m, z):
    return complex(mpmath.besselj(m, mpmath.mpc(z)))


def oracle_jp(m, z):
    return complex(0.5 * (mpmath.besselj(m - 1, mpmath.mpc(z))
                          - mpmath.besselj(m + 1, mpmath.mpc(z))))


@pytest.mark.parametrize("m,z", [
    (0, 0.5), (0, 3.7), (1, 2.0), (5, 1.0), (12, 30.0),
    (0, 1 + 2j), (3, 0.4 - 0.9j), (7, 10 + 5j), (40, 25 + 12j),
])
def test_bessel_j_matches_series_oracle(m, z):
    got = bessel_j(m, z)
    want = oracle_j(m, z)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("m,z", [
    (0, 0.5), (1, 2.0), (5, 1.0), (3, 0.4 - 0.9j), (7, 10 + 5j),
])
def test_bessel_j_derivative_matches_oracle(m, z):
    assert bessel_j_derivative(m, z) == pytest.approx(oracle_jp(m, z), rel=1e-12)


def test_bessel_j_derivative_matches_finite_difference():
    m, z = 4, 2.3 + 0.7j
    h = 1e-6
    fd = (bessel_j(m, z + h) - bessel_j(m, z - h)) / (2 * h)
    assert bessel_j_derivative(m, z) == pytest.approx(fd, rel=1e-8)


def test_negative_order_symmetry_exact():
    z = 1.7 - 0.3j
    for m in (1, 2, 5, 11):
        assert bessel_j(-m, z) == (-1) ** m * bessel_j(m, z)


@given(st.floats(0.1, 50.0), st.floats(-20.0, 20.0),
       st.integers(0, 30))
@settings(max_examples=60, deadline=None)
def test_conjugation_symmetry(re, im, m):
    z = complex(re, im)
    a = bessel_j(m, np.conj(z))
    b = np.conj(bessel_j(m, z))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-280)


@given(st.floats(0.1, 500.0), st.integers(0, 60))
@settings(max_examples=120, deadline=None)
def test_wronskian_identity(x, m):
    # J_m(x) H'_m(x) - J'_m(x) H_m(x) = 2i / (pi x)
    w = (bessel_j(m, x) * hankel1_derivative(m, x)
         - bessel_j_derivative(m, x) * hankel1(m, x))
    want = 2j / (math.pi * x)
    assert abs(w - want) <= 1e-10 * abs(want)


def test_hankel1_matches_oracle():
    for m, x in [(0, 0.3), (2, 5.0), (9, 14.0)]:
        want = complex(mpmath.hankel1(m, x))
        assert hankel1(m, x) == pytest.approx(want, rel=1e-12)


def test_hankel1_requires_positive_argument():
    with pytest.raises(DomainError):
        hankel1(2, -1.0)
    with pytest.raises(DomainError):
        hankel1(2, 0.0)


def test_large_imaginary_argument_guard():
    with pytest.raises(RangeError):
        bessel_j(0, complex(1.0, IMAG_GUARD + 1.0))


def test_all_orders_agree_with_scalar_calls():
    x = 7.3
    vals, ders = bessel_j_all_orders(12, x)
    hv, hd = hankel1_all_orders(12, x)
    for m in range(13):
        assert vals[m] == pytest.approx(bessel_j(m, x), rel=1e-13)
        assert ders[m] == pytest.approx(bessel_j_derivative(m, x), rel=1e-13)
        assert hv[m] == pytest.approx(hankel1(m, x), rel=1e-13)
        assert hd[m] == pytest.approx(hankel1_derivative(m, x), rel=1e-13)


@pytest.mark.parametrize("z", [2.0 + 0.5j, 0.8 - 1.1j, 30 + 18j, 4.0 + 0j])
def test_log_derivative_matches_oracle(z):
    m_max = 20
    d = bessel_j_log_derivative(z, m_max)
    for m in (0, 1, 5, 12, 20):
        want = oracle_jp(m, z) / oracle_j(m, z)
        assert d[m] == pytest.approx(want, rel=1e-10)


def test_log_derivative_survives_huge_imaginary_part():
    # the ratio stays O(1) where the Bessel functions themselves overflow
    z = 80 + 2000j
    d = bessel_j_log_derivative(z, 10)
    assert np.all(np.isfinite(d))
    # the growing exp(-iz) branch dominates, so J'm/Jm -> -i
    assert d[0] == pytest.approx(-1j, abs=0.05)
