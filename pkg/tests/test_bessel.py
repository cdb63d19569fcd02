import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from singcon.bessel import (
    R_MAX,
    R_MIN,
    bessel_i,
    bessel_k,
    bessel_residual,
    invertibility_window,
    kernel_conditions,
    mode_order,
    scaled_decay,
    small_r_slope,
    window_kernel_conditions,
    wronskian,
)
from singcon.params import DomainError
from singcon.spectral import gamma_bound

F = Fraction


@pytest.mark.parametrize("alpha,kappa,m,nu", [(F(1, 4), 1, 0, 2), (F(1, 3), 3, -1, 3), (F(1, 4), 2, 1, 12)])
def test_mode_order_examples(alpha, kappa, m, nu):
    data = mode_order(alpha, kappa, m)
    assert data.nu == nu and data.lambda_m >= gamma_bound(alpha)


@pytest.mark.parametrize("alpha,kappa,lo,hi", [(F(1, 4), 2, F(-7, 2), F(9, 2)), (F(1, 3), 1, F(-1, 2), F(3, 2))])
def test_window_examples(alpha, kappa, lo, hi):
    w = invertibility_window(alpha, kappa)
    assert (w.delta_lo, w.delta_hi) == (lo, hi)
    assert w.midpoint == F(1, 2)


def test_kernel_condition_examples():
    assert kernel_conditions(0, 2).invertible
    c = kernel_conditions(-2, 1)
    assert not c.kernel_trivial and c.cokernel_trivial
    c = kernel_conditions(F(1, 2), 0)
    assert c.kernel_trivial and c.cokernel_trivial
    with pytest.raises(DomainError):
        kernel_conditions(0, -1)


@settings(max_examples=200, deadline=None)
@given(
    st.builds(F, st.integers(1, 99), st.integers(3, 200)).filter(lambda a: a < F(1, 2)),
    st.sampled_from([1, 2, 5, F(3, 2)]),
    st.fractions(min_value=-30, max_value=30),
)
def test_window_is_where_both_conditions_hold(alpha, kappa, delta):
    w = invertibility_window(alpha, kappa)
    c = window_kernel_conditions(alpha, kappa, delta)
    assert w.contains(delta) == (c.invertible and not w.is_endpoint(delta))
    for end in (w.delta_lo, w.delta_hi):
        assert window_kernel_conditions(alpha, kappa, end).invertible and w.is_endpoint(end)


def test_half_integer_closed_form():
    assert bessel_k(F(1, 2), 1) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), abs=1e-8)
    for r in (0.1, 2.5, 17.0):
        assert bessel_k(0.5, r) == pytest.approx(math.sqrt(math.pi / (2 * r)) * math.exp(-r), rel=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.floats(0, 12, allow_subnormal=False), st.floats(R_MIN, R_MAX))
def test_against_scipy_special(nu, r):
    assert bessel_k(nu, r) == pytest.approx(special.kv(nu, r), rel=1e-10)
    assert bessel_k(nu, r, 1) == pytest.approx(special.kvp(nu, r), rel=1e-9)
    assert bessel_i(nu, r) == pytest.approx(special.iv(nu, r), rel=1e-10)
    assert bessel_i(nu, r, 1) == pytest.approx(special.ivp(nu, r), rel=1e-9, abs=1e-300)


def test_ode_residual():
    assert bessel_residual(2, [0.5, 1, 2, 5]) <= 1e-6
    assert bessel_residual(3, np.linspace(0.5, 5, 10)) <= 1e-6


@pytest.mark.parametrize("nu", [0.5, 1, 3, 7.25])
def test_wronskian(nu):
    for r in (0.05, 1.0, 4.0, 20.0):
        assert wronskian(nu, r) == pytest.approx(-1 / r, rel=1e-8)


@pytest.mark.parametrize("nu", [1, 2, 3])
def test_small_r_slope(nu):
    assert small_r_slope(nu) == pytest.approx(-nu, rel=0.02)


def test_large_r_decay_is_bounded_and_slow():
    for nu in (0, 1, 3):
        values = [scaled_decay(nu, r) for r in np.linspace(10, 50, 41)]
        assert max(values) < 10 and min(values) > 0.5
        assert max(abs(a - b) for a, b in zip(values, values[1:])) < 0.1
        assert values[-1] == pytest.approx(math.sqrt(math.pi / 2), rel=0.1)


def test_domain_checks():
    with pytest.raises(DomainError):
        bessel_k(1, R_MAX * 2)
    with pytest.raises(DomainError):
        bessel_k(-1, 1)
    with pytest.raises(DomainError):
        bessel_i(1, 1, derivative=2)
