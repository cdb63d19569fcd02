r"""Bessel-type model operator on the half-line times the circle.

Separating variables on the ``m``-th circle mode leaves the modified Bessel
operator

.. math::
    -r^2 u'' - r u' + (r^2 + \nu^2) u, \qquad \nu = \kappa \lambda_m,

whose decaying solution is :math:`K_\nu` and growing one :math:`I_\nu`.
Kernel and cokernel of the model on :math:`r^\delta L^2` follow from the
behaviour :math:`K_\nu \sim r^{-\nu}` at the origin.

:math:`K_\nu` is evaluated from :math:`\int_0^\infty e^{-r\cosh t}\cosh(\nu t)\,dt`
by adaptive quadrature and :math:`I_\nu` from its power series.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .params import DomainError, Number, as_number, cone
from .spectral import gamma_bound

R_MIN, R_MAX = 1e-3, 50.0
FD_STEP = 1e-3  # relative to r


class QuadratureError(ArithmeticError):
    """Adaptive quadrature for K_nu did not reach the requested accuracy."""


@dataclass(frozen=True)
class ModeData:
    m: int
    lambda_m: Number
    nu: Number


@dataclass(frozen=True)
class KernelConditions:
    kernel_trivial: bool
    cokernel_trivial: bool

    @property
    def invertible(self) -> bool:
        return self.kernel_trivial and self.cokernel_trivial


@dataclass(frozen=True)
class WeightWindow:
    """Open interval of weights ``delta`` on which the model is invertible."""

    delta_lo: Number
    delta_hi: Number

    @property
    def midpoint(self) -> Number:
        return (self.delta_lo + self.delta_hi) / 2

    def contains(self, delta) -> bool:
        delta = as_number(delta)
        return self.delta_lo < delta < self.delta_hi

    def is_endpoint(self, delta) -> bool:
        # Fredholmness fails exactly here
        delta = as_number(delta)
        return delta == self.delta_lo or delta == self.delta_hi


def mode_order(alpha, kappa, m: int) -> ModeData:
    c = cone(alpha, kappa)
    lam = abs(m / c.alpha + 2)
    return ModeData(int(m), lam, c.kappa * lam)


def invertibility_window(alpha, kappa) -> WeightWindow:
    c = cone(alpha, kappa)
    half = as_number("1/2")
    width = c.kappa * gamma_bound(c.alpha)
    return WeightWindow(half - width, half + width)


def kernel_conditions(delta, nu) -> KernelConditions:
    """Per-mode kernel/cokernel triviality on ``r**delta L^2``.

    The endpoints ``delta = 1/2 -+ nu`` count as trivial (non-strict
    inequalities), even though the operator is not Fredholm there; use
    :meth:`WeightWindow.is_endpoint` to detect them.
    """
    delta, nu = as_number(delta), as_number(nu)
    if nu < 0:
        raise DomainError("nu must be nonnegative")
    half = as_number("1/2")
    return KernelConditions(delta >= half - nu, delta <= half + nu)


def window_kernel_conditions(alpha, kappa, delta) -> KernelConditions:
    """Kernel conditions for the worst mode, ``nu = kappa * gamma``."""
    c = cone(alpha, kappa)
    return kernel_conditions(delta, c.kappa * gamma_bound(c.alpha))


def _check_r(r: float) -> float:
    r = float(r)
    if not R_MIN <= r <= R_MAX:
        raise DomainError(f"r = {r} outside [{R_MIN}, {R_MAX}]")
    return r


def _scaled_k_integral(nu: float, r: float, weight: int, epsrel: float) -> float:
    """``e**r * integral of cosh(t)**weight * e**(-r cosh t) * cosh(nu t)``, rescaled by its peak."""

    def log_growing(t: float) -> float:
        return nu * t + weight * math.log(math.cosh(t)) - 2 * r * math.sinh(t / 2) ** 2

    def log_decaying(t: float) -> float:
        return -nu * t + weight * math.log(math.cosh(t)) - 2 * r * math.sinh(t / 2) ** 2

    peak = math.asinh((nu + weight) / r)
    top = max(log_growing(peak), log_growing(0.0))
    upper = max(peak, 1.0)
    while log_growing(upper) > top - 60:
        upper *= 1.5

    def integrand(t: float) -> float:
        return 0.5 * (math.exp(log_growing(t) - top) + math.exp(log_decaying(t) - top))

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, err = quad(
                integrand, 0.0, upper, epsabs=0.0, epsrel=epsrel, limit=400,
                points=[peak] if 0 < peak < upper else None,
            )
        except IntegrationWarning as exc:
            raise QuadratureError(f"K_{nu}({r}): {exc}") from None
    if not err <= 100 * epsrel * abs(value):
        raise QuadratureError(f"K_{nu}({r}): error estimate {err:.3g} for value {value:.3g}")
    return value * math.exp(top)


def _k(nu: float, r: float, derivative: int = 0, epsrel: float = 2e-14) -> float:
    value = _scaled_k_integral(nu, r, derivative, epsrel) * math.exp(-r)
    return -value if derivative else value


def _i(nu: float, r: float, derivative: int = 0) -> float:
    half = r / 2
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1))
    total = term if derivative == 0 else term * nu / r
    q = half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        contrib = term if derivative == 0 else term * (2 * k + nu) / r
        total += contrib
        if k > half and contrib <= 1e-17 * abs(total):
            return total


def _check_order(nu, derivative: int) -> float:
    nu = float(nu)
    if not nu >= 0:
        raise DomainError("nu must be nonnegative")
    if derivative not in (0, 1):
        raise DomainError("derivative must be 0 or 1")
    return nu


def bessel_k(nu, r, derivative: int = 0, epsrel: float = 2e-14) -> float:
    """Modified Bessel function of the second kind (``derivative=1`` for ``K_nu'``)."""
    return _k(_check_order(nu, derivative), _check_r(r), derivative, epsrel)


def bessel_i(nu, r, derivative: int = 0) -> float:
    """Modified Bessel function of the first kind from its power series."""
    return _i(_check_order(nu, derivative), _check_r(r), derivative)


def bessel_residual(nu, r_samples: Iterable[float], relative: bool = False) -> float:
    """Largest ODE residual of ``K_nu`` and ``I_nu`` over ``r_samples``.

    The residual is ``r**2 u'' + r u' - (r**2 + nu**2) u`` with ``u'`` and
    ``u''`` from 5-point central differences at step ``1e-3 * r``; the
    3-point stencil stalls around 1e-5 in double precision.
    """
    nu = _check_order(nu, 0)
    worst = 0.0
    for r in r_samples:
        r = _check_r(r)
        h = FD_STEP * r
        grid = [r + j * h for j in (-2, -1, 0, 1, 2)]
        for fn in (_k, _i):
            u = [fn(nu, s) for s in grid]
            d1 = (u[0] - 8 * u[1] + 8 * u[3] - u[4]) / (12 * h)
            d2 = (-u[0] + 16 * u[1] - 30 * u[2] + 16 * u[3] - u[4]) / (12 * h * h)
            res = abs(r * r * d2 + r * d1 - (r * r + nu * nu) * u[2])
            if relative:
                res /= abs(u[2])
            worst = max(worst, res)
    return worst


def wronskian(nu, r) -> float:
    """``I_nu K_nu' - I_nu' K_nu``; equals ``-1/r``."""
    return bessel_i(nu, r) * bessel_k(nu, r, 1) - bessel_i(nu, r, 1) * bessel_k(nu, r)


def small_r_slope(nu, r_lo: float = 1e-3, r_hi: float = 1e-2, samples: int = 12) -> float:
    """Least-squares slope of ``log K_nu`` against ``log r`` near the origin."""
    rs = np.geomspace(r_lo, r_hi, samples)
    logs = [math.log(bessel_k(nu, r)) for r in rs]
    return float(np.polyfit(np.log(rs), logs, 1)[0])


def scaled_decay(nu, r) -> float:
    """``K_nu(r) * e**r * sqrt(r)``, which tends to ``sqrt(pi/2)``."""
    r = _check_r(r)
    return _scaled_k_integral(_check_order(nu, 0), r, 0, 2e-14) * math.sqrt(r)
