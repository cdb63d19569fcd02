"""Independent reference computations used by the tests.

Each oracle takes a different route from the library: brute-force
enumeration, generic polynomial root finders, scipy special functions, or
symbolic algebra.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import sympy


def gamma_brute(alpha: Fraction, span: int = 10**6) -> Fraction:
    """``min_m |m/alpha + 2|`` over ``|m| <= span`` in integer arithmetic."""
    p, q = alpha.numerator, alpha.denominator
    ms = np.arange(-span, span + 1, dtype=np.int64)
    best = int(np.abs(ms * q + 2 * p).min())
    return Fraction(best, p)


def scalar_roots_brute(alpha: Fraction, kappa, tau, span: int = 100) -> list:
    """Sorted ``+-kappa |m/alpha + 2|`` below ``tau``, one per contributing ``m``."""
    out = []
    for m in range(-span, span + 1):
        value = kappa * abs(m / alpha + 2)
        if value < tau:
            out += [value, -value]
    return sorted(out)


def quartic_coefficients(alpha, kappa, m1: int, m2: int) -> list:
    """Coefficients of the determinant of the 2x2 indicial matrix, via sympy.

    Diagonal entries ``zeta**2 - 1 - kappa**2 x**2`` (resp. ``y``), off-diagonal
    ``2i kappa y`` and ``-2i kappa x``.
    """
    z = sympy.Symbol("z")
    k = sympy.nsimplify(kappa)
    a = sympy.nsimplify(alpha)
    x, y = 2 + m1 / a, 2 + m2 / a
    matrix = sympy.Matrix([
        [z**2 - 1 - k**2 * x**2, 2 * sympy.I * k * y],
        [-2 * sympy.I * k * x, z**2 - 1 - k**2 * y**2],
    ])
    det = sympy.expand(matrix.det())
    return [sympy.Rational(c) for c in sympy.Poly(det, z).all_coeffs()]


def quartic_roots_exact(alpha, kappa, m1: int, m2: int) -> list:
    """Exact roots with multiplicity, as sympy expressions."""
    z = sympy.Symbol("z")
    poly = sympy.Poly(quartic_coefficients(alpha, kappa, m1, m2), z)
    out = []
    for root, mult in sympy.roots(poly).items():
        out += [root] * mult
    return out


def quartic_roots_numpy(alpha, kappa, m1: int, m2: int) -> np.ndarray:
    """Companion-matrix roots of the quartic in ``zeta`` (not in ``zeta**2``)."""
    k2 = float(kappa) ** 2
    x, y = 2 + m1 / float(alpha), 2 + m2 / float(alpha)
    a = 2 + k2 * (x * x + y * y)
    c = 1 + k2 * (x * x + y * y) + k2 * k2 * x * x * y * y - 4 * k2 * x * y
    return np.roots([1.0, 0.0, -a, 0.0, c])


def matched(ours, theirs, tol: float) -> bool:
    """Multiset equality of complex numbers up to ``tol`` (greedy nearest match)."""
    pool = [complex(t) for t in theirs]
    for z in ours:
        z = complex(z)
        j = min(range(len(pool)), key=lambda i: abs(pool[i] - z), default=None)
        if j is None or abs(pool[j] - z) > tol * (1 + abs(z)):
            return False
        pool.pop(j)
    return not pool


def alexander_sympy(p: int, q: int) -> list[int]:
    t = sympy.Symbol("t")
    quotient, remainder = sympy.div((t ** (p * q) - 1) * (t - 1), (t**p - 1) * (t**q - 1), t)
    assert remainder == 0
    return [int(c) for c in reversed(sympy.Poly(quotient, t).all_coeffs())]


def alexander_unit_alphas(p: int, q: int) -> list[float]:
    """Holonomies with ``e^{4 pi i alpha}`` a root, from numpy roots of the sympy polynomial."""
    coeffs = alexander_sympy(p, q)
    roots = np.roots(list(reversed(coeffs)))
    out = set()
    for r in roots:
        if abs(abs(r) - 1) < 1e-6:
            theta = math.atan2(r.imag, r.real) % (2 * math.pi)
            alpha = theta / (4 * math.pi)
            if 0 < alpha < 0.5:
                out.add(round(alpha, 12))
    return sorted(out)
