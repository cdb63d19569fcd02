"""Flat SU(2) connections on torus-knot complements with fixed meridional trace.

The knot group of ``T(p, q)`` is ``<u, v | u^p = v^q>``.  We use the
meridian ``mu = u^s v^-r`` with ``q s - p r = 1`` and the Seifert-framed
longitude ``lambda = u^p mu^(-pq)``.

An irreducible representation sends ``u`` and ``v`` to rotations by angles
``pi a/p`` and ``pi b/q`` (``0 < a < p``, ``0 < b < q``, ``a = b mod 2``) about
axes meeting at an angle ``phi``.  For each label ``(a, b)`` we solve
``tr rho(mu) = 2 cos(2 pi alpha)`` for ``phi`` in ``(0, pi)`` numerically.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .index import Kind
from .params import DomainError, Number, holonomy

UNIT_CIRCLE_TOL = 1e-9
PHI_SAMPLES = 256
PHI_EDGE = 1e-7
TWO_PI = 2 * math.pi


class DegenerateAlphaWarning(UserWarning):
    """``e^(4 pi i alpha)`` is an Alexander root; the abelian class is not isolated."""


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = int(self.p), int(self.q)
        if p < 2 or q < 2:
            raise DomainError("torus knot parameters must be at least 2")
        if math.gcd(p, q) != 1:
            raise DomainError(f"torus knot ({p},{q}) needs coprime parameters")
        p, q = min(p, q), max(p, q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def meridian_exponents(self) -> tuple[int, int]:
        """``(s, r)`` with ``q s - p r = 1`` and ``0 <= s < p``."""
        s = pow(self.q, -1, self.p)
        return s, (self.q * s - 1) // self.p

    def labels(self) -> list[tuple[int, int]]:
        return [
            (a, b)
            for a in range(1, self.p)
            for b in range(1, self.q)
            if (a - b) % 2 == 0
        ]


@dataclass(frozen=True)
class AlexanderPolynomial:
    """Integer polynomial, coefficients in ascending degree."""

    coefficients: tuple

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.coefficients)
        object.__setattr__(self, "coefficients", c)
        if sum(c) not in (1, -1):
            raise DomainError("Alexander polynomial must satisfy Delta(1) = +-1")
        rev = c[::-1]
        if rev != c and rev != tuple(-x for x in c):
            raise DomainError("Alexander polynomial must be palindromic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t):
        total = 0
        for coef in reversed(self.coefficients):
            total = total * t + coef
        return total

    def derivative(self, t):
        total = 0
        for n in range(self.degree, 0, -1):
            total = total * t + n * self.coefficients[n]
        return total


@dataclass(frozen=True)
class MeridionalHolonomy:
    alpha: Number

    @property
    def matrix(self) -> np.ndarray:
        z = cmath.exp(-2j * math.pi * float(self.alpha))
        return np.array([[z, 0], [0, z.conjugate()]])

    @property
    def trace(self) -> float:
        return 2 * math.cos(2 * math.pi * float(self.alpha))


@dataclass(frozen=True)
class FlatConnectionClass:
    kind: Kind
    meridian_angle: float
    longitude_angle: float
    rotation_data: Optional[tuple[int, int]]
    isolated: bool
    phi: Optional[float] = None
    relation_error: float = 0.0
    trace_error: float = 0.0


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division by a monic integer polynomial (ascending coefficients)."""
    num = list(num)
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * (len(num) - len(den) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + len(den) - 1]
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return quot


def _binomial_minus_one(n: int) -> list[int]:
    return [-1] + [0] * (n - 1) + [1]


def alexander_torus(K: TorusKnot) -> AlexanderPolynomial:
    """``(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1))``."""
    num = _poly_mul(_binomial_minus_one(K.p * K.q), _binomial_minus_one(1))
    den = _poly_mul(_binomial_minus_one(K.p), _binomial_minus_one(K.q))
    return AlexanderPolynomial(tuple(_poly_divexact(num, den)))


def _unit_circle_roots(delta: AlexanderPolynomial) -> list[complex]:
    raw = np.roots(delta.coefficients[::-1])
    out = []
    for t in raw:
        t = complex(t)
        for _ in range(4):
            dp = delta.derivative(t)
            if dp == 0:
                break
            t -= delta(t) / dp
        if abs(1 - abs(t)) < UNIT_CIRCLE_TOL:
            out.append(t)
    return out


def degenerate_alphas(K: TorusKnot) -> list[float]:
    """Holonomies ``alpha`` in ``(0, 1/2)`` with ``Delta(e^(4 pi i alpha)) = 0``, ascending."""
    delta = alexander_torus(K)
    alphas = []
    for t in _unit_circle_roots(delta):
        theta = cmath.phase(t) % TWO_PI
        alpha = theta / (4 * math.pi)
        if 0 < alpha < 0.5 and abs(delta(cmath.exp(4j * math.pi * alpha))) < UNIT_CIRCLE_TOL:
            alphas.append(alpha)
    alphas.sort()
    deduped: list[float] = []
    for a in alphas:
        if not deduped or a - deduped[-1] > 1e-7:
            deduped.append(a)
    return deduped


def degenerate_alpha_fractions(K: TorusKnot) -> list[Fraction]:
    """:func:`degenerate_alphas` snapped to denominators dividing ``2pq``.

    Torus-knot Alexander roots are roots of unity of order dividing ``pq``.
    """
    den = 2 * K.p * K.q
    out = []
    for a in degenerate_alphas(K):
        f = Fraction(round(a * den), den)
        if abs(float(f) - a) > 1e-9:
            raise ArithmeticError(f"Alexander root alpha={a} is not a {den}-th fraction")
        out.append(f)
    return out


def is_degenerate(alpha, K: TorusKnot) -> bool:
    """Whether ``e^(4 pi i alpha)`` is an Alexander root of ``K``.

    Exact for rational ``alpha``: ``e^(4 pi i alpha)`` has order equal to the
    reduced denominator of ``2 alpha``, and the torus-knot Alexander
    polynomial vanishes at a primitive ``n``-th root of unity exactly when
    ``n`` divides ``pq`` but neither ``p`` nor ``q``.
    """
    a = holonomy(alpha).alpha
    if isinstance(a, Fraction):
        n = (2 * a).denominator
        return (K.p * K.q) % n == 0 and K.p % n != 0 and K.q % n != 0
    return abs(alexander_torus(K)(cmath.exp(4j * math.pi * a))) < UNIT_CIRCLE_TOL


def abelian_class(alpha, K: TorusKnot) -> FlatConnectionClass:
    a = holonomy(alpha).alpha
    degenerate = is_degenerate(a, K)
    if degenerate:
        warnings.warn(
            f"alpha={a} is an Alexander root of T({K.p},{K.q}); abelian class not isolated",
            DegenerateAlphaWarning,
            stacklevel=2,
        )
    return FlatConnectionClass(Kind.ABELIAN, 2 * math.pi * float(a), 0.0, None, not degenerate)


# SU(2) as unit quaternions: 1, i, j, k as 2x2 complex matrices
_ONE = np.eye(2, dtype=complex)
_I = np.array([[1j, 0], [0, -1j]])
_J = np.array([[0, 1], [-1, 0]], dtype=complex)


def _rotation(angle: float, axis_angle: float) -> np.ndarray:
    """``cos(angle) + sin(angle) (cos(axis_angle) i + sin(axis_angle) j)``."""
    axis = math.cos(axis_angle) * _I + math.sin(axis_angle) * _J
    return math.cos(angle) * _ONE + math.sin(angle) * axis


def representation(K: TorusKnot, label: tuple[int, int], phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Images of ``u`` and ``v`` for rotation label ``(a, b)`` and axis angle ``phi``."""
    a, b = label
    return _rotation(math.pi * a / K.p, 0.0), _rotation(math.pi * b / K.q, phi)


def peripheral_images(K: TorusKnot, U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``rho(mu)`` and ``rho(lambda)``."""
    s, r = K.meridian_exponents
    mp = np.linalg.matrix_power
    M = mp(U, s) @ mp(V.conj().T, r)
    L = mp(U, K.p) @ mp(M.conj().T, K.p * K.q)
    return M, L


def _meridian_trace(K: TorusKnot, label: tuple[int, int], phi: float) -> float:
    U, V = representation(K, label, phi)
    return float(np.trace(peripheral_images(K, U, V)[0]).real)


def longitude_angle(M: np.ndarray, L: np.ndarray, alpha: float) -> float:
    """Angle ``y`` with ``rho(lambda) = diag(e^-iy, e^iy)`` in the frame where ``rho(mu) = diag(e^(-2 pi i alpha), ...)``."""
    target = cmath.exp(-2j * math.pi * alpha)
    vals, vecs = np.linalg.eig(M)
    v = vecs[:, int(np.argmin(np.abs(vals - target)))]
    v = v / np.linalg.norm(v)
    return (-cmath.phase(np.vdot(v, L @ v))) % TWO_PI


def irreducible_flat_set(K: TorusKnot, alpha) -> list[FlatConnectionClass]:
    """Irreducible flat classes with ``tr rho(mu) = 2 cos(2 pi alpha)``, ordered by label then ``phi``.

    Roots of the trace equation sitting on ``phi = 0`` or ``pi`` are
    reducible and dropped; they only occur at Alexander-root holonomies,
    which also trigger a :class:`DegenerateAlphaWarning`.
    """
    a = holonomy(alpha).alpha
    af = float(a)
    target = 2 * math.cos(2 * math.pi * af)
    degenerate = is_degenerate(a, K)
    if degenerate:
        warnings.warn(
            f"alpha={a} is an Alexander root of T({K.p},{K.q}); an irreducible arc ends here",
            DegenerateAlphaWarning,
            stacklevel=2,
        )
    phis = np.linspace(0.0, math.pi, PHI_SAMPLES + 1)
    classes = []
    for label in K.labels():
        f = [_meridian_trace(K, label, ph) - target for ph in phis]
        roots = []
        for i in range(PHI_SAMPLES):
            lo, hi = f[i], f[i + 1]
            if lo == 0 and 0 < i:
                roots.append(phis[i])
            elif lo * hi < 0:
                roots.append(brentq(
                    lambda ph: _meridian_trace(K, label, ph) - target,
                    phis[i], phis[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps,
                ))
        for phi in roots:
            # the trace is even about phi = 0 and pi, so endpoint roots are only
            # located to about sqrt(eps)
            if not PHI_EDGE < phi < math.pi - PHI_EDGE:
                continue
            U, V = representation(K, label, phi)
            M, L = peripheral_images(K, U, V)
            relation = float(np.linalg.norm(np.linalg.matrix_power(U, K.p) - np.linalg.matrix_power(V, K.q)))
            trace_err = abs(float(np.trace(M).real) - target)
            h = 1e-6
            slope = (_meridian_trace(K, label, phi + h) - _meridian_trace(K, label, phi - h)) / (2 * h)
            classes.append(FlatConnectionClass(
                kind=Kind.IRREDUCIBLE,
                meridian_angle=2 * math.pi * af,
                longitude_angle=longitude_angle(M, L, af),
                rotation_data=label,
                isolated=not degenerate and abs(slope) > 1e-9,
                phi=float(phi),
                relation_error=relation,
                trace_error=trace_err,
            ))
    return classes


def flat_set(K: TorusKnot, alpha) -> list[FlatConnectionClass]:
    """The whole critical set: the abelian class followed by the irreducible ones."""
    return [abelian_class(alpha, K)] + irreducible_flat_set(K, alpha)


def pillowcase_coords(c: FlatConnectionClass, K: TorusKnot | None = None) -> tuple[float, float]:
    """Canonical representative of ``(x, y) ~ (-x, -y)`` with ``x`` in ``[0, pi]``."""
    eps = 1e-12
    x, y = c.meridian_angle % TWO_PI, c.longitude_angle % TWO_PI
    if x > math.pi + eps:
        x, y = TWO_PI - x, (TWO_PI - y) % TWO_PI
    if abs(x) <= eps or abs(x - math.pi) <= eps:
        y = min(y, (TWO_PI - y) % TWO_PI)
    if y <= eps or TWO_PI - y <= eps:
        y = 0.0
    return x, y
