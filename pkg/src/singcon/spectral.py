"""Boundary spectra of the model edge Laplacians near the singular locus.

Two models are covered.  The scalar model has indicial roots
``+-kappa*|m/alpha + 2|``; the 1-form model couples two circle modes
``(m1, m2)`` and its roots solve a quartic that is quadratic in ``zeta**2``.
With ``x = 2 + m1/alpha`` and ``y = 2 + m2/alpha`` the quartic is

    zeta**4 - (2 + kappa**2 (x**2 + y**2)) zeta**2
            + (1 + kappa**2 (x**2 + y**2) + kappa**4 x**2 y**2 - 4 kappa**2 x y)

whose constant term equals ``(kappa**2 x y - 1)**2 + kappa**2 (x - y)**2``,
so it is never negative.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .params import DomainError, Number, as_number, cone, exact_sqrt, holonomy, positive

DEFAULT_TOLERANCE = 1e-10
MIN_SEARCH_CAP = 256  # largest box used only to pin down the global minimum

Zeta = Union[Fraction, float, complex]
Mode = Union[int, tuple]


@dataclass(frozen=True)
class CircleEigenvalue:
    """Eigenvalue ``i * imag`` of the twisted circle operator on mode ``m``."""

    m: int
    imag: Number

    def __complex__(self) -> complex:
        return complex(0.0, float(self.imag))


@dataclass(frozen=True)
class IndicialRoot:
    """One root ``zeta`` on one mode, with its multiplicity within that mode.

    ``exact`` is true when ``zeta`` is the root itself rather than an
    approximation; a ``Fraction`` with ``exact`` false is a high-precision
    rational approximation of an irrational root.
    """

    zeta: Zeta
    mode: Mode
    form_degree: int
    multiplicity: int = 1
    residual: float = 0.0
    exact: bool = False

    def sort_key(self) -> tuple:
        mode = self.mode if isinstance(self.mode, tuple) else (self.mode,)
        return (float(self.zeta.real), float(self.zeta.imag), mode)

    @property
    def abs_re(self) -> Number:
        return abs(self.zeta.real)


@dataclass(frozen=True)
class QuarticData:
    """The quartic attached to a 1-form mode pair.

    ``coefficients`` are listed from the ``zeta**4`` term down to the
    constant term.
    """

    x: Number
    y: Number
    rho: Number
    coefficients: tuple

    @property
    def linear_coefficient(self) -> Number:
        # coefficient of zeta**2, sign flipped: the "a" of the quadratic in zeta**2
        return -self.coefficients[2]

    @property
    def constant(self) -> Number:
        return self.coefficients[4]


@dataclass(frozen=True)
class SpectrumWindow:
    """Outcome of a gap search for the 1-form model on ``(-tau, tau)``.

    ``status`` is ``"holds"`` (no root inside and the unsearched modes are
    provably outside), ``"violated"`` (a root was found inside), or
    ``"uncertified"`` (nothing found, but the search box was too small for
    the tail estimate).  ``min_abs_re`` is over the searched box; it is the
    minimum over all modes when ``min_is_global`` is set.
    """

    tau: Number
    roots_inside: tuple
    min_abs_re: Number
    argmin_mode: tuple
    search_bound: int
    tail_certified: bool
    status: str
    min_is_global: bool = False

    @property
    def holds(self) -> bool:
        return self.status == "holds"


@dataclass(frozen=True)
class KappaSelection:
    kappa: Number
    kappa_ceiling: int
    form_degree: int
    certified: bool = True


@dataclass(frozen=True)
class DistortionBound:
    value: Number

    def __post_init__(self) -> None:
        if not 0 <= self.value < 1:
            raise DomainError(f"distortion bound {self.value} outside [0, 1)")


def _sorted_roots(roots: Iterable[IndicialRoot]) -> list[IndicialRoot]:
    return sorted(roots, key=IndicialRoot.sort_key)


def _poly_residual(zeta: Zeta, coefficients: tuple) -> float:
    """``|p(zeta)|`` evaluated exactly from the stored root.

    Root and coefficients are brought to common denominators and Horner's
    rule runs on Gaussian integers, so the only rounding is the final
    conversion to ``float``.
    """
    zr, zi = Fraction(zeta.real), Fraction(zeta.imag)
    d = zr.denominator * zi.denominator // math.gcd(zr.denominator, zi.denominator)
    nr, ni = zr.numerator * (d // zr.denominator), zi.numerator * (d // zi.denominator)
    coefs = [Fraction(c) for c in coefficients]
    lcm = 1
    for c in coefs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    # after step j the accumulator holds d**j * lcm * (partial Horner value)
    ar, ai = 0, 0
    power = 1
    for c in coefs:
        scaled = c.numerator * (lcm // c.denominator) * power
        ar, ai = ar * nr - ai * ni + scaled, ar * ni + ai * nr
        power *= d
    denom = Fraction(lcm * power // d)
    return math.hypot(float(ar / denom), float(ai / denom))


def circle_spectrum(alpha, kappa, m_range: Iterable[int]) -> list[CircleEigenvalue]:
    """Spectrum ``i*kappa*(m/alpha + 2)`` of the twisted circle operator, one entry per ``m``."""
    c = cone(alpha, kappa)
    ms = list(m_range)
    if not ms:
        raise DomainError("m_range must be nonempty")
    return [CircleEigenvalue(int(m), c.kappa * (m / c.alpha + 2)) for m in ms]


def gamma_bound(alpha) -> Number:
    """Distance of ``{m/alpha + 2}`` from zero: ``min(2, (1 - 2 alpha)/alpha)``."""
    a = holonomy(alpha).alpha
    return min(as_number(2), (1 - 2 * a) / a)


def mode_lambda(alpha, m: int) -> Number:
    a = holonomy(alpha).alpha
    return abs(m / a + 2)


def _modes_below(alpha: Number, bound: Number) -> range:
    """Integers ``m`` that can satisfy ``|m/alpha + 2| < bound`` (a superset; callers filter)."""
    lo = math.floor(-2 * alpha - bound * alpha) - 1
    hi = math.ceil(-2 * alpha + bound * alpha) + 1
    return range(lo, hi + 1)


def scalar_boundary_spectrum(alpha, kappa, tau) -> list[IndicialRoot]:
    """All roots ``+-kappa*lambda_m`` of the scalar model with ``|zeta| < tau``.

    Each contributing ``m`` yields one root of each sign, so a value reached
    by two different modes shows up twice.
    """
    c = cone(alpha, kappa)
    tau = positive("tau", tau)
    roots = []
    for m in _modes_below(c.alpha, tau / c.kappa):
        value = c.kappa * abs(m / c.alpha + 2)
        if value < tau:
            coefficients = (1, 0, -value * value)
            for zeta in (value, -value):
                roots.append(IndicialRoot(
                    zeta, m, 0, 1, _poly_residual(zeta, coefficients), isinstance(zeta, Fraction)
                ))
    return _sorted_roots(roots)


def multiplicities(roots: Iterable[IndicialRoot]) -> dict:
    """Collapse a root list to ``{zeta: total multiplicity}``."""
    out: dict = {}
    for r in roots:
        out[r.zeta] = out.get(r.zeta, 0) + r.multiplicity
    return out


def quartic_data(alpha, kappa, mode: tuple[int, int]) -> QuarticData:
    c = cone(alpha, kappa)
    m1, m2 = mode
    k2 = c.kappa * c.kappa
    x = 2 + m1 / c.alpha
    y = 2 + m2 / c.alpha
    rho = k2 * (k2 * (x * x - y * y) ** 2 + 16 * x * y)
    a = 2 + k2 * (x * x + y * y)
    const = (k2 * x * y - 1) ** 2 + k2 * (x - y) ** 2
    zero = as_number(0)
    return QuarticData(x, y, rho, (as_number(1), zero, -a, zero, const))


def _square_roots_of(w, multiplicity: int) -> list[tuple[Zeta, int]]:
    """The two square roots ``+-sqrt(w)`` (principal branch first) with multiplicities."""
    if isinstance(w, Fraction):
        s = exact_sqrt(w)
        if s is None:
            s = math.sqrt(w)
    elif isinstance(w, complex):
        s = cmath.sqrt(w)
    else:
        s = math.sqrt(w)
    if s == 0:
        return [(s, 2 * multiplicity)]
    return [(s, multiplicity), (-s, multiplicity)]


def _refine_real(zeta: float, a, const, bits: int = 120) -> Fraction:
    """Newton steps in exact arithmetic on the stored coefficients.

    Near a small real root of a quartic with huge coefficients, even the
    correctly rounded double leaves a residual of order ``a * zeta**2 * ulp``;
    two exact steps from the double reach far below that, and the result is
    rounded to ``bits`` significant bits to keep the denominator small.
    """
    a, const = Fraction(a), Fraction(const)
    z = Fraction(zeta)
    for _ in range(2):
        w = z * z
        dp = 4 * z * w - 2 * a * z
        if dp == 0:
            break
        z -= (w * w - a * w + const) / dp
    scale = 2 ** max(0, bits - int(abs(z)).bit_length())
    return Fraction(round(z * scale), scale)


def _polish(zeta: complex, a: float, const: float) -> complex:
    z = complex(zeta)
    for _ in range(3):
        w = z * z
        dp = 4 * z * w - 2 * a * z
        if dp == 0:
            break
        z -= (w * w - a * w + const) / dp
    return z


def oneform_indicial_roots(
    alpha, kappa, mode: tuple[int, int], tolerance: float = DEFAULT_TOLERANCE
) -> tuple[QuarticData, list[IndicialRoot]]:
    """Quartic data and the four indicial roots of the 1-form model on ``mode``.

    ``zeta**2 = (a +- sqrt(rho)) / 2`` with ``a = 2 + kappa**2 (x**2 + y**2)``.
    Rational inputs whose discriminant and roots are perfect squares come out
    as exact ``Fraction`` values.  A real root whose double rounding alone
    breaks the residual bound is refined to a rational approximation.  Negative discriminants go through the
    principal complex square root.  The smaller real ``zeta**2`` is taken as
    ``const / larger`` to avoid cancellation.
    """
    q = quartic_data(alpha, kappa, mode)
    a, rho, const = q.linear_coefficient, q.rho, q.constant
    squares: list[tuple] = []
    if rho < 0:
        b = complex(0.0, math.sqrt(-rho))
        w1 = (float(a) + b) / 2
        squares = [(w1, 1), (w1.conjugate(), 1)]
    else:
        b = exact_sqrt(rho) if isinstance(rho, Fraction) else None
        if b is not None:
            big, small = (a + b) / 2, (a - b) / 2
        else:
            big = (a + math.sqrt(rho)) / 2
            small = const / big
        squares = [(big, 2)] if rho == 0 else [(big, 1), (small, 1)]

    roots = []
    for w, mult in squares:
        for zeta, m in _square_roots_of(w, mult):
            exact = isinstance(zeta, Fraction)
            residual = _poly_residual(zeta, q.coefficients)
            if residual > tolerance * (1 + abs(zeta) ** 4):
                if isinstance(zeta, complex):
                    zeta = _polish(zeta, float(a), float(const))
                else:
                    zeta = _refine_real(float(zeta), a, const)
                residual = _poly_residual(zeta, q.coefficients)
                if residual > tolerance * (1 + abs(zeta) ** 4):
                    raise ArithmeticError(
                        f"indicial root {zeta} of mode {mode} has residual {residual:.3g}"
                    )
            roots.append(IndicialRoot(zeta, tuple(mode), 1, m, residual, exact))
    return q, _sorted_roots(roots)


def _axis_values(alpha: Number, bound: int) -> np.ndarray:
    ms = np.arange(-bound, bound + 1)
    if isinstance(alpha, Fraction):
        p, q = alpha.numerator, alpha.denominator
        # x = (2p + m q)/p, one rounding only
        return (2 * p + ms * q) / p
    return 2.0 + ms / float(alpha)


def _min_abs_re_grid(alpha: Number, kappa: Number, bound: int):
    """Smallest ``|Re zeta|`` and largest ``|Re zeta|`` of the two root pairs, per mode, in floats."""
    xs = _axis_values(alpha, bound)
    x, y = np.meshgrid(xs, xs, indexing="ij")
    k2 = float(kappa) ** 2
    a = 2.0 + k2 * (x * x + y * y)
    const = (k2 * x * y - 1.0) ** 2 + k2 * (x - y) ** 2
    rho = k2 * (k2 * (x * x - y * y) ** 2 + 16.0 * x * y)
    real = rho >= 0
    sq = np.sqrt(np.abs(rho))
    big = (a + sq) / 2
    small = np.where(real, const / big, 0.0)
    modulus = np.sqrt(a * a + np.where(real, 0.0, -rho)) / 2
    complex_re = np.sqrt((modulus + a / 2) / 2)
    lo = np.where(real, np.sqrt(small), complex_re)
    hi = np.where(real, np.sqrt(big), complex_re)
    return lo, hi


def tail_certified(alpha, kappa, tau, search_bound: int) -> bool:
    """Whether modes outside ``|m1|, |m2| <= search_bound`` provably keep ``|Re zeta| >= tau``.

    With ``p = kappa*|x|``, ``q = kappa*|y|`` the smaller root obeys
    ``zeta**2 >= const/a``, and

        const/a = (1 + q**2) - (4pq' + (1 + q**2)**2) / (p**2 + 2 + q**2)

    where ``q' = +-q`` follows the sign of ``xy`` (worst case ``+q``).  For
    ``p >= q`` this is at least ``(q**2 - 3)/2``; for large ``p`` it is at
    least ``1 + q**2 - 4q/p - (1 + q**2)**2/p**2``.  Complex roots have
    ``|Re zeta|**2 >= a/2``.  All three bounds are checked in the arithmetic
    of the inputs (exact for rationals).
    """
    c = cone(alpha, kappa)
    tau = positive("tau", tau)
    if search_bound < 0:
        return False
    k2 = c.kappa * c.kappa
    t2 = tau * tau
    edge = (search_bound + 1) / c.alpha - 2  # smallest |x| with |m| > search_bound
    p2 = k2 * edge * edge
    if (p2 - 3) / 2 < t2:
        return False
    # q values whose (q**2 - 3)/2 bound is not enough on its own
    qbound = math.sqrt(float(2 * t2 + 3)) / float(c.kappa)
    for m in _modes_below(c.alpha, qbound):
        yabs = abs(m / c.alpha + 2)
        q2 = k2 * yabs * yabs
        if (q2 - 3) / 2 >= t2:
            continue
        strip = 1 + q2 - 4 * yabs / edge - (1 + q2) ** 2 / p2
        if strip < t2:
            return False
    return True


def required_search_bound(alpha, kappa, tau, max_bound: int = 1 << 20) -> int | None:
    """Smallest search bound that certifies the tail, or ``None`` if none up to ``max_bound`` does."""
    if tail_certified(alpha, kappa, tau, 0):
        return 0
    hi = 1
    while not tail_certified(alpha, kappa, tau, hi):
        hi *= 2
        if hi > max_bound:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_certified(alpha, kappa, tau, mid):
            hi = mid
        else:
            lo = mid
    return hi


def _box_minimum(alpha, kappa, bound: int, tolerance: float):
    """Float grid of smallest ``|Re zeta|`` per mode, plus the exact box minimum.

    Near-ties on the grid are resolved exactly; equal minima go to the mode
    with the smallest ``|m1| + |m2|``, then lexicographically.
    """
    lo, _ = _min_abs_re_grid(alpha, kappa, bound)
    floor = float(lo.min())
    best = None
    for i, j in zip(*np.nonzero(lo <= floor + 1e-9 * (1 + floor))):
        mode = (int(i) - bound, int(j) - bound)
        _, roots = oneform_indicial_roots(alpha, kappa, mode, tolerance)
        key = (min(r.abs_re for r in roots), abs(mode[0]) + abs(mode[1]), mode)
        if best is None or key < best:
            best = key
    value, _, mode = best
    return lo, mode, value


def oneform_spectrum_gap(
    alpha, kappa, tau, search_bound: int | None = None, tolerance: float = DEFAULT_TOLERANCE
) -> SpectrumWindow:
    """Search the 1-form model for indicial roots with ``|Re zeta| < tau``.

    Every mode with ``|m1|, |m2| <= search_bound`` is solved; the remaining
    modes are handled by :func:`tail_certified`.  Without an explicit bound
    the box grows until the tail provably stays above both ``tau`` and the
    smallest ``|Re zeta|`` found, so the reported minimum is global when that
    happens within ``MIN_SEARCH_CAP`` (if the tail can never be certified a
    modest box is used).  An explicit bound is
    taken as given.
    """
    c = cone(alpha, kappa)
    tau = positive("tau", tau)
    explicit = search_bound is not None
    if not explicit:
        search_bound = required_search_bound(c.alpha, c.kappa, tau)
        if search_bound is None:
            search_bound = 16
    if search_bound < 0:
        raise DomainError("search_bound must be nonnegative")

    lo, argmin, min_abs_re = _box_minimum(c.alpha, c.kappa, search_bound, tolerance)
    min_is_global = min_abs_re == 0
    while not explicit and not min_is_global:
        need = required_search_bound(c.alpha, c.kappa, min_abs_re, MIN_SEARCH_CAP)
        if need is not None and need <= search_bound:
            min_is_global = True
            break
        # a wider box may expose a smaller minimum that the tail can certify
        wider = need if need is not None else 2 * search_bound + 1
        if wider > MIN_SEARCH_CAP:
            break
        search_bound = wider
        lo, argmin, min_abs_re = _box_minimum(c.alpha, c.kappa, search_bound, tolerance)
        min_is_global = min_abs_re == 0

    # slack keeps float misclassification near tau from hiding a root
    slack = 1e-9 * (1 + float(tau))
    inside = []
    for ii, jj in zip(*np.nonzero(lo < float(tau) + slack)):
        mode = (int(ii) - search_bound, int(jj) - search_bound)
        _, roots = oneform_indicial_roots(c.alpha, c.kappa, mode, tolerance)
        inside.extend(r for r in roots if r.abs_re < tau)

    certified = tail_certified(c.alpha, c.kappa, tau, search_bound)
    if inside:
        status = "violated"
    elif certified:
        status = "holds"
    else:
        status = "uncertified"
    return SpectrumWindow(
        tau=tau,
        roots_inside=tuple(_sorted_roots(inside)),
        min_abs_re=min_abs_re,
        argmin_mode=argmin,
        search_bound=search_bound,
        tail_certified=certified,
        status=status,
        min_is_global=min_is_global,
    )


def select_kappa(alpha, tau, form_degree: int = 0, rel_tol: float = 1e-6) -> KappaSelection:
    """Smallest cone parameter clearing ``(-tau, tau)`` of indicial roots.

    Degree 0 is closed form: ``tau/gamma``; the window is open, so that value
    itself already works.  Degree 1 brackets the sharp-cone regime (a
    certified ``kappa`` above, a non-certified one below) and bisects to
    relative width ``rel_tol``, returning the certified end.
    """
    a = holonomy(alpha).alpha
    tau = positive("tau", tau)
    if form_degree == 0:
        kappa = tau / gamma_bound(a)
        return KappaSelection(kappa, max(1, math.ceil(kappa)), 0)
    if form_degree != 1:
        raise DomainError("form_degree must be 0 or 1")

    def clears(k: float) -> bool:
        return oneform_spectrum_gap(a, k, tau).holds

    floor_kappa = float(a) * (1 + 1e-9)
    hi = max(float((tau + 1) / gamma_bound(a)), 2 * float(a))
    while not clears(hi):
        hi *= 2
    lo = hi
    while True:
        lo *= 0.9
        if lo <= floor_kappa:
            lo = floor_kappa
            if clears(lo):
                hi = lo
            break
        if not clears(lo):
            break
        hi = lo
    while hi - lo > rel_tol * hi:
        mid = (lo + hi) / 2
        if clears(mid):
            hi = mid
        else:
            lo = mid
    ceiling = max(1, math.ceil(hi))
    while not clears(ceiling):
        ceiling += 1
    return KappaSelection(hi, ceiling, 1)


def conformal_distortion(alpha, kappa) -> DistortionBound:
    """Pointwise bound ``(kappa - alpha)/(kappa + alpha)`` on the conformal change to the cone metric.

    ``kappa == alpha`` is allowed here (cone angle ``2*pi``, bound 0).
    """
    a = holonomy(alpha).alpha
    kappa = as_number(kappa)
    if kappa < a:
        raise DomainError("kappa must be at least alpha")
    return DistortionBound((kappa - a) / (kappa + a))


def cone_interp_distortion(kappa, kappa_prime) -> DistortionBound:
    """Bound ``(kappa - kappa')/(kappa + kappa')`` for widening the cone angle from ``alpha/kappa`` to ``alpha/kappa'``."""
    kappa = as_number(kappa)
    kappa_prime = positive("kappa_prime", kappa_prime)
    if kappa_prime > kappa:
        raise DomainError("kappa_prime must not exceed kappa")
    return DistortionBound((kappa - kappa_prime) / (kappa + kappa_prime))
