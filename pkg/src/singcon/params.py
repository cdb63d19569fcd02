"""Holonomy and cone parameters, plus the exact/inexact number plumbing.

Values stay :class:`fractions.Fraction` whenever the caller hands us
rationals (ints count), and fall back to ``float`` otherwise.  Mixing the
two degrades to ``float`` through ordinary Python arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")
_INTEGER = re.compile(r"^\s*[+-]?\d+\s*$")


class DomainError(ValueError):
    """A parameter lies outside the domain where an operation is defined."""


def parse_number(text: str) -> Number:
    """Parse ``"p/q"`` or an integer literal exactly, anything else as a float."""
    m = _RATIONAL.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise DomainError(f"malformed rational {text!r}: zero denominator")
        return Fraction(int(m.group(1)), den)
    if _INTEGER.match(text):
        return Fraction(int(text))
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"malformed number {text!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"non-finite number {text!r}")
    return value


def as_number(x) -> Number:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_number(x)
    value = float(x)
    if not math.isfinite(value):
        raise DomainError(f"non-finite value {x!r}")
    return value


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Rational square root of ``x`` if it exists, else ``None``."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class HolonomyParam:
    """Holonomy parameter ``alpha`` in the open interval (0, 1/2)."""

    alpha: Number

    def __post_init__(self) -> None:
        alpha = as_number(self.alpha)
        if not 0 < alpha < Fraction(1, 2):
            raise DomainError("alpha must lie in (0, 1/2)")
        object.__setattr__(self, "alpha", alpha)

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction)


@dataclass(frozen=True)
class ConeParam:
    """Cone parameter ``kappa`` paired with its holonomy; cone angle is 2*pi*alpha/kappa."""

    holonomy: HolonomyParam
    kappa: Number

    def __post_init__(self) -> None:
        kappa = as_number(self.kappa)
        if not kappa > self.holonomy.alpha:
            raise DomainError("kappa must exceed alpha (cone angle below 2*pi)")
        object.__setattr__(self, "kappa", kappa)

    @property
    def alpha(self) -> Number:
        return self.holonomy.alpha

    @property
    def cone_angle(self) -> float:
        return 2 * math.pi * float(self.alpha / self.kappa)

    @property
    def exact(self) -> bool:
        return self.holonomy.exact and isinstance(self.kappa, Fraction)


def holonomy(alpha) -> HolonomyParam:
    if isinstance(alpha, HolonomyParam):
        return alpha
    return HolonomyParam(alpha)


def cone(alpha, kappa) -> ConeParam:
    if isinstance(kappa, ConeParam):
        return kappa
    return ConeParam(holonomy(alpha), kappa)


def positive(name: str, value) -> Number:
    value = as_number(value)
    if not value > 0:
        raise DomainError(f"{name} must be positive")
    return value
