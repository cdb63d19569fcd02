"""Index and grading arithmetic for singular instantons.

Everything here is integer or rational bookkeeping: the formal dimension of
the singular ASD moduli space, the Chern-Weil action, how Chern-Simons and
indices shift under gauge transformations, gluing along an end, and the
relative grading ``mu~`` with its mod 4 reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .params import DomainError, Number, as_number, holonomy


class Kind(str, Enum):
    ABELIAN = "abelian"
    IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class SurfacePairTopology:
    """Characteristic numbers of a bundle pair over an embedded surface.

    ``k`` is the instanton number, ``l`` minus the degree of the reducing
    line bundle on the surface, ``self_int`` the surface self-intersection.
    """

    k: int
    l: int
    b1: int
    b2_plus: int
    genus: int
    self_int: int = 0

    def __post_init__(self) -> None:
        for name in ("b1", "b2_plus", "genus"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class GaugeTransformDegrees:
    """Degrees of ``g`` on the 3-manifold and of its restriction to the knot."""

    deg_g: int
    deg_g_K: int


@dataclass(frozen=True)
class LimitingConnection:
    kind: Kind
    isotropy_dim: int

    def __post_init__(self) -> None:
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.isotropy_dim != (1 if kind is Kind.ABELIAN else 0):
            raise DomainError("isotropy is S^1 (dim 1) for abelian, +-1 (dim 0) otherwise")

    @classmethod
    def of(cls, kind) -> "LimitingConnection":
        kind = Kind(kind)
        return cls(kind, 1 if kind is Kind.ABELIAN else 0)


ABELIAN = LimitingConnection.of(Kind.ABELIAN)
IRREDUCIBLE = LimitingConnection.of(Kind.IRREDUCIBLE)
THETA = ABELIAN  # the reference abelian connection


@dataclass(frozen=True)
class Grading:
    mu_tilde: int
    mu_mod4: int

    def __post_init__(self) -> None:
        if self.mu_mod4 not in (0, 1, 2, 3) or (self.mu_tilde - self.mu_mod4) % 4:
            raise DomainError("mu_mod4 must be the canonical residue of mu_tilde")


def asd_dimension(t: SurfacePairTopology) -> int:
    """Formal dimension ``8k + 4l - 3(b2+ - b1 + 1) - (2g - 2)``."""
    return 8 * t.k + 4 * t.l - 3 * (t.b2_plus - t.b1 + 1) - (2 * t.genus - 2)


def chern_weil_action(k: int, l: int, alpha, self_int: int) -> Number:
    """Normalized curvature integral ``k + 2 alpha l - alpha**2 (surface . surface)``."""
    a = holonomy(alpha).alpha
    return k + 2 * a * l - a * a * self_int


def cs_gauge_shift(cs_value, alpha, d: GaugeTransformDegrees) -> Number:
    a = holonomy(alpha).alpha
    return as_number(cs_value) + d.deg_g - 2 * a * d.deg_g_K


def glue_index(ind: int, limiting: LimitingConnection) -> int:
    """Index after closing up an end: unchanged for irreducible limits, one less for abelian."""
    return ind - limiting.isotropy_dim


def gauge_index_shift(ind: int, d: GaugeTransformDegrees) -> int:
    return ind + 8 * d.deg_g - 4 * d.deg_g_K


def mu_tilde_pair(ind_EL: int, gA: LimitingConnection, gB: LimitingConnection) -> int:
    """Relative grading: index minus the isotropy dimensions at both ends."""
    return ind_EL - gA.isotropy_dim - gB.isotropy_dim


def mu_compose(mu_AB: int, mu_BC: int, gB: LimitingConnection) -> int:
    return mu_AB + mu_BC + gB.isotropy_dim


def mu_self(gA: LimitingConnection) -> int:
    """``mu~(A, A) = -dim Gamma_A``, forced by composition."""
    return -gA.isotropy_dim


def mu_absolute(mu_theta_A: int, gA: LimitingConnection) -> int:
    """Absolute grading ``mu~(A) = mu~(Theta, A) + dim Gamma_A``."""
    return mu_theta_A + gA.isotropy_dim


def mu_relative(mu_A: int, mu_B: int, gB: LimitingConnection) -> int:
    """Recover ``mu~(A, B)`` from absolute gradings."""
    return mu_B - mu_A - gB.isotropy_dim


def grading_mod4(mu_tilde: int) -> int:
    return mu_tilde % 4


def grading(mu_tilde: int) -> Grading:
    return Grading(mu_tilde, grading_mod4(mu_tilde))


def gauge_shift_crosscheck(d: GaugeTransformDegrees) -> bool:
    """Gauge index shift equals the ASD dimension of the mapping torus bundle.

    Gluing the cylinder ends with ``g`` gives a pair over ``(M x S^1, K x S^1)``
    with ``k = deg g`` and ``l = -deg g|K`` (``b1 = 1``, ``b2+ = 0``, torus).
    """
    torus = SurfacePairTopology(k=d.deg_g, l=-d.deg_g_K, b1=1, b2_plus=0, genus=1)
    return gauge_index_shift(0, d) == asd_dimension(torus)
