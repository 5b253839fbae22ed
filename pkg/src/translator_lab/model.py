"""Core domain types: space forms, flow parameters, parallel families,
and the unified Euclidean/hyperbolic trig kit.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction

from .errors import DomainError


class SpaceForm(IntEnum):
    """Ambient base with constant sectional curvature 0 or -1."""

    EUCLIDEAN = 0
    HYPERBOLIC = -1

    @classmethod
    def from_epsilon(cls, epsilon: int) -> "SpaceForm":
        try:
            return cls(int(epsilon))
        except ValueError:
            raise DomainError(f"curvature label must be 0 or -1, got {epsilon!r}")


class TrigKind(Enum):
    COS = "cos"
    SIN = "sin"
    TAN = "tan"
    COT = "cot"
    SEC2 = "sec2"
    CSC2 = "csc2"


def trig(epsilon: SpaceForm | int, kind: TrigKind, s: float) -> float:
    """Unified trig function: polynomial for epsilon=0, hyperbolic for -1."""
    eps = SpaceForm.from_epsilon(epsilon)
    if kind in (TrigKind.COT, TrigKind.CSC2) and s == 0.0:
        raise DomainError(f"{kind.value} undefined at s=0")
    if eps is SpaceForm.EUCLIDEAN:
        if kind is TrigKind.COS:
            return 1.0
        if kind is TrigKind.SIN:
            return float(s)
        if kind is TrigKind.TAN:
            return float(s)
        if kind is TrigKind.COT:
            return 1.0 / s
        if kind is TrigKind.SEC2:
            return 1.0
        return 1.0 / (s * s)  # CSC2
    if kind is TrigKind.COS:
        return math.cosh(s)
    if kind is TrigKind.SIN:
        return math.sinh(s)
    if kind is TrigKind.TAN:
        return math.tanh(s)
    if kind is TrigKind.COT:
        return 1.0 / math.tanh(s)
    if kind is TrigKind.SEC2:
        return 1.0 / math.cosh(s) ** 2
    return 1.0 / math.sinh(s) ** 2  # CSC2


def coefficient_C(n: int, r: int) -> float:
    """The constant r / binom(n-1, r-1), computed in exact integer arithmetic."""
    if n < 2:
        raise DomainError(f"base dimension must be >= 2, got {n}")
    if not 1 <= r <= n - 1:
        raise DomainError(f"curvature order must satisfy 1 <= r <= n-1, got r={r}, n={n}")
    return float(Fraction(r, math.comb(n - 1, r - 1)))


@dataclass(frozen=True)
class FlowParams:
    """The triple (epsilon, n, r) plus the derived constant C(n, r)."""

    epsilon: SpaceForm
    n: int
    r: int
    c: float = field(init=False)

    def __post_init__(self):
        eps = SpaceForm.from_epsilon(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "c", coefficient_C(self.n, self.r))


class FamilyKind(Enum):
    ROTATIONAL = "rotational"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    PLANAR = "planar"


_INF = math.inf


@dataclass(frozen=True)
class ParallelFamily:
    """A symmetry class of parallel totally umbilical leaves with its
    curvature function alpha(s) and open domain of validity."""

    kind: FamilyKind
    domain: tuple[float, float]

    @classmethod
    def for_kind(
        cls, kind: FamilyKind, epsilon: SpaceForm | int, r: int = 1
    ) -> "ParallelFamily":
        eps = SpaceForm.from_epsilon(epsilon)
        if kind in (FamilyKind.PARABOLIC, FamilyKind.HYPERBOLIC):
            if eps is not SpaceForm.HYPERBOLIC:
                raise DomainError(f"{kind.value} family requires a hyperbolic base")
        if kind is FamilyKind.PLANAR and eps is not SpaceForm.EUCLIDEAN:
            raise DomainError("planar family requires a Euclidean base")
        if kind is FamilyKind.ROTATIONAL:
            return cls(kind, (0.0, _INF))
        if kind is FamilyKind.HYPERBOLIC:
            return cls(kind, (-_INF, _INF) if r == 1 else (0.0, _INF))
        return cls(kind, (-_INF, _INF))

    def contains(self, s: float) -> bool:
        lo, hi = self.domain
        return lo < s < hi


def alpha(family: ParallelFamily, epsilon: SpaceForm | int, s: float) -> float:
    """Principal curvature of the leaf at parameter s."""
    eps = SpaceForm.from_epsilon(epsilon)
    if not family.contains(s):
        raise DomainError(f"s={s} outside {family.kind.value} domain {family.domain}")
    if family.kind is FamilyKind.ROTATIONAL:
        return -trig(eps, TrigKind.COT, s)
    if family.kind is FamilyKind.PARABOLIC:
        return -1.0
    if family.kind is FamilyKind.HYPERBOLIC:
        return -math.tanh(s)
    return 0.0  # PLANAR
