"""Right-hand sides of the reduced Cauchy problems and the general
graph-on-parallels translator residual.

All functions are pure. The unknown is tau = rho^r, so tau^(2/r) is
computed as (tau^2)^(1/r); this keeps even r with negative tau safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .model import FamilyKind, FlowParams, ParallelFamily, SpaceForm, TrigKind, trig

#: inputs with |y| in (1, 1 + CLAMP_TOL] are clamped to sign(y) * 1
CLAMP_TOL = 1e-12


def clamp_y(y: float) -> float:
    a = abs(y)
    if a > 1.0 + CLAMP_TOL:
        raise DomainError(f"|y|={a} exceeds 1 beyond the clamp tolerance")
    return math.copysign(1.0, y) if a > 1.0 else y


def one_minus_pow(y: float, r: int) -> float:
    """1 - y^(2/r), accurate to full precision when |y| is close to 1.

    For |y| >= 0.5 the subtraction 1 - |y| is exact, so routing through
    expm1/log1p loses nothing even for |y| within a few ulps of 1.
    """
    a = abs(y)
    if a >= 1.0:
        return 0.0
    if a < 0.5:
        return 1.0 - (y * y) ** (1.0 / r)
    return -math.expm1((2.0 / r) * math.log1p(-(1.0 - a)))


def _root_term(y: float, r: int) -> float:
    return math.sqrt(max(one_minus_pow(y, r), 0.0))


def f_rotational(params: FlowParams, s: float, y: float) -> float:
    """Slope field over concentric geodesic spheres."""
    if s <= 0.0:
        raise DomainError(f"rotational field requires s > 0, got s={s}")
    y = clamp_y(y)
    eps = params.epsilon
    tan = trig(eps, TrigKind.TAN, s)
    cot = trig(eps, TrigKind.COT, s)
    return params.c * _root_term(y, params.r) * tan ** (params.r - 1) - (
        params.n - params.r
    ) * cot * y


def f_parabolic(params: FlowParams, y: float) -> float:
    """Autonomous slope field over parallel horospheres."""
    y = clamp_y(y)
    return params.c * _root_term(y, params.r) - (params.n - params.r) * y


def f_hyperbolic(params: FlowParams, s: float, y: float) -> float:
    """Slope field over equidistant hypersurfaces."""
    y = clamp_y(y)
    if params.r > 1:
        if s == 0.0:
            raise DomainError("hyperbolic field undefined at s=0 for r > 1")
        cothp = trig(SpaceForm.HYPERBOLIC, TrigKind.COT, s) ** (params.r - 1)
    else:
        cothp = 1.0
    return params.c * _root_term(y, params.r) * cothp - (
        params.n - params.r
    ) * math.tanh(s) * y


def f_planar(params: FlowParams, y: float) -> float:
    """Slope field over parallel hyperplanes; only r=1 is non-degenerate."""
    if params.r != 1:
        raise DomainError("planar graphs degenerate to vertical hyperplanes for r > 1")
    y = clamp_y(y)
    return math.sqrt(max(1.0 - y * y, 0.0))


def residual_general(
    params: FlowParams, alpha_val: float, rho: float, rho_prime: float
) -> float:
    """LHS minus RHS of the translator equation for a graph on parallels.

    Zero exactly when the graph translates with unit speed.
    """
    if abs(rho) > 1.0 + CLAMP_TOL:
        raise DomainError(f"|rho|={abs(rho)} exceeds 1")
    rho = clamp_y(rho)
    n, r = params.n, params.r
    a = -alpha_val * rho
    lhs = math.comb(n - 1, r) * a**r + math.comb(n - 1, r - 1) * a ** (r - 1) * rho_prime
    return lhs - math.sqrt(max(1.0 - rho * rho, 0.0))


@dataclass(frozen=True)
class SlopeField:
    """Dispatches to the family's right-hand side; validates compatibility."""

    params: FlowParams
    family: ParallelFamily

    def __post_init__(self):
        ParallelFamily.for_kind(self.family.kind, self.params.epsilon, self.params.r)
        if self.family.kind is FamilyKind.PLANAR and self.params.r != 1:
            raise DomainError("planar slope field requires r=1")

    def __call__(self, s: float, y: float) -> float:
        kind = self.family.kind
        if kind is FamilyKind.ROTATIONAL:
            return f_rotational(self.params, s, y)
        if kind is FamilyKind.PARABOLIC:
            return f_parabolic(self.params, y)
        if kind is FamilyKind.HYPERBOLIC:
            return f_hyperbolic(self.params, s, y)
        return f_planar(self.params, y)

    def autonomous(self) -> bool:
        return self.family.kind in (FamilyKind.PARABOLIC, FamilyKind.PLANAR)
