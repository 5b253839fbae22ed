"""Algebraic asymptotics: the branch limit L, the asymptotic angle, and
the bowl's apex curvature, all independent of any integration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import FlowParams, SpaceForm
from .slopefield import one_minus_pow


class LimitMethod(Enum):
    CLOSED_FORM = "closed-form"
    BISECTION = "bisection"


@dataclass(frozen=True)
class LimitReport:
    L: float
    theta_infinity: float
    apex_curvature: float
    method: LimitMethod

    def as_dict(self) -> dict:
        return {
            "L": self.L,
            "theta_infinity": self.theta_infinity,
            "apex_curvature": self.apex_curvature,
            "method": self.method.value,
        }


def limit_equation(params: FlowParams, y: float) -> float:
    """g(y) = C sqrt(1 - y^(2/r)) - (n - r) y; L is its root in (0, 1]."""
    return params.c * math.sqrt(max(one_minus_pow(y, params.r), 0.0)) - (
        params.n - params.r
    ) * y


def solve_L(params: FlowParams) -> LimitReport:
    """Common limit of the tau branches.

    L = 1 in the Euclidean base; in the hyperbolic base it is the unique
    root of the limit equation, bracketed on [0, 1] and bisected to 1e-14.
    g'(y) blows up at y=1 for r > 1, so bisection is preferred to Newton.
    """
    if params.epsilon is SpaceForm.EUCLIDEAN:
        L = 1.0
        method = LimitMethod.CLOSED_FORM
    else:
        lo, hi = 0.0, 1.0  # g(0) = C > 0, g(1) = -(n-r) < 0
        while hi - lo > 1e-15:
            mid = 0.5 * (lo + hi)
            if limit_equation(params, mid) > 0.0:
                lo = mid
            else:
                hi = mid
        L = 0.5 * (lo + hi)
        method = LimitMethod.BISECTION
    return LimitReport(
        L=L,
        theta_infinity=_theta_from_L(L, params.r),
        apex_curvature=apex_curvature(params),
        method=method,
    )


def _theta_from_L(L: float, r: int) -> float:
    return math.sqrt(max(one_minus_pow(L, r), 0.0))


def asymptotic_angle(params: FlowParams) -> float:
    """Limit angle sqrt(1 - L^(2/r)) shared by all branches of the family."""
    return solve_L(params).theta_infinity


def apex_curvature(params: FlowParams) -> float:
    """(C/n)^(1/r): the bowl's common principal curvature on the axis."""
    return (params.c / params.n) ** (1.0 / params.r)
