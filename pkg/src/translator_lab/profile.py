"""Geometric enrichment of trajectories: slope rho, height phi by
singularity-aware quadrature, angle theta, principal curvatures, the r-th
mean curvature, and the pointwise soliton residual.

The height integrand rho / sqrt(1 - rho^2) is integrable but singular like
(s - e)^(-1/2) at a vertical tangent e and merely C^(1/r) at a zero of tau
when r > 1; both are handled by explicit changes of variable rather than
brute-force refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import DomainError, QuadratureError
from .ivp import EventKind, Trajectory
from .model import FamilyKind, FlowParams, ParallelFamily, alpha
from .slopefield import one_minus_pow

#: samples closer than this to a singular mark are flagged and skipped by
#: residual-style consumers
MARK_EXCLUSION = 1e-3
#: below this value of 1 - rho^2 the angle is numerically zero and the
#: graph is treated as vertical
THETA_FLOOR_SQ = 1e-12
#: half-width of the region around a singular point integrated in the
#: substitution variable
SUBST_RADIUS = 0.5


class SingularKind(Enum):
    C2_BLOWUP = "C2"
    VERTICAL_TANGENT = "VT"


@dataclass(frozen=True)
class SingularMark:
    s_loc: float
    kind: SingularKind


def rho_from_tau(tau, r: int, sign_branch: str = "plus"):
    """Invert tau = rho^r; for even r the sign is the branch's choice."""
    if sign_branch not in ("plus", "minus"):
        raise DomainError(f"sign_branch must be 'plus' or 'minus', got {sign_branch!r}")
    t = np.asarray(tau, dtype=float)
    if r % 2 == 1:
        out = np.sign(t) * np.abs(t) ** (1.0 / r)
    else:
        if np.any(t < -1e-12):
            raise DomainError(f"negative tau={t.min()} invalid for even r={r}")
        sign = 1.0 if sign_branch == "plus" else -1.0
        out = sign * np.clip(t, 0.0, None) ** (1.0 / r)
    return float(out) if np.isscalar(tau) else out


def curvatures(
    params: FlowParams,
    family: ParallelFamily,
    s: float,
    rho: float,
    rho_prime: float,
) -> tuple[float, float]:
    """(k_tangent, k_normal): the leaf directions share -alpha(s) rho, the
    profile direction contributes rho'."""
    return -alpha(family, params.epsilon, s) * rho, rho_prime


def hr_closed(params: FlowParams, a: float, rho_prime: float) -> float:
    """r-th mean curvature of a graph on parallels, with a = -alpha rho."""
    n, r = params.n, params.r
    return math.comb(n - 1, r) * a**r + math.comb(n - 1, r - 1) * a ** (r - 1) * rho_prime


def hr_elementary(k, r: int) -> float:
    """Elementary symmetric polynomial e_r of the principal curvatures,
    by the one-pass recurrence on prefixes (independent of hr_closed)."""
    n = len(k)
    if not 1 <= r <= n:
        raise DomainError(f"need 1 <= r <= len(k); got r={r}, len={n}")
    e = [1.0] + [0.0] * r
    for x in k:
        for j in range(min(r, n), 0, -1):
            e[j] += e[j - 1] * x
    return e[r]


# ---------------------------------------------------------------------------
# height quadrature


@lru_cache(maxsize=None)
def _gl(npts: int):
    return np.polynomial.legendre.leggauss(npts)


def _gl_apply(g, a: float, b: float, npts: int) -> tuple[float, float]:
    x, w = _gl(npts)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    vals = g(mid + half * x)
    return half * float(np.dot(w, vals)), float(np.max(np.abs(vals)))


def _adaptive(g, a: float, b: float, tol: float, depth: int = 0) -> float:
    coarse, _ = _gl_apply(g, a, b, 20)
    m = 0.5 * (a + b)
    f1, g1 = _gl_apply(g, a, m, 20)
    f2, g2 = _gl_apply(g, m, b, 20)
    fine = f1 + f2
    # rounding-noise floor: near theta -> 0 the integrand's relative noise
    # grows like eps * g^2, so gaps below eps * g^3 * width are meaningless
    gmax = max(g1, g2, 1.0)
    floor = 2e-16 * (b - a) * gmax * (1.0 + gmax * gmax)
    if abs(fine - coarse) <= tol + floor or b - a < 1e-13:
        return fine
    if depth >= 24:
        if abs(fine - coarse) > 1e-9 * (1.0 + abs(fine)):
            raise QuadratureError(
                f"quadrature failed to converge on [{a:g}, {b:g}]: "
                f"estimate gap {abs(fine - coarse):g}"
            )
        return fine
    return _adaptive(g, a, m, tol, depth + 1) + _adaptive(g, m, b, tol, depth + 1)


def _seg_sqrt_sub(g, a: float, b: float, e: float, tol: float) -> float:
    """Integrate g over [a, b] near a vertical tangent at e via s = e +- t^2."""
    if e <= a:  # singularity at or left of the segment
        ta, tb = math.sqrt(a - e), math.sqrt(b - e)
        return _adaptive(lambda t: g(e + t * t) * 2.0 * t, ta, tb, tol)
    # s = e - t^2 flips orientation, and swapping the t-limits back to
    # increasing order flips it again
    ta, tb = math.sqrt(e - b), math.sqrt(e - a)
    return _adaptive(lambda t: g(e - t * t) * 2.0 * t, ta, tb, tol)


def _seg_kink_sub(g, a: float, b: float, z: float, r: int, tol: float) -> float:
    """Integrate g over [a, b] near a zero of tau at z via s = z +- v^r."""
    if z <= a:
        va, vb = (a - z) ** (1.0 / r), (b - z) ** (1.0 / r)
        return _adaptive(lambda v: g(z + v**r) * r * v ** (r - 1), va, vb, tol)
    va, vb = (z - b) ** (1.0 / r), (z - a) ** (1.0 / r)
    return _adaptive(lambda v: g(z - v**r) * r * v ** (r - 1), va, vb, tol)


def height(
    rho_fn,
    grid,
    s_ref: float | None = None,
    phi_ref: float = 0.0,
    vertical_tangents=(),
    kinks=(),
    r: int = 1,
    theta_fn=None,
) -> np.ndarray:
    """Cumulative heights phi over grid with phi(s_ref) = phi_ref.

    rho_fn must be vectorized; vertical_tangents lists parameters where
    |rho| = 1 and kinks lists zeros of tau (only singular for r > 1).
    Passing theta_fn avoids the cancellation in 1 - rho^2 when rho is
    within a few ulps of 1.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or not np.all(np.diff(grid) > 0.0):
        raise DomainError("height grid must be strictly increasing with >= 2 nodes")
    if s_ref is None:
        s_ref = float(grid[0])
    if not grid[0] - 1e-9 <= s_ref <= grid[-1] + 1e-9:
        raise DomainError(f"s_ref={s_ref} outside the grid span")

    def g(s):
        rho = np.clip(rho_fn(s), -1.0, 1.0)
        if theta_fn is not None:
            theta = np.maximum(theta_fn(s), math.sqrt(THETA_FLOOR_SQ))
        else:
            theta = np.sqrt(np.maximum(1.0 - rho * rho, THETA_FLOOR_SQ))
        return rho / theta

    kinks = sorted(kinks) if r > 1 else []
    vts = sorted(vertical_tangents)

    def seg(a: float, b: float) -> float:
        if b - a <= 0.0:
            return 0.0
        tol = 1e-13 * max(1.0, b - a)
        for e in vts:
            if a - SUBST_RADIUS <= e <= b + SUBST_RADIUS:
                if e <= a or e >= b:
                    return _seg_sqrt_sub(g, a, b, e, tol)
                return _seg_sqrt_sub(g, a, e, e, tol) + _seg_sqrt_sub(g, e, b, e, tol)
        for z in kinks:
            if a - SUBST_RADIUS <= z <= b + SUBST_RADIUS:
                if z <= a or z >= b:
                    return _seg_kink_sub(g, a, b, z, r, tol)
                return _seg_kink_sub(g, a, z, z, r, tol) + _seg_kink_sub(
                    g, z, b, z, r, tol
                )
        return _adaptive(g, a, b, tol)

    incr = np.array([seg(a, b) for a, b in zip(grid[:-1], grid[1:])])
    phi = np.concatenate([[0.0], np.cumsum(incr)])
    # anchor at s_ref, which need not be a node
    i = int(np.searchsorted(grid, s_ref, side="right")) - 1
    i = min(max(i, 0), grid.size - 2)
    offset = phi[i] + seg(float(grid[i]), s_ref) - phi_ref
    return phi - offset


# ---------------------------------------------------------------------------
# profile assembly


@dataclass
class Profile:
    params: FlowParams
    family: ParallelFamily
    sign_branch: str
    s: np.ndarray
    tau: np.ndarray
    dtau: np.ndarray
    rho: np.ndarray
    rho_prime: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    k_tangent: np.ndarray
    k_normal: np.ndarray
    h_r: np.ndarray
    residual: np.ndarray
    flags: list[str]
    singular_marks: list[SingularMark] = dc_field(default_factory=list)

    @property
    def samples(self):
        return list(
            zip(
                self.s,
                self.rho,
                self.rho_prime,
                self.phi,
                self.theta,
                self.k_tangent,
                self.k_normal,
                self.h_r,
                self.residual,
            )
        )

    def unflagged(self) -> np.ndarray:
        return np.array([f == "" for f in self.flags])

    def phi_interpolator(self, lo: float, hi: float):
        """Hermite interpolant of phi on [lo, hi]; requires the window to
        stay away from vertical tangents (theta bounded below)."""
        mask = (self.s >= lo) & (self.s <= hi)
        if mask.sum() < 2:
            raise DomainError("interpolation window contains fewer than two samples")
        th = self.theta[mask]
        if th.min() < 1e-6:
            raise DomainError("interpolation window touches a vertical tangent")
        slopes = self.rho[mask] / th
        return CubicHermiteSpline(self.s[mask], self.phi[mask], slopes)


def build_profile(
    traj: Trajectory,
    params: FlowParams,
    family: ParallelFamily,
    sign_branch: str = "plus",
    s_ref: float | None = None,
    phi_ref: float = 0.0,
) -> Profile:
    s, tau, dtau = traj.s, traj.tau, traj.dtau
    r = params.r
    rho = rho_from_tau(tau, r, sign_branch)

    with np.errstate(divide="ignore", invalid="ignore"):
        rho_prime = np.where(
            tau == 0.0,
            dtau if r == 1 else np.inf * np.sign(dtau),
            dtau * rho / (r * np.where(tau == 0.0, 1.0, tau)),
        )
    theta = np.sqrt(np.maximum([one_minus_pow(t, r) for t in tau], 0.0))

    marks: list[SingularMark] = []
    zeros = [e.s_loc for e in traj.zero_crossings()]
    if r > 1:
        marks.extend(SingularMark(z, SingularKind.C2_BLOWUP) for z in zeros)
    for e in traj.events:
        if e.kind is EventKind.BOUNDARY_CONTACT:
            marks.append(SingularMark(e.s_loc, SingularKind.VERTICAL_TANGENT))
    for idx in (0, -1):
        if abs(tau[idx]) >= 1.0 - 1e-12 and not any(
            abs(m.s_loc - s[idx]) < 1e-9 for m in marks
        ):
            marks.append(SingularMark(float(s[idx]), SingularKind.VERTICAL_TANGENT))

    vts = [m.s_loc for m in marks if m.kind is SingularKind.VERTICAL_TANGENT]

    def theta_fn(x):
        tv = np.atleast_1d(np.asarray(traj(x), dtype=float))
        return np.sqrt([max(one_minus_pow(t, r), 0.0) for t in tv])

    phi = height(
        lambda x: rho_from_tau(np.asarray(traj(x)), r, sign_branch),
        s,
        s_ref=s_ref,
        phi_ref=phi_ref,
        vertical_tangents=vts,
        kinks=zeros,
        r=r,
        theta_fn=theta_fn,
    )

    alph = np.array([alpha(family, params.epsilon, si) for si in s])
    k_tan = -alph * rho
    k_nor = rho_prime
    a = -alph * rho
    h_r = np.array(
        [
            hr_closed(params, ai, rpi) if math.isfinite(rpi) else math.nan
            for ai, rpi in zip(a, rho_prime)
        ]
    )
    residual = h_r - theta

    flags = []
    for i, si in enumerate(s):
        f = ""
        for m in marks:
            if abs(si - m.s_loc) < MARK_EXCLUSION:
                f = m.kind.value
                break
        if not f:
            if one_minus_pow(tau[i], r) < THETA_FLOOR_SQ:
                f = SingularKind.VERTICAL_TANGENT.value
            elif not math.isfinite(rho_prime[i]):
                f = SingularKind.C2_BLOWUP.value
        flags.append(f)

    return Profile(
        params=params,
        family=family,
        sign_branch=sign_branch,
        s=s,
        tau=tau,
        dtau=dtau,
        rho=rho,
        rho_prime=rho_prime,
        phi=phi,
        theta=theta,
        k_tangent=k_tan,
        k_normal=k_nor,
        h_r=h_r,
        residual=residual,
        flags=flags,
        singular_marks=marks,
    )
