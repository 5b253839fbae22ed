"""Constructors for the named translator families: bowls, catenoids in
their odd and even variants, grim reapers, and the degenerate vertical
hyperplane.

Height conventions: odd catenoids put the common vertical-tangent circle
at height 0 (so the waist dips below 0); even variants and grim reapers
put the reflection/tangency locus at height 0; bowls start at 0 on the
axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, GlueError, ParityError
from .ivp import Event, EventKind, StepControl, Trajectory, solve_branch, solve_tau_zero
from .model import FamilyKind, FlowParams, ParallelFamily, SpaceForm
from .profile import Profile, build_profile


class Variant(Enum):
    ODD = "odd"
    EVEN1 = "even1"
    EVEN2 = "even2"


class GlueKind(Enum):
    THETA_ONE = "theta-one"
    THETA_ZERO = "theta-zero"


class Regularity(Enum):
    SMOOTH = "Smooth"
    C2_SINGULAR_SET = "C2SingularSet"
    C1_SINGULAR_SET = "C1SingularSet"


@dataclass(frozen=True)
class TranslatorSpec:
    params: FlowParams
    kind: str
    lam: float | None = None
    ctrl: StepControl | None = None


@dataclass(frozen=True)
class Branch:
    profile: Profile
    orientation: int
    reflected: bool


@dataclass(frozen=True)
class Translator:
    spec: TranslatorSpec
    branches: tuple[Branch, ...]
    regularity: Regularity
    min_height: float | None = None
    s_min_height: float | None = None

    @property
    def degenerate(self) -> bool:
        return not self.branches


_KIND_PREFIX = {
    FamilyKind.ROTATIONAL: "",
    FamilyKind.PARABOLIC: "Parabolic",
    FamilyKind.HYPERBOLIC: "Hyperbolic",
}


def build_bowl(
    params: FlowParams, family: ParallelFamily, ctrl: StepControl | None = None
) -> Translator:
    """The entire convex translator over a rotational or parabolic family."""
    ctrl = ctrl or StepControl()
    if family.kind is FamilyKind.HYPERBOLIC:
        raise DomainError("no bowl exists over the hyperbolic family")
    if family.kind is FamilyKind.PLANAR:
        raise DomainError("the planar family admits grim reapers, not bowls")
    traj = solve_tau_zero(params, family, ctrl=ctrl)
    if family.kind is FamilyKind.ROTATIONAL:
        prof = build_profile(traj, params, family, "plus", s_ref=float(traj.s[0]))
        spec = TranslatorSpec(params, "Bowl", None, ctrl)
        min_h, s_min = 0.0, 0.0
    else:
        prof = build_profile(traj, params, family, "plus", s_ref=0.0)
        spec = TranslatorSpec(params, "ParabolicBowl", None, ctrl)
        min_h = s_min = None  # linear height, unbounded both ways
    return Translator(
        spec=spec,
        branches=(Branch(prof, +1, False),),
        regularity=Regularity.SMOOTH,
        min_height=min_h,
        s_min_height=s_min,
    )


def _restrict_past_zero(traj: Trajectory) -> Trajectory:
    """The sub-trajectory from the (unique) zero of tau onward, with the
    exact zero prepended as its first sample."""
    crossings = traj.zero_crossings()
    if not crossings:
        raise GlueError("trajectory has no zero of tau to restrict past")
    z = crossings[0].s_loc
    mask = traj.s > z + 1e-12
    s = np.concatenate([[z], traj.s[mask]])
    tau = np.concatenate([[0.0], traj.tau[mask]])
    dtau = np.concatenate([[traj.field(z, 0.0)], traj.dtau[mask]])
    out = Trajectory(
        s=s, tau=tau, dtau=dtau, branch_tag=f"{traj.branch_tag}-restricted", field=traj.field
    )
    # the boundary zero still drives curvature blow-up and quadrature handling
    out.events.append(Event(EventKind.ZERO_CROSSING, z, True))
    return out


def reflect_glue(upper: Profile, glue_kind: GlueKind) -> Translator:
    """Double an even-r profile across height 0 into a two-branch translator."""
    r = upper.params.r
    if r % 2 != 0:
        raise ParityError(f"reflection gluing requires even r, got r={r}")
    theta0 = float(upper.theta[0])
    want = 1.0 if glue_kind is GlueKind.THETA_ONE else 0.0
    if abs(theta0 - want) > 1e-8:
        raise GlueError(
            f"boundary angle {theta0:.3g} incompatible with {glue_kind.value} gluing"
        )
    variant = "CatenoidEven1" if glue_kind is GlueKind.THETA_ONE else "CatenoidEven2"
    kind = _KIND_PREFIX[upper.family.kind] + variant
    regularity = (
        Regularity.C1_SINGULAR_SET
        if glue_kind is GlueKind.THETA_ONE
        else Regularity.SMOOTH
    )
    spec = TranslatorSpec(upper.params, kind, float(upper.s[0]), None)
    return Translator(
        spec=spec,
        branches=(Branch(upper, +1, False), Branch(upper, -1, True)),
        regularity=regularity,
    )


def build_catenoid(
    params: FlowParams,
    family: ParallelFamily,
    lam: float,
    variant: Variant,
    ctrl: StepControl | None = None,
) -> Translator:
    """Annulus-type translator over a family, from the boundary branches."""
    ctrl = ctrl or StepControl()
    r = params.r
    if variant is Variant.ODD and r % 2 == 0:
        raise ParityError(f"odd catenoid variant needs odd r, got r={r}")
    if variant is not Variant.ODD and r % 2 == 1:
        raise ParityError(f"even catenoid variant needs even r, got r={r}")
    if family.kind is FamilyKind.PLANAR:
        raise DomainError("the planar family admits no catenoids")
    if family.kind is not FamilyKind.PARABOLIC and lam <= 0.0:
        raise DomainError(f"catenoid neck parameter must be positive, got {lam}")

    if variant is Variant.ODD:
        minus = solve_branch(params, family, "minus", lam, ctrl)
        plus = solve_branch(params, family, "plus", lam, ctrl)
        z = minus.zero_crossings()[0].s_loc
        p_minus = build_profile(minus, params, family, "plus", s_ref=lam, phi_ref=0.0)
        p_plus = build_profile(plus, params, family, "plus", s_ref=lam, phi_ref=0.0)
        kind = _KIND_PREFIX[family.kind] + "CatenoidOdd"
        i_min = int(np.argmin(np.abs(p_minus.s - z)))
        return Translator(
            spec=TranslatorSpec(params, kind, lam, ctrl),
            branches=(Branch(p_minus, -1, False), Branch(p_plus, +1, False)),
            regularity=Regularity.C2_SINGULAR_SET if r > 1 else Regularity.SMOOTH,
            min_height=float(p_minus.phi[i_min]),
            s_min_height=z,
        )

    if variant is Variant.EVEN1:
        minus = solve_branch(params, family, "minus", lam, ctrl)
        hat = _restrict_past_zero(minus)
        upper = build_profile(
            hat, params, family, "plus", s_ref=float(hat.s[0]), phi_ref=0.0
        )
        glued = reflect_glue(upper, GlueKind.THETA_ONE)
        return Translator(
            spec=TranslatorSpec(params, glued.spec.kind, lam, ctrl),
            branches=glued.branches,
            regularity=glued.regularity,
        )

    plus = solve_branch(params, family, "plus", lam, ctrl)
    upper = build_profile(plus, params, family, "plus", s_ref=lam, phi_ref=0.0)
    glued = reflect_glue(upper, GlueKind.THETA_ZERO)
    return Translator(
        spec=TranslatorSpec(params, glued.spec.kind, lam, ctrl),
        branches=glued.branches,
        regularity=glued.regularity,
    )


def build_grim_reaper(
    params: FlowParams,
    lam: float | None = None,
    ctrl: StepControl | None = None,
) -> Translator:
    """Translators over hyperplanes (closed form) or equidistants (r = 1)."""
    ctrl = ctrl or StepControl()
    if params.r != 1:
        raise DomainError(
            "grim reapers require r=1; for r > 1 the planar graph degenerates "
            "into a vertical hyperplane"
        )
    if params.epsilon is SpaceForm.EUCLIDEAN:
        family = ParallelFamily.for_kind(FamilyKind.PLANAR, params.epsilon, 1)
        half = min(ctrl.s_max, 1.55)
        n_pts = max(int(2 * half / 1e-3) + 1, 501)
        s = np.linspace(-half, half, n_pts)
        rho = np.sin(s)
        theta = np.cos(s)
        prof = Profile(
            params=params,
            family=family,
            sign_branch="plus",
            s=s,
            tau=rho,
            dtau=theta,
            rho=rho,
            rho_prime=theta,
            phi=-np.log(theta),
            theta=theta,
            k_tangent=np.zeros_like(s),
            k_normal=theta,
            h_r=theta.copy(),
            residual=np.zeros_like(s),
            flags=[""] * n_pts,
            singular_marks=[],
        )
        return Translator(
            spec=TranslatorSpec(params, "EuclideanGrimReaper", None, ctrl),
            branches=(Branch(prof, +1, False),),
            regularity=Regularity.SMOOTH,
            min_height=0.0,
            s_min_height=0.0,
        )

    if lam is None or not -1.0 < lam < 1.0:
        raise DomainError("hyperbolic grim reaper requires lambda in (-1, 1)")
    family = ParallelFamily.for_kind(FamilyKind.HYPERBOLIC, params.epsilon, 1)
    traj = solve_tau_zero(params, family, center=lam, ctrl=ctrl)
    crossings = traj.zero_crossings()
    # with lam = 0 the zero sits exactly on the starting sample and is not
    # a strict sign change
    z = crossings[0].s_loc if crossings else 0.0
    prof = build_profile(traj, params, family, "plus", s_ref=z, phi_ref=0.0)
    return Translator(
        spec=TranslatorSpec(params, "HyperbolicGrimReaper", lam, ctrl),
        branches=(Branch(prof, +1, False),),
        regularity=Regularity.SMOOTH,
        min_height=0.0,
        s_min_height=z,
    )


def build_vertical_hyperplane(params: FlowParams) -> Translator:
    """The degenerate stationary translator over hyperplanes for r > 1."""
    if params.epsilon is not SpaceForm.EUCLIDEAN:
        raise DomainError("vertical hyperplanes live over a Euclidean base")
    if params.r == 1:
        raise DomainError("for r=1 the planar family gives a grim reaper instead")
    return Translator(
        spec=TranslatorSpec(params, "VerticalHyperplane", None, None),
        branches=(),
        regularity=Regularity.SMOOTH,
    )
