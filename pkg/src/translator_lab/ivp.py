"""Adaptive integration of the reduced Cauchy problems.

Handles the non-Lipschitz boundary starts at tau = +-1 with an explicit
micro-step, the singular center start of the bowl solution with a leading
power series, and the stiff quasi-static tail of the Euclidean rotational
field (where d F / d tau blows up like s^(2r-1) as tau -> 1) with an
algebraic continuation along the slow manifold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .errors import DomainError, NotConverged, StiffnessError
from .limits import solve_L
from .model import FamilyKind, FlowParams, ParallelFamily, SpaceForm, TrigKind, trig
from .slopefield import SlopeField, one_minus_pow

#: explicit first step taken off a tau = +-1 boundary start
MICRO_STEP = 1e-6
#: cap on the solver step, which doubles as the sample spacing; solver
#: nodes are used directly (5th-order accurate) rather than dense-output
#: values, whose noise the Hermite derivative would amplify by 1/step
SAMPLE_DS = 5e-3
#: quasi-static tail: switch once |dF/dtau| along the slow manifold
#: exceeds this, and sample the algebraic continuation at this spacing;
#: kept low enough that solver node noise times the attraction rate stays
#: below the structural slope of the tracked root
STIFF_LAMBDA = 2e3
QS_DS = 1e-2
#: the switch fires once |F| falls within this factor of the slow
#: manifold's own slope, i.e. the transient layer has fully relaxed
SWITCH_RESIDUAL_FACTOR = 5.0
#: start of the power-series launch of the center solution
SERIES_S_INIT = 1e-4


@dataclass
class StepControl:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1
    s_max: float = 30.0

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "s_max"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"StepControl.{name} must be positive")


class EventKind(Enum):
    ZERO_CROSSING = "zero-crossing"
    BOUNDARY_CONTACT = "boundary-contact"
    PLATEAU = "plateau"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    s_loc: float
    refined: bool = False


@dataclass
class Trajectory:
    """Integrated solution with dense cubic-Hermite output.

    Sample derivatives are always the slope field evaluated at the sample,
    so (s, tau, dtau) triples satisfy the reduced equation identically.
    """

    s: np.ndarray
    tau: np.ndarray
    dtau: np.ndarray
    branch_tag: str
    field: SlopeField
    events: list[Event] = dc_field(default_factory=list)

    def __post_init__(self):
        if not np.all(np.diff(self.s) > 0.0):
            raise DomainError("trajectory samples must be strictly increasing in s")
        self._spline = CubicHermiteSpline(self.s, self.tau, self.dtau)
        self._dspline = self._spline.derivative()

    @property
    def s_span(self) -> tuple[float, float]:
        return float(self.s[0]), float(self.s[-1])

    @property
    def samples(self):
        return list(zip(self.s, self.tau, self.dtau))

    def __call__(self, s):
        return np.clip(self._spline(s), -1.0, 1.0)

    def derivative(self, s):
        return self._dspline(s)

    def zero_crossings(self) -> list[Event]:
        return [e for e in self.events if e.kind is EventKind.ZERO_CROSSING]


def _refine_zero(spline, a: float, b: float) -> float:
    """Bisect a sign change of the dense output down to an s-width of 1e-12."""
    fa = spline(a)
    while b - a > 1e-12:
        m = 0.5 * (a + b)
        fm = spline(m)
        if fa * fm <= 0.0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _detect_events(s: np.ndarray, tau: np.ndarray, spline) -> list[Event]:
    events: list[Event] = []
    sign = np.sign(tau)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0.0)[0]:
        events.append(
            Event(EventKind.ZERO_CROSSING, _refine_zero(spline, s[i], s[i + 1]), True)
        )
    return events


# ---------------------------------------------------------------------------
# quasi-static continuation of the stiff Euclidean rotational tail


def _qs_lambda_scale(field: SlopeField, s: float) -> float:
    """|dF/dtau| along the slow manifold near tau = 1 (Euclidean rotational)."""
    p = field.params
    tanp = s ** (p.r - 1)
    return (p.c * tanp) ** 2 * s / (p.r * (p.n - p.r))


def _qs_wstar(field: SlopeField, s: float) -> float:
    p = field.params
    return (p.n - p.r) / (p.c * s**p.r)


def _qs_root(field: SlopeField, s: float) -> float:
    """Root of F(s, .) = 0 on (0, 1); F is strictly decreasing in tau there."""
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if field(s, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _qs_dfdy(field: SlopeField, s: float, y: float) -> float:
    p = field.params
    w = math.sqrt(max(one_minus_pow(y, p.r), 1e-300))
    tan = trig(p.epsilon, TrigKind.TAN, s)
    cot = trig(p.epsilon, TrigKind.COT, s)
    return -p.c * tan ** (p.r - 1) * (abs(y) ** (2.0 / p.r - 1.0)) / (p.r * w) - (
        p.n - p.r
    ) * cot


def _qs_dfds(field: SlopeField, s: float, y: float) -> float:
    p = field.params
    w = math.sqrt(max(one_minus_pow(y, p.r), 0.0))
    return p.c * (p.r - 1) * s ** (p.r - 2) * w + (p.n - p.r) * y / (s * s)


def _qs_tail(field: SlopeField, s_from: float, s_end: float):
    """Sample the first-order-corrected slow manifold on [s_from, s_end].

    The derivative is taken analytically as -F_s / F_y at the root of F;
    re-evaluating F at the corrected value would cancel catastrophically
    once 1 - tau falls near machine precision.
    """
    m = max(int(math.ceil((s_end - s_from) / QS_DS)), 2)
    return _qs_eval(field, np.linspace(s_from, s_end, m + 1))


def _qs_eval(field: SlopeField, ss: np.ndarray):
    ss = np.asarray(ss, dtype=float)
    tau = np.empty_like(ss)
    dtau = np.empty_like(ss)
    for i, s in enumerate(ss):
        root = _qs_root(field, s)
        lam = _qs_dfdy(field, s, root)
        d = -_qs_dfds(field, s, root) / lam
        tau[i] = min(root + d / lam, 1.0)
        dtau[i] = d
    return ss, tau, dtau


def _stiff_rotational_euclidean(field: SlopeField) -> bool:
    return (
        field.family.kind is FamilyKind.ROTATIONAL
        and field.params.epsilon is SpaceForm.EUCLIDEAN
    )


# ---------------------------------------------------------------------------
# core adaptive solve


def _solve_span(field: SlopeField, s0: float, y0: float, s_end: float, ctrl: StepControl):
    """Adaptive solve from (s0, y0) towards s_end (either direction).

    Returns (s, tau, contact) with arrays sampled at spacing <= SAMPLE_DS,
    ordered in the direction of integration; contact is the parameter of a
    boundary touch (integration stops there) or None.
    """

    def rhs(s, y):
        return [field(s, min(1.0, max(-1.0, y[0])))]

    events = []

    def contact(s, y):
        return 1.0 - 1e-12 - abs(y[0])

    contact.terminal = True
    contact.direction = -1.0
    events.append(contact)

    stiff = _stiff_rotational_euclidean(field)
    if stiff:
        r = field.params.r

        def switch(s, y):
            if y[0] <= 0.5 or _qs_lambda_scale(field, s) < STIFF_LAMBDA:
                return 1.0
            # |F| relaxes down to the slow manifold's own slope
            # ~ r^2 w*^2 / s, never to zero; crossing a small multiple of
            # it means the transient layer is over, whichever side the
            # solution approached the root from
            w = _qs_wstar(field, s)
            slow = r * r * w * w / s
            return abs(field(s, y[0])) - SWITCH_RESIDUAL_FACTOR * slow

        switch.terminal = True
        switch.direction = -1.0
        events.append(switch)

    sol = solve_ivp(
        rhs,
        (s0, s_end),
        [y0],
        method="RK45",
        rtol=ctrl.rel_tol,
        atol=ctrl.abs_tol,
        max_step=min(ctrl.max_step, SAMPLE_DS),
        events=events,
    )
    if not sol.success:
        raise StiffnessError(f"integration failed at s={sol.t[-1]:g}: {sol.message}")

    t = sol.t
    y = np.clip(sol.y[0], -1.0, 1.0)
    dy = np.array([field(si, yi) for si, yi in zip(t, y)])

    contact = None
    if sol.status == 1 and len(sol.t_events[0]):
        contact = float(sol.t_events[0][0])
    if stiff and sol.status == 1 and len(sol.t_events[1]):
        s_e = float(sol.t_events[1][0])
        if s_e < s_end:
            # short bridge segments right after the switch: the last solver
            # node still carries the decaying transient slope, which a long
            # spline segment would smear into a spurious dip
            bridge = s_e + QS_DS * np.array([0.01, 0.03, 0.1, 0.3])
            qs_s, qs_tau, qs_dtau = _qs_tail(field, s_e + QS_DS, s_end)
            bs, btau, bdtau = _qs_eval(field, bridge[bridge < s_end])
            t = np.concatenate([t, bs, qs_s])
            y = np.concatenate([y, btau, qs_tau])
            dy = np.concatenate([dy, bdtau, qs_dtau])
    return t, y, dy, contact


def _assemble(field, s, tau, branch_tag, dtau=None, prepend=None, contact=None):
    if dtau is None:
        dtau = np.array([field(si, yi) for si, yi in zip(s, tau)])
    if prepend is not None:
        ps, ptau = np.asarray(prepend[0], float), np.asarray(prepend[1], float)
        pdtau = np.array([field(si, yi) for si, yi in zip(ps, ptau)])
        s = np.concatenate([ps, s])
        tau = np.concatenate([ptau, tau])
        dtau = np.concatenate([pdtau, dtau])
    keep = np.concatenate([[True], np.diff(s) > 1e-13])
    s, tau, dtau = s[keep], np.clip(tau[keep], -1.0, 1.0), dtau[keep]
    traj = Trajectory(s=s, tau=tau, dtau=dtau, branch_tag=branch_tag, field=field)
    traj.events.extend(_detect_events(s, tau, traj._spline))
    if contact is not None:
        traj.events.append(Event(EventKind.BOUNDARY_CONTACT, contact, True))
    return traj


def integrate(
    field: SlopeField, s0: float, y0: float, ctrl: StepControl, branch_tag: str = "orbit"
) -> Trajectory:
    """Integrate the Cauchy problem forward from (s0, y0) up to ctrl.s_max."""
    if abs(y0) > 1.0 + 1e-12:
        raise DomainError(f"|y0|={abs(y0)} outside [-1, 1]")
    y0 = min(1.0, max(-1.0, y0))
    if not field.family.contains(s0):
        raise DomainError(f"s0={s0} outside the {field.family.kind.value} domain")
    if s0 >= ctrl.s_max:
        raise DomainError(f"s0={s0} must lie below s_max={ctrl.s_max}")

    prepend = None
    if abs(y0) >= 1.0 - 1e-15:
        # non-Lipschitz boundary start: the root term vanishes identically,
        # so the field value is the exact departure slope
        y0 = math.copysign(1.0, y0)
        slope = field(s0, y0)
        micro = MICRO_STEP
        if _stiff_rotational_euclidean(field) and y0 > 0.0:
            # keep the first step inside the relaxation layer, whose width
            # is the inverse attraction rate; a full micro-step would
            # overshoot far below the attracting root
            lam = _qs_lambda_scale(field, s0)
            if lam > 0.0:
                micro = max(min(micro, 0.1 / lam), 1e-12)
        y1 = min(1.0, max(-1.0, y0 + micro * slope))
        prepend = ([s0], [y0])
        s0 = s0 + micro
        y0 = y1
    s, tau, dtau, contact = _solve_span(field, s0, y0, ctrl.s_max, ctrl)
    return _assemble(
        field, s, tau, branch_tag, dtau=dtau, prepend=prepend, contact=contact
    )


def solve_branch(
    params: FlowParams,
    family: ParallelFamily,
    branch: str,
    s0: float,
    ctrl: StepControl,
) -> Trajectory:
    """The solution leaving the boundary tau = -1 (minus) or tau = +1 (plus)."""
    if branch not in ("minus", "plus"):
        raise DomainError(f"branch must be 'minus' or 'plus', got {branch!r}")
    field = SlopeField(params, family)
    y0 = -1.0 if branch == "minus" else 1.0
    return integrate(field, s0, y0, ctrl, branch_tag=branch)


def solve_tau_zero(
    params: FlowParams,
    family: ParallelFamily,
    center: float | None = None,
    ctrl: StepControl | None = None,
) -> Trajectory:
    """The distinguished interior solution separating the two branches.

    Rotational: launched at SERIES_S_INIT from the leading balance
    tau = (C/n) s^r of the equation at its singular center s = 0.
    Parabolic: the constant solution tau = L.
    Hyperbolic (r = 1 only): integrated both ways from tau(0) = center.
    """
    ctrl = ctrl or StepControl()
    field = SlopeField(params, family)
    kind = family.kind
    if kind is FamilyKind.ROTATIONAL:
        a = params.c / params.n
        ss = np.geomspace(1e-6, SERIES_S_INIT, 25)
        series_tau = a * ss**params.r
        tight = replace(ctrl, abs_tol=min(ctrl.abs_tol, 1e-16))
        s, tau, dtau, contact = _solve_span(
            field, ss[-1], series_tau[-1], ctrl.s_max, tight
        )
        return _assemble(
            field,
            s[1:],
            tau[1:],
            "zero",
            dtau=dtau[1:],
            prepend=(ss, series_tau),
            contact=contact,
        )
    if kind is FamilyKind.PARABOLIC:
        L = solve_L(params).L
        s = np.arange(-ctrl.s_max, ctrl.s_max + 0.5 * ctrl.max_step, ctrl.max_step)
        return _assemble(field, s, np.full_like(s, L), "zero")
    if kind is FamilyKind.HYPERBOLIC:
        if params.r != 1:
            raise DomainError("no center solution exists for hyperbolic families with r > 1")
        if center is None or not -1.0 < center < 1.0:
            raise DomainError("hyperbolic center solution requires center in (-1, 1)")
        fwd_s, fwd_tau, fwd_d, _ = _solve_span(field, 0.0, center, ctrl.s_max, ctrl)
        bwd_s, bwd_tau, bwd_d, _ = _solve_span(field, 0.0, center, -ctrl.s_max, ctrl)
        s = np.concatenate([bwd_s[::-1], fwd_s[1:]])
        tau = np.concatenate([bwd_tau[::-1], fwd_tau[1:]])
        dtau = np.concatenate([bwd_d[::-1], fwd_d[1:]])
        return _assemble(field, s, tau, f"centered({center:g})", dtau=dtau)
    raise DomainError("planar families have no center solution")


def estimate_limit(
    traj: Trajectory, window: float, max_variation: float = 0.05
) -> float:
    """Mean of tau over the trailing window; flags a plateau when flat."""
    if window <= 0.0:
        raise DomainError("window must be positive")
    s_end = traj.s[-1]
    mask = traj.s >= s_end - window
    tau_w = traj.tau[mask]
    if tau_w.size < 2:
        raise DomainError("window contains fewer than two samples")
    variation = float(np.sum(np.abs(np.diff(tau_w))))
    if variation > max_variation:
        raise NotConverged(
            f"tail variation {variation:g} exceeds {max_variation:g} over window {window:g}"
        )
    if variation < 1e-8 and not any(
        e.kind is EventKind.PLATEAU for e in traj.events
    ):
        traj.events.append(Event(EventKind.PLATEAU, float(s_end), False))
    return float(np.mean(tau_w))
