"""Numerical construction, analysis, and verification of translating
solitons to the r-th mean curvature flow over parallel-leaf families in
Euclidean and hyperbolic product spaces."""

from .errors import (
    DomainError,
    FitError,
    GlueError,
    IoError,
    NotConverged,
    NumericalError,
    ParityError,
    QuadratureError,
    StabilityError,
    StiffnessError,
    TranslatorLabError,
)
from .flowsim import GraphState, select_window, soliton_drift, step, vertical_speed
from .io import export_mesh, export_profile, parse_profile, translator_from_document
from .ivp import StepControl, Trajectory, estimate_limit, solve_branch, solve_tau_zero
from .limits import LimitReport, apex_curvature, asymptotic_angle, solve_L
from .model import FamilyKind, FlowParams, ParallelFamily, SpaceForm, coefficient_C
from .profile import Profile, SingularMark, build_profile, height
from .slopefield import SlopeField, one_minus_pow, residual_general
from .translators import (
    Branch,
    GlueKind,
    Regularity,
    Translator,
    TranslatorSpec,
    Variant,
    build_bowl,
    build_catenoid,
    build_grim_reaper,
    build_vertical_hyperplane,
    reflect_glue,
)
from .verify import (
    VerificationReport,
    verify_gluing,
    verify_limits,
    verify_propositions,
    verify_singularity_exponent,
)

__version__ = "1.0.0"
