"""Command-line surface.

Exit codes: 0 success, 2 domain/parity error, 3 numerical failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    DomainError,
    GlueError,
    IoError,
    NumericalError,
    TranslatorLabError,
)
from .flowsim import soliton_drift
from .ivp import StepControl
from .limits import solve_L
from .model import FamilyKind, FlowParams, ParallelFamily
from .translators import (
    Translator,
    Variant,
    build_bowl,
    build_catenoid,
    build_grim_reaper,
)
from . import io as tio
from . import verify as tverify

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4


def _add_params(p: argparse.ArgumentParser, with_r: bool = True) -> None:
    p.add_argument("--eps", type=int, required=True, choices=(0, -1))
    p.add_argument("--n", type=int, required=True)
    if with_r:
        p.add_argument("--r", type=int, required=True)


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-max", type=float, default=None)
    p.add_argument("--rtol", type=float, default=None)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", default=None, help="also render a profile figure here")


def _ctrl(args) -> StepControl | None:
    if args.s_max is None and args.rtol is None:
        return None
    kw = {}
    if args.s_max is not None:
        kw["s_max"] = args.s_max
    if args.rtol is not None:
        kw["rel_tol"] = args.rtol
    return StepControl(**kw)


def _emit(translator: Translator, args) -> None:
    data = tio.export_profile(translator, args.format)
    if args.out:
        try:
            with open(args.out, "wb") as sink:
                sink.write(data)
        except OSError as exc:
            raise IoError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(data.decode())
    if args.plot:
        from .plotting import render_profile_figure

        render_profile_figure(translator, args.plot)


def _cmd_bowl(args) -> int:
    params = FlowParams(epsilon=args.eps, n=args.n, r=args.r)
    kind = FamilyKind.PARABOLIC if args.parabolic else FamilyKind.ROTATIONAL
    family = ParallelFamily.for_kind(kind, params.epsilon, params.n)
    _emit(build_bowl(params, family, _ctrl(args)), args)
    return EXIT_OK


def _cmd_catenoid(args) -> int:
    params = FlowParams(epsilon=args.eps, n=args.n, r=args.r)
    family = ParallelFamily.for_kind(
        FamilyKind(args.family), params.epsilon, params.n
    )
    variant = Variant(args.variant)
    _emit(build_catenoid(params, family, args.lam, variant, _ctrl(args)), args)
    return EXIT_OK


def _cmd_grim_reaper(args) -> int:
    params = FlowParams(epsilon=args.eps, n=args.n, r=1)
    _emit(build_grim_reaper(params, args.lam, _ctrl(args)), args)
    return EXIT_OK


def _cmd_limit(args) -> int:
    params = FlowParams(epsilon=args.eps, n=args.n, r=args.r)
    print(json.dumps(solve_L(params).as_dict(), indent=2))
    return EXIT_OK


def _read_document(path: str) -> dict:
    try:
        with open(path, "rb") as src:
            return tio.parse_profile(src.read(), "json")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _cmd_mesh(args) -> int:
    doc = _read_document(args.infile)
    data = tio.mesh_from_document(doc, args.model, args.segments)
    try:
        with open(args.out, "wb") as sink:
            sink.write(data)
    except OSError as exc:
        raise IoError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def _cmd_flow_check(args) -> int:
    translator = tio.translator_from_document(_read_document(args.infile))
    drift = soliton_drift(translator, args.u, args.steps)
    print(f"{drift:.6e}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    params = FlowParams(epsilon=args.eps, n=args.n, r=args.r)
    suites = (
        ["propositions", "gluing", "exponent", "limits"]
        if args.suite == "all"
        else [args.suite]
    )
    catenoid = None
    if "gluing" in suites or "exponent" in suites:
        family = ParallelFamily.for_kind(
            FamilyKind.ROTATIONAL, params.epsilon, params.n
        )
        variant = Variant.ODD if params.r % 2 == 1 else Variant.EVEN1
        catenoid = build_catenoid(params, family, args.lam, variant)
    reports = []
    for suite in suites:
        if suite == "propositions":
            reports.append(tverify.verify_propositions(params, tuple(args.grid)))
        elif suite == "gluing":
            reports.append(tverify.verify_gluing(catenoid))
        elif suite == "exponent":
            if params.r == 1 and args.suite == "all":
                continue  # no blow-up claim to check for r=1
            reports.append(tverify.verify_singularity_exponent(catenoid))
        elif suite == "limits":
            reports.append(tverify.verify_limits(params))
    print(json.dumps([rep.as_dict() for rep in reports], indent=2))
    for rep in reports:
        print(rep.render_table(), file=sys.stderr)
    failed = any(not rep.passed for rep in reports)
    return EXIT_VERIFICATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="translator-lab",
        description="construct, export, and verify translating solitons "
        "of the r-th mean curvature flow over parallel-leaf families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bowl", help="entire convex translator")
    _add_params(p)
    p.add_argument("--parabolic", action="store_true")
    _add_output(p)
    p.set_defaults(fn=_cmd_bowl)

    p = sub.add_parser("catenoid", help="annulus-type translator")
    _add_params(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument(
        "--variant", required=True, choices=[v.value for v in Variant]
    )
    p.add_argument(
        "--family",
        required=True,
        choices=("rotational", "parabolic", "hyperbolic"),
    )
    _add_output(p)
    p.set_defaults(fn=_cmd_catenoid)

    p = sub.add_parser("grim-reaper", help="translator over parallel hyperplanes")
    _add_params(p, with_r=False)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    _add_output(p)
    p.set_defaults(fn=_cmd_grim_reaper)

    p = sub.add_parser("limit", help="asymptotic constants as JSON")
    _add_params(p)
    p.set_defaults(fn=_cmd_limit)

    p = sub.add_parser("mesh", help="OBJ surface of revolution")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--model", choices=("euclidean", "poincare"), default="euclidean")
    p.add_argument("--segments", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_mesh)

    p = sub.add_parser("flow-check", help="drift of a stored translator")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--u", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=10000)
    p.set_defaults(fn=_cmd_flow_check)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument(
        "--suite",
        required=True,
        choices=("propositions", "gluing", "exponent", "limits", "all"),
    )
    _add_params(p)
    p.add_argument("--grid", type=float, nargs="+", default=[0.2, 1.0, 5.0])
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, GlueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NumericalError, IoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except TranslatorLabError as exc:  # any future taxonomy member
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
