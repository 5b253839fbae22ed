"""Serialization of translators (CSV/JSON), reconstruction from documents,
and OBJ mesh export for rotational profiles."""

from __future__ import annotations

import io as _io
import json
import math

import numpy as np

from .errors import DomainError, IoError
from .limits import solve_L
from .model import FamilyKind, FlowParams, ParallelFamily
from .profile import Profile
from .translators import Branch, Regularity, Translator, TranslatorSpec

#: fixed record layout shared by the CSV and JSON sample encodings
COLUMNS = (
    "s",
    "tau",
    "rho",
    "rho_prime",
    "phi",
    "theta",
    "k_tangent",
    "k_normal",
    "H_r",
    "residual",
    "flags",
)

_NUMERIC = COLUMNS[:-1]

_PROFILE_ARRAYS = {
    "s": "s",
    "tau": "tau",
    "rho": "rho",
    "rho_prime": "rho_prime",
    "phi": "phi",
    "theta": "theta",
    "k_tangent": "k_tangent",
    "k_normal": "k_normal",
    "H_r": "h_r",
    "residual": "residual",
}


def _fmt(x: float) -> str:
    return "%.17g" % x


def branch_tag(branch: Branch) -> str:
    if branch.reflected:
        return "reflection"
    return "lower" if branch.orientation < 0 else "upper"


def _spec_dict(translator: Translator) -> dict:
    spec = translator.spec
    family = (
        translator.branches[0].profile.family.kind.value
        if translator.branches
        else FamilyKind.PLANAR.value
    )
    return {
        "epsilon": int(spec.params.epsilon),
        "n": spec.params.n,
        "r": spec.params.r,
        "kind": spec.kind,
        "lambda": spec.lam,
        "family": family,
        "regularity": translator.regularity.value,
        "min_height": translator.min_height,
        "s_min_height": translator.s_min_height,
    }


def _branch_samples(profile: Profile) -> list[list]:
    rows = []
    for i in range(profile.s.size):
        row = [float(getattr(profile, _PROFILE_ARRAYS[c])[i]) for c in _NUMERIC]
        row.append(profile.flags[i])
        rows.append(row)
    return rows


def export_profile(translator: Translator, fmt: str = "csv") -> bytes:
    """Serialize every sampled branch; floats keep 17 significant digits so
    a re-parse reproduces them bit-exactly."""
    if fmt == "json":
        doc = {
            "spec": _spec_dict(translator),
            "limits": solve_L(translator.spec.params).as_dict(),
            "degenerate": translator.degenerate,
            "branches": [
                {
                    "tag": branch_tag(b),
                    "reflected": b.reflected,
                    "samples": _branch_samples(b.profile),
                }
                for b in translator.branches
            ],
        }
        return json.dumps(doc, indent=1).encode()
    if fmt != "csv":
        raise DomainError(f"unknown export format {fmt!r}")
    out = _io.StringIO()
    out.write(",".join(COLUMNS) + "\n")
    if translator.degenerate:
        out.write("# degenerate translator, no branches\n")
    for b in translator.branches:
        out.write(f"# branch {branch_tag(b)} reflected={b.reflected}\n")
        p = b.profile
        cols = [getattr(p, _PROFILE_ARRAYS[c]) for c in _NUMERIC]
        for i in range(p.s.size):
            out.write(
                ",".join(_fmt(col[i]) for col in cols) + f",{p.flags[i]}\n"
            )
    return out.getvalue().encode()


def parse_profile(data: bytes, fmt: str = "csv") -> dict:
    """Inverse of export_profile, returning the JSON document structure."""
    text = data.decode()
    if fmt == "json":
        return json.loads(text)
    if fmt != "csv":
        raise DomainError(f"unknown export format {fmt!r}")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != ",".join(COLUMNS):
        raise IoError("missing or malformed CSV header")
    branches = []
    current = None
    for ln in lines[1:]:
        if ln.startswith("# branch "):
            head = ln[len("# branch ") :].split(" reflected=")
            current = {
                "tag": head[0],
                "reflected": head[1] == "True",
                "samples": [],
            }
            branches.append(current)
            continue
        if ln.startswith("#"):
            continue
        if current is None:
            raise IoError("sample row before any branch separator")
        parts = ln.split(",")
        if len(parts) != len(COLUMNS):
            raise IoError(f"expected {len(COLUMNS)} columns, got {len(parts)}")
        current["samples"].append([float(v) for v in parts[:-1]] + [parts[-1]])
    return {"branches": branches, "degenerate": not branches}


def write_profile(translator: Translator, path: str, fmt: str = "csv") -> None:
    try:
        with open(path, "wb") as sink:
            sink.write(export_profile(translator, fmt))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


# ----------------------------------------------------------- reconstruction

def translator_from_document(doc: dict) -> Translator:
    """Rebuild a Translator from a parsed JSON document (full spec needed)."""
    try:
        sd = doc["spec"]
        params = FlowParams(epsilon=sd["epsilon"], n=sd["n"], r=sd["r"])
        family = ParallelFamily.for_kind(
            FamilyKind(sd["family"]), params.epsilon, params.n
        )
        regularity = Regularity(sd["regularity"])
    except (KeyError, ValueError) as exc:
        raise IoError(f"document lacks a usable spec section: {exc}") from exc
    spec = TranslatorSpec(params, sd["kind"], sd.get("lambda"))
    branches = []
    for bd in doc.get("branches", []):
        samples = bd["samples"]
        cols = {
            name: np.array([row[j] for row in samples], dtype=float)
            for j, name in enumerate(_NUMERIC)
        }
        flags = [row[-1] for row in samples]
        r = params.r
        with np.errstate(invalid="ignore"):
            dtau = r * np.abs(cols["rho"]) ** (r - 1) * cols["rho_prime"]
        dtau = np.where(np.isfinite(dtau), dtau, 0.0)
        profile = Profile(
            params=params,
            family=family,
            sign_branch="plus",
            s=cols["s"],
            tau=cols["tau"],
            dtau=dtau,
            rho=cols["rho"],
            rho_prime=cols["rho_prime"],
            phi=cols["phi"],
            theta=cols["theta"],
            k_tangent=cols["k_tangent"],
            k_normal=cols["k_normal"],
            h_r=cols["H_r"],
            residual=cols["residual"],
            flags=flags,
            singular_marks=[],
        )
        orientation = -1 if bd["tag"] == "lower" else +1
        branches.append(Branch(profile, orientation, bool(bd["reflected"])))
    return Translator(
        spec=spec,
        branches=tuple(branches),
        regularity=regularity,
        min_height=sd.get("min_height"),
        s_min_height=sd.get("s_min_height"),
    )


# ------------------------------------------------------------------- meshes

def _leaf_radius(s: np.ndarray, model: str) -> np.ndarray:
    if model == "euclidean":
        return np.asarray(s, dtype=float)
    if model == "poincare":
        # Poincare-disk radius of the geodesic sphere of radius s
        return np.tanh(np.asarray(s, dtype=float) / 2.0)
    raise DomainError(f"unknown mesh model {model!r}")


def export_mesh(
    translator: Translator, model: str = "euclidean", angular_segments: int = 64
) -> bytes:
    """Surface-of-revolution OBJ of every branch: quad faces between
    consecutive profile samples and angular steps. For n > 2 this is a
    schematic revolution of the 2D profile."""
    if angular_segments < 8:
        raise DomainError("angular_segments must be at least 8")
    if translator.degenerate:
        raise DomainError("degenerate translator has no mesh")
    if translator.branches[0].profile.family.kind is not FamilyKind.ROTATIONAL:
        raise DomainError("mesh export needs a rotational family")
    doc = json.loads(export_profile(translator, "json"))
    return mesh_from_document(doc, model, angular_segments)


def mesh_from_document(
    doc: dict, model: str = "euclidean", angular_segments: int = 64
) -> bytes:
    if angular_segments < 8:
        raise DomainError("angular_segments must be at least 8")
    family = doc.get("spec", {}).get("family", FamilyKind.ROTATIONAL.value)
    if family != FamilyKind.ROTATIONAL.value:
        raise DomainError("mesh export needs a rotational family")
    k = angular_segments
    psi = 2.0 * math.pi * np.arange(k) / k
    cos_psi, sin_psi = np.cos(psi), np.sin(psi)
    out = _io.StringIO()
    out.write("# surface of revolution of a translator profile\n")
    out.write("# schematic: the profile is rotated in 3D for any base dimension\n")
    base = 0
    for bd in doc.get("branches", []):
        samples = bd["samples"]
        s = np.array([row[0] for row in samples])
        phi = np.array([row[4] for row in samples])
        # only a reflected branch shares its profile with the upper graph
        # and needs its heights negated; the lower sheet of an odd catenoid
        # stores genuine heights already
        sign = -1.0 if bd["reflected"] else 1.0
        radius = _leaf_radius(s, model)
        out.write(f"# branch {bd['tag']} vertices {base + 1}..{base + s.size * k}\n")
        flags = [row[-1] for row in samples]
        in_run = False
        for i, f in enumerate(flags):
            if f and not in_run:
                out.write(
                    f"# singular ring kind={f} s={_fmt(s[i])} "
                    f"vertices {base + i * k + 1}..{base + (i + 1) * k}\n"
                )
                in_run = True
            elif not f:
                in_run = False
        for i in range(s.size):
            z = sign * phi[i]
            r_i = radius[i]
            for j in range(k):
                out.write(
                    f"v {_fmt(r_i * cos_psi[j])} {_fmt(r_i * sin_psi[j])} {_fmt(z)}\n"
                )
        for i in range(s.size - 1):
            ring0 = base + i * k
            ring1 = ring0 + k
            for j in range(k):
                jn = (j + 1) % k
                out.write(
                    f"f {ring0 + j + 1} {ring0 + jn + 1} "
                    f"{ring1 + jn + 1} {ring1 + j + 1}\n"
                )
        base += s.size * k
    return out.getvalue().encode()


def write_mesh(
    translator: Translator,
    path: str,
    model: str = "euclidean",
    angular_segments: int = 64,
) -> None:
    try:
        with open(path, "wb") as sink:
            sink.write(export_mesh(translator, model, angular_segments))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
