import json

import numpy as np
import pytest

from translator_lab import cli
from translator_lab.errors import DomainError, IoError
from translator_lab.io import (
    export_mesh,
    export_profile,
    mesh_from_document,
    parse_profile,
    translator_from_document,
    write_profile,
)
from translator_lab.model import FlowParams
from translator_lab.translators import build_vertical_hyperplane


def test_csv_round_trip_bit_exact(bowl_021):
    data = export_profile(bowl_021, "csv")
    doc = parse_profile(data, "csv")
    prof = bowl_021.branches[0].profile
    assert len(doc["branches"]) == 1
    b = doc["branches"][0]
    assert b["tag"] == "upper" and not b["reflected"]
    got = np.array([row[:10] for row in b["samples"]], dtype=float)
    want = np.column_stack(
        [
            prof.s,
            prof.tau,
            prof.rho,
            prof.rho_prime,
            prof.phi,
            prof.theta,
            prof.k_tangent,
            prof.k_normal,
            prof.h_r,
            prof.residual,
        ]
    )
    # 17 significant digits survive the text round trip exactly
    assert np.array_equal(got, want)
    assert [row[-1] for row in b["samples"]] == prof.flags


def test_json_round_trip_and_reconstruction(odd_catenoid_043):
    data = export_profile(odd_catenoid_043, "json")
    doc = parse_profile(data, "json")
    assert doc["spec"]["kind"] == "CatenoidOdd"
    assert doc["spec"]["lambda"] == 0.5
    assert [b["tag"] for b in doc["branches"]] == ["lower", "upper"]
    rebuilt = translator_from_document(doc)
    assert rebuilt.spec.kind == "CatenoidOdd"
    assert rebuilt.min_height == odd_catenoid_043.min_height
    for orig, back in zip(odd_catenoid_043.branches, rebuilt.branches):
        assert back.orientation == orig.orientation
        assert np.array_equal(back.profile.s, orig.profile.s)
        assert np.array_equal(back.profile.phi, orig.profile.phi)
        assert back.profile.flags == orig.profile.flags


def test_reflected_branch_tags(even2_catenoid_32):
    doc = parse_profile(export_profile(even2_catenoid_32, "json"), "json")
    tags = [(b["tag"], b["reflected"]) for b in doc["branches"]]
    assert tags == [("upper", False), ("reflection", True)]


def test_degenerate_document():
    tr = build_vertical_hyperplane(FlowParams(epsilon=0, n=4, r=2))
    doc = parse_profile(export_profile(tr, "json"), "json")
    assert doc["degenerate"] and doc["branches"] == []
    csv_doc = parse_profile(export_profile(tr, "csv"), "csv")
    assert csv_doc["degenerate"]


def test_parse_rejects_malformed():
    with pytest.raises(IoError):
        parse_profile(b"not,a,header\n1,2,3\n", "csv")
    with pytest.raises(IoError):
        parse_profile(
            b"s,tau,rho,rho_prime,phi,theta,k_tangent,k_normal,H_r,residual,flags\n"
            b"1,2,3\n",
            "csv",
        )
    ok_header = b"s,tau,rho,rho_prime,phi,theta,k_tangent,k_normal,H_r,residual,flags\n"
    with pytest.raises(IoError):
        parse_profile(ok_header + b"1,2,3,4,5,6,7,8,9,10,\n", "csv")  # no branch yet
    with pytest.raises(DomainError):
        export_profile(build_vertical_hyperplane(FlowParams(epsilon=0, n=3, r=2)), "xml")


def test_mesh_structure(bowl_021, tmp_path):
    data = export_mesh(bowl_021, "euclidean", angular_segments=16)
    lines = data.decode().splitlines()
    verts = [ln for ln in lines if ln.startswith("v ")]
    faces = [ln for ln in lines if ln.startswith("f ")]
    m = bowl_021.branches[0].profile.s.size
    k = 16
    assert len(verts) == m * k
    assert len(faces) == (m - 1) * k
    # annulus: V - E + F = mk - (2mk - k) + (m-1)k = 0
    edges = 2 * len(faces) * 4 // 2  # each quad edge shared by two faces...
    v_count, f_count = len(verts), len(faces)
    e_count = 2 * m * k - k
    assert v_count - e_count + f_count == 0
    assert any(ln.startswith("# branch upper vertices 1..") for ln in lines)


def test_mesh_poincare_radii(even1_catenoid_32):
    data = export_mesh(even1_catenoid_32, "poincare", angular_segments=8)
    radii = [
        float(ln.split()[1]) ** 2 + float(ln.split()[2]) ** 2
        for ln in data.decode().splitlines()
        if ln.startswith("v ")
    ]
    assert max(radii) < 1.0  # everything inside the unit disk


def test_mesh_singular_ring_comment(odd_catenoid_043):
    data = export_mesh(odd_catenoid_043, angular_segments=8).decode()
    assert "# singular ring kind=VT" in data
    assert "# singular ring kind=C2" in data


def test_mesh_rejections(parabolic_bowl_21, bowl_021):
    with pytest.raises(DomainError):
        export_mesh(parabolic_bowl_21)
    with pytest.raises(DomainError):
        export_mesh(bowl_021, angular_segments=4)
    with pytest.raises(DomainError):
        export_mesh(build_vertical_hyperplane(FlowParams(epsilon=0, n=3, r=2)))
    with pytest.raises(DomainError):
        export_mesh(bowl_021, model="klein")


def test_write_profile_bad_path(bowl_021):
    with pytest.raises(IoError):
        write_profile(bowl_021, "/nonexistent-dir/out.csv")


# ------------------------------------------------------------------ CLI


def run_cli(*argv):
    return cli.main(list(argv))


def test_cli_bowl_json_and_plot(tmp_path):
    out = tmp_path / "bowl.json"
    png = tmp_path / "bowl.png"
    code = run_cli(
        "bowl", "--eps", "0", "--n", "2", "--r", "1",
        "--s-max", "4", "--format", "json",
        "--out", str(out), "--plot", str(png),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["spec"]["kind"] == "Bowl"
    assert png.stat().st_size > 0


def test_cli_pipeline_mesh_and_flow_check(tmp_path, capsys):
    prof = tmp_path / "bowl.json"
    obj = tmp_path / "bowl.obj"
    assert run_cli(
        "bowl", "--eps", "0", "--n", "4", "--r", "3",
        "--format", "json", "--out", str(prof),
    ) == 0
    assert run_cli("mesh", "--in", str(prof), "--segments", "8", "--out", str(obj)) == 0
    assert obj.read_bytes().startswith(b"# surface of revolution")
    assert run_cli("flow-check", "--in", str(prof), "--u", "0.01", "--steps", "1000") == 0
    drift = float(capsys.readouterr().out.strip().splitlines()[-1])
    assert drift < 1e-3


def test_cli_grim_reaper_csv(capsys):
    assert run_cli("grim-reaper", "--eps", "0", "--n", "3") == 0
    out = capsys.readouterr().out
    assert out.startswith("s,tau,rho,")
    assert "# branch upper reflected=False" in out


def test_cli_limit(capsys):
    assert run_cli("limit", "--eps", "-1", "--n", "3", "--r", "2") == 0
    doc = json.loads(capsys.readouterr().out)
    assert 0.0 < doc["L"] < 1.0 and doc["method"] == "bisection"


def test_cli_exit_codes(tmp_path, capsys):
    # parity violation -> 2
    assert run_cli(
        "catenoid", "--eps", "0", "--n", "4", "--r", "2",
        "--lambda", "0.5", "--variant", "odd", "--family", "rotational",
    ) == 2
    # unreadable input -> 3
    assert run_cli("flow-check", "--in", str(tmp_path / "missing.json")) == 3
    # verification of a sound configuration -> 0
    assert run_cli("verify", "--suite", "limits", "--eps", "-1", "--n", "3", "--r", "2") == 0
    capsys.readouterr()


def test_cli_verify_gluing(capsys):
    assert run_cli(
        "verify", "--suite", "gluing", "--eps", "0", "--n", "4", "--r", "3",
        "--lambda", "0.5",
    ) == 0
    reports = json.loads(capsys.readouterr().out)
    assert reports and all(e["passed"] for rep in reports for e in rep["entries"])
