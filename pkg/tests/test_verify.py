import numpy as np
import pytest

from translator_lab.errors import DomainError, FitError
from translator_lab.ivp import StepControl, Trajectory, solve_branch
from translator_lab.model import FamilyKind, FlowParams, ParallelFamily
from translator_lab.verify import (
    VerificationReport,
    claim_monotone,
    claim_positive,
    claim_unique_zero,
    max_threads,
    verify_gluing,
    verify_limits,
    verify_propositions,
    verify_singularity_exponent,
)


def test_max_threads_env(monkeypatch):
    monkeypatch.setenv("TRANSLATOR_LAB_THREADS", "3")
    assert max_threads() == 3
    monkeypatch.setenv("TRANSLATOR_LAB_THREADS", "junk")
    assert max_threads() >= 1
    monkeypatch.delenv("TRANSLATOR_LAB_THREADS")
    assert max_threads() >= 1


def test_propositions_euclidean_pass():
    rep = verify_propositions(FlowParams(epsilon=0, n=4, r=3), s0_grid=(0.5,))
    assert rep.passed, rep.render_table()
    claims = {e.claim for e in rep.entries}
    assert "rotational/s0=0.5/ordering" in claims
    assert rep.failures == []


def test_propositions_hyperbolic_pass():
    rep = verify_propositions(FlowParams(epsilon=-1, n=3, r=1), s0_grid=(1.0,))
    assert rep.passed, rep.render_table()
    claims = {e.claim for e in rep.entries}
    assert "parabolic/s0=1/constant-solution" in claims
    assert "hyperbolic/s0=1/two-sided-limits" in claims
    assert "hyperbolic/s0=1/mirror-congruence" in claims


def test_propositions_rejects_empty_grid():
    with pytest.raises(DomainError):
        verify_propositions(FlowParams(epsilon=0, n=3, r=1), s0_grid=())


def test_corrupted_trajectory_fails_claims():
    # negative control: flip the lower branch upside down and the claimed
    # properties must fail
    p = FlowParams(epsilon=0, n=4, r=3)
    fam = ParallelFamily.for_kind(FamilyKind.ROTATIONAL, 0, 4)
    traj = solve_branch(p, fam, "minus", 0.5, StepControl(s_max=5.0))
    bad = Trajectory(
        s=traj.s,
        tau=-traj.tau,
        dtau=-traj.dtau,
        branch_tag="corrupted",
        field=traj.field,
    )
    ok, _ = claim_monotone(bad)
    assert not ok
    ok, _ = claim_positive(bad)
    assert not ok
    ok, count = claim_unique_zero(bad)  # no refined crossing events attached
    assert not ok and count == 0.0


def test_gluing_odd(odd_catenoid_043):
    rep = verify_gluing(odd_catenoid_043)
    assert rep.passed, rep.render_table()
    assert {e.claim for e in rep.entries} == {
        "neck-vertical-tangent",
        "normal-curvature-match",
        "regularity-class",
    }


def test_gluing_even_variants(even1_catenoid_32, even2_catenoid_32):
    for tr in (even1_catenoid_32, even2_catenoid_32):
        rep = verify_gluing(tr)
        assert rep.passed, rep.render_table()
        assert "soliton-residual" in {e.claim for e in rep.entries}


def test_gluing_rejects_non_catenoid(bowl_043):
    with pytest.raises(DomainError):
        verify_gluing(bowl_043)


def test_exponent_odd(odd_catenoid_043):
    rep = verify_singularity_exponent(odd_catenoid_043)
    assert rep.passed, rep.render_table()
    slope = rep.entries[0].measured
    assert slope == pytest.approx((1.0 - 3.0) / 3.0, abs=0.05)


def test_exponent_even1(even1_catenoid_32):
    rep = verify_singularity_exponent(even1_catenoid_32)
    assert rep.passed
    assert rep.entries[0].measured == pytest.approx(-0.5, abs=0.05)


def test_exponent_rejections(even2_catenoid_32, bowl_043):
    with pytest.raises(DomainError):
        verify_singularity_exponent(even2_catenoid_32)
    with pytest.raises(DomainError):
        verify_singularity_exponent(bowl_043)
    from translator_lab.translators import Variant, build_catenoid

    p = FlowParams(epsilon=0, n=3, r=1)
    fam = ParallelFamily.for_kind(FamilyKind.ROTATIONAL, 0, 3)
    smooth = build_catenoid(p, fam, 0.5, Variant.ODD, StepControl(s_max=5.0))
    with pytest.raises(DomainError):
        verify_singularity_exponent(smooth)


def test_limits_suite():
    for eps in (0, -1):
        rep = verify_limits(FlowParams(epsilon=eps, n=4, r=2))
        assert rep.passed, rep.render_table()


def test_report_rendering():
    rep = verify_limits(FlowParams(epsilon=-1, n=3, r=2))
    d = rep.as_dict()
    assert d["suite"] == "limits" and d["passed"]
    table = rep.render_table()
    assert "PASS" in table and "0 failures" in table
    js = rep.render_json()
    assert '"limit-equation-root"' in js
    other = VerificationReport(suite="limits")
    other.extend(rep)
    assert len(other.entries) == len(rep.entries)
