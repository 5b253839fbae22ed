import math

import numpy as np
import pytest

from translator_lab.errors import DomainError
from translator_lab.model import FamilyKind, FlowParams, ParallelFamily
from translator_lab.slopefield import (
    SlopeField,
    clamp_y,
    f_hyperbolic,
    f_parabolic,
    f_planar,
    f_rotational,
    one_minus_pow,
    residual_general,
)


def test_one_minus_pow_matches_naive_away_from_one():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        y = float(rng.uniform(-0.9, 0.9))
        r = int(rng.integers(1, 7))
        assert one_minus_pow(y, r) == pytest.approx(
            1.0 - (y * y) ** (1.0 / r), rel=1e-14, abs=1e-16
        )


def test_one_minus_pow_accurate_near_one():
    # 1 - y is exact for y in [0.5, 1], so the expm1/log1p route keeps full
    # relative precision where the naive power loses everything
    for k in range(1, 50):
        d = 2.0**-k
        y = 1.0 - d
        for r in (1, 2, 3, 5):
            got = one_minus_pow(y, r)
            exact = -math.expm1((2.0 / r) * math.log1p(-d))
            assert got == exact
            if r == 1:
                assert got == pytest.approx(d * (2.0 - d), rel=1e-15)
    assert one_minus_pow(1.0, 3) == 0.0
    assert one_minus_pow(-1.0, 2) == 0.0


def test_clamp_tolerance():
    assert clamp_y(1.0 + 1e-13) == 1.0
    assert clamp_y(-1.0 - 1e-13) == -1.0
    assert clamp_y(0.25) == 0.25
    with pytest.raises(DomainError):
        clamp_y(1.0 + 1e-11)


def test_rotational_field_values():
    p = FlowParams(epsilon=0, n=4, r=3)
    # C = 1 here: C * sqrt(1 - y^(2/3)) * s^2 - y / s
    s, y = 2.0, 0.125
    expect = math.sqrt(1.0 - 0.25) * 4.0 - 0.125 / 2.0
    assert f_rotational(p, s, y) == pytest.approx(expect, rel=1e-15)
    with pytest.raises(DomainError):
        f_rotational(p, 0.0, 0.5)


def test_hyperbolic_field_values_and_domain():
    p = FlowParams(epsilon=-1, n=4, r=2)
    s, y = 1.5, 0.25
    expect = p.c * math.sqrt(1.0 - 0.25) / math.tanh(1.5) - 2.0 * math.tanh(1.5) * 0.25
    assert f_hyperbolic(p, s, y) == pytest.approx(expect, rel=1e-14)
    with pytest.raises(DomainError):
        f_hyperbolic(p, 0.0, 0.5)
    # r = 1 has no coth factor and is regular at s = 0
    p1 = FlowParams(epsilon=-1, n=3, r=1)
    assert f_hyperbolic(p1, 0.0, 0.3) == pytest.approx(p1.c * math.sqrt(0.91))


def test_parabolic_and_planar_fields():
    p = FlowParams(epsilon=-1, n=3, r=2)
    assert f_parabolic(p, 0.0) == p.c
    assert f_parabolic(p, 1.0) == -(p.n - p.r)
    pe = FlowParams(epsilon=0, n=3, r=1)
    assert f_planar(pe, 0.6) == pytest.approx(0.8)
    with pytest.raises(DomainError):
        f_planar(FlowParams(epsilon=0, n=3, r=2), 0.0)


def test_field_dispatch_and_autonomy():
    p = FlowParams(epsilon=-1, n=3, r=2)
    rot = SlopeField(p, ParallelFamily.for_kind(FamilyKind.ROTATIONAL, -1, 3))
    par = SlopeField(p, ParallelFamily.for_kind(FamilyKind.PARABOLIC, -1, 3))
    assert rot(1.2, 0.4) == f_rotational(p, 1.2, 0.4)
    assert par(99.0, 0.4) == f_parabolic(p, 0.4)
    assert par.autonomous() and not rot.autonomous()
    with pytest.raises(DomainError):
        SlopeField(
            FlowParams(epsilon=0, n=3, r=2),
            ParallelFamily.for_kind(FamilyKind.PLANAR, 0, 1),
        )


def test_residual_general_zero_on_field_solutions():
    # along any solution of the reduced equation, the general residual of
    # the corresponding graph vanishes identically
    from translator_lab.model import alpha

    rng = np.random.default_rng(11)
    p = FlowParams(epsilon=-1, n=4, r=2)
    fam = ParallelFamily.for_kind(FamilyKind.ROTATIONAL, -1, 4)
    fld = SlopeField(p, fam)
    for _ in range(200):
        s = float(rng.uniform(0.3, 5.0))
        tau = float(rng.uniform(1e-3, 0.999))
        rho = tau ** (1.0 / p.r)
        dtau = fld(s, tau)
        rho_prime = dtau * rho / (p.r * tau)
        res = residual_general(p, alpha(fam, -1, s), rho, rho_prime)
        assert abs(res) < 1e-12


def test_residual_general_rejects_bad_rho():
    p = FlowParams(epsilon=0, n=3, r=1)
    with pytest.raises(DomainError):
        residual_general(p, -1.0, 1.5, 0.0)
