import math

import pytest

from translator_lab.errors import DomainError
from translator_lab.model import (
    FamilyKind,
    FlowParams,
    ParallelFamily,
    SpaceForm,
    TrigKind,
    alpha,
    coefficient_C,
    trig,
)


def test_coefficient_exact_values():
    assert coefficient_C(2, 1) == 1.0
    assert coefficient_C(4, 3) == 1.0
    assert coefficient_C(4, 2) == pytest.approx(2.0 / 3.0, rel=0, abs=0)
    assert coefficient_C(6, 5) == 1.0
    # r / binom(n-1, r-1) is exactly representable here
    assert coefficient_C(5, 2) == 0.5


def test_coefficient_rejects_bad_orders():
    with pytest.raises(DomainError):
        coefficient_C(1, 1)
    with pytest.raises(DomainError):
        coefficient_C(4, 0)
    with pytest.raises(DomainError):
        coefficient_C(4, 4)


def test_flow_params_carries_constant():
    p = FlowParams(epsilon=-1, n=4, r=2)
    assert p.epsilon is SpaceForm.HYPERBOLIC
    assert p.c == coefficient_C(4, 2)
    with pytest.raises(DomainError):
        FlowParams(epsilon=2, n=4, r=2)


def test_trig_euclidean_degenerates_to_polynomials():
    assert trig(0, TrigKind.COS, 3.0) == 1.0
    assert trig(0, TrigKind.SIN, 3.0) == 3.0
    assert trig(0, TrigKind.TAN, 3.0) == 3.0
    assert trig(0, TrigKind.COT, 2.0) == 0.5
    with pytest.raises(DomainError):
        trig(0, TrigKind.COT, 0.0)


def test_trig_hyperbolic_identity():
    s = 0.7
    # cosh^2 - sinh^2 = 1
    assert trig(-1, TrigKind.COS, s) ** 2 - trig(-1, TrigKind.SIN, s) ** 2 == (
        pytest.approx(1.0, abs=1e-15)
    )
    assert trig(-1, TrigKind.TAN, s) == pytest.approx(math.tanh(s))


def test_family_domains():
    rot = ParallelFamily.for_kind(FamilyKind.ROTATIONAL, 0)
    assert rot.contains(1.0) and not rot.contains(0.0) and not rot.contains(-1.0)
    hyp1 = ParallelFamily.for_kind(FamilyKind.HYPERBOLIC, -1, 1)
    assert hyp1.contains(-3.0)
    hyp2 = ParallelFamily.for_kind(FamilyKind.HYPERBOLIC, -1, 2)
    assert not hyp2.contains(-3.0)
    with pytest.raises(DomainError):
        ParallelFamily.for_kind(FamilyKind.PARABOLIC, 0)
    with pytest.raises(DomainError):
        ParallelFamily.for_kind(FamilyKind.PLANAR, -1)


def test_alpha_values():
    rot = ParallelFamily.for_kind(FamilyKind.ROTATIONAL, 0)
    assert alpha(rot, 0, 2.0) == -0.5
    rot_h = ParallelFamily.for_kind(FamilyKind.ROTATIONAL, -1)
    assert alpha(rot_h, -1, 2.0) == pytest.approx(-1.0 / math.tanh(2.0))
    par = ParallelFamily.for_kind(FamilyKind.PARABOLIC, -1)
    assert alpha(par, -1, -5.0) == -1.0
    hyp = ParallelFamily.for_kind(FamilyKind.HYPERBOLIC, -1, 1)
    assert alpha(hyp, -1, 1.0) == pytest.approx(-math.tanh(1.0))
    pla = ParallelFamily.for_kind(FamilyKind.PLANAR, 0)
    assert alpha(pla, 0, 0.3) == 0.0
    with pytest.raises(DomainError):
        alpha(rot, 0, -1.0)
