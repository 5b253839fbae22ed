"""Shared fixtures: expensive constructions are session-scoped."""

import pytest

from translator_lab.ivp import StepControl
from translator_lab.model import FamilyKind, FlowParams, ParallelFamily
from translator_lab.translators import (
    Variant,
    build_bowl,
    build_catenoid,
    build_grim_reaper,
)


def family(kind, eps, n):
    return ParallelFamily.for_kind(kind, eps, n)


@pytest.fixture(scope="session")
def bowl_043():
    p = FlowParams(epsilon=0, n=4, r=3)
    return build_bowl(p, family(FamilyKind.ROTATIONAL, 0, 4))


@pytest.fixture(scope="session")
def bowl_021():
    p = FlowParams(epsilon=0, n=2, r=1)
    return build_bowl(p, family(FamilyKind.ROTATIONAL, 0, 2))


@pytest.fixture(scope="session")
def parabolic_bowl_21():
    p = FlowParams(epsilon=-1, n=2, r=1)
    return build_bowl(p, family(FamilyKind.PARABOLIC, -1, 2))


@pytest.fixture(scope="session")
def odd_catenoid_043():
    p = FlowParams(epsilon=0, n=4, r=3)
    return build_catenoid(
        p, family(FamilyKind.ROTATIONAL, 0, 4), 0.5, Variant.ODD
    )


@pytest.fixture(scope="session")
def even1_catenoid_32():
    p = FlowParams(epsilon=-1, n=3, r=2)
    return build_catenoid(
        p, family(FamilyKind.ROTATIONAL, -1, 3), 0.5, Variant.EVEN1
    )


@pytest.fixture(scope="session")
def even2_catenoid_32():
    p = FlowParams(epsilon=-1, n=3, r=2)
    return build_catenoid(
        p, family(FamilyKind.ROTATIONAL, -1, 3), 0.5, Variant.EVEN2
    )


@pytest.fixture(scope="session")
def grim_euclid_3():
    return build_grim_reaper(FlowParams(epsilon=0, n=3, r=1))


@pytest.fixture(scope="session")
def grim_hyperbolic_3():
    return build_grim_reaper(
        FlowParams(epsilon=-1, n=3, r=1), lam=0.3, ctrl=StepControl(s_max=12.0)
    )
