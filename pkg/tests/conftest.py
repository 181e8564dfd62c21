from __future__ import annotations

import re
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from halfspin.fieldtower import TowerSpec

settings.register_profile("exact", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

Q_I = TowerSpec.make(None, -1)  # Q(i) over Q
SQRT2_I = TowerSpec.make(2, -1)  # Q(sqrt2, i) over Q(sqrt2)
SQRT5_I = TowerSpec.make(5, -1)
SQRT3_TWISTED = TowerSpec.make(3, (-3, 1))  # m2 = -3 + sqrt3, totally negative
TOWERS = [Q_I, SQRT2_I, SQRT5_I, SQRT3_TWISTED, TowerSpec.make(None, -3)]


@pytest.fixture
def sqrt2_tower():
    return SQRT2_I


@pytest.fixture
def qi_tower():
    return Q_I


small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def elements(tower: TowerSpec, *, base: bool = False, nonzero: bool = False):
    coords = st.tuples(small_rationals, small_rationals, small_rationals, small_rationals)

    def build(c):
        c = list(c)
        if tower.m1 is None:
            c[1] = c[3] = Fraction(0)
        if base:
            c[2] = c[3] = Fraction(0)
        return tower(*c)

    s = coords.map(build)
    return s.filter(lambda x: not x.is_zero()) if nonzero else s


towers = st.sampled_from(TOWERS)


# --- one summary line per acceptance criterion --------------------------------

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_(A\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[m.group(1)] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k[1:])):
        verdict = "PASS" if _ACCEPTANCE[key] == "passed" else "FAIL"
        terminalreporter.write_line(f"{key}: {verdict}")
