from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from agtcheck.exactcore import ParamPoint, sample_params
from agtcheck.rootdata import RootSystem

settings.register_profile(
    "exact", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

A1, A2 = RootSystem.A(1), RootSystem.A(2)

# fixed generic points reused across modules
P1 = ParamPoint(Fraction(1, 3), Fraction(-2, 5), (Fraction(7, 2),))
P2 = ParamPoint(Fraction(1, 3), Fraction(-2, 5), (Fraction(7, 2), Fraction(5, 3)))


def rationals(max_den=7, bound=5, nonzero=False):
    s = st.builds(Fraction, st.integers(-bound * max_den, bound * max_den), st.integers(1, max_den))
    return s.filter(bool) if nonzero else s


def generic_point(rs, seed):
    return sample_params(seed, rs.rank, avoid=rs.genericity_constraints())


@pytest.fixture(scope="session")
def p1():
    return P1


@pytest.fixture(scope="session")
def p2():
    return P2


# label -> (ok, description, detail); filled by the acceptance suite
ACCEPTANCE: dict = {}


def _label_key(label):
    return (int(label.rstrip("+")), label)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=_label_key):
        ok, desc, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"criterion {label:>3}: {'PASS' if ok else 'FAIL'}  {desc}  [{detail}]")
