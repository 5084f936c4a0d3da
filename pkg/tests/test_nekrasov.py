from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from agtcheck.exactcore import ParamPoint, solve_linear
from agtcheck.nekrasov import (
    agt_compare,
    coulomb_gl,
    fixed_points,
    heis_whittaker_series,
    tangent_weights,
    z_series,
)
from agtcheck.rootdata import multipartition_count, root_to_gl

from conftest import A1, A2, generic_point
from test_verma import virasoro_gram


def u1_point(p):
    return ParamPoint(p.eps1, p.eps2, ())


@pytest.mark.parametrize("r,d", [(1, 4), (2, 3), (3, 2)])
def test_fixed_points_and_weight_count(r, d):
    fps = fixed_points(r, d)
    assert len(fps) == multipartition_count(r, d)
    for fp in fps:
        assert len(tangent_weights(fp)) == 2 * r * d


@given(st.integers(0, 1000))
@settings(max_examples=10)
def test_u1_exponential_identity(seed):
    p = u1_point(generic_point(A1, seed))
    z = z_series(1, 5, p)
    assert all(z[d] == 1 / (factorial(d) * (p.eps1 * p.eps2) ** d) for d in range(6))


def test_u2_first_coefficient_closed_form(p1):
    e, q, a = p1.eps1 * p1.eps2, p1.q, p1.a[0]
    assert z_series(2, 1, p1)[1] == -2 / (e * (a * a - q * q))


@given(st.integers(0, 1000))
@settings(max_examples=6)
def test_u2_symmetries(seed):
    p = generic_point(A1, seed)
    z = z_series(2, 3, p)
    assert z == z_series(2, 3, p.swapped())
    assert z == z_series(2, 3, p.negated())


def test_coordinates_root_and_gl_agree(p2):
    gl = ParamPoint(p2.eps1, p2.eps2, root_to_gl(p2.a))
    assert coulomb_gl(3, p2) == gl.a
    assert z_series(3, 2, p2) == z_series(3, 2, gl)


def test_u2_matches_virasoro_whittaker_norms(p1):
    # norms from the Virasoro commutation relations alone, no Fock space
    z = z_series(2, 4, p1)
    for d in range(1, 5):
        k = virasoro_gram(p1, d)
        x = solve_linear(k, [Fraction(int(i == len(k) - 1)) for i in range(len(k))])
        assert z[d] == x[-1]


@given(st.integers(0, 1000))
@settings(max_examples=3)
def test_u3_matches_w3_whittaker_norms(seed):
    rep = agt_compare(3, generic_point(A2, seed))
    assert rep["r"] == 3
    assert rep["direct_ratios"] == ["1"] * 4


@pytest.mark.parametrize("r", [1, 2, 3])
def test_heisenberg_norms_closed_form(r, p1):
    h = heis_whittaker_series(r, 4, p1)
    assert list(h) == [1 / (factorial(d) * (r * p1.eps1 * p1.eps2) ** d) for d in range(5)]


def test_agt_report_fields(p1):
    rep = agt_compare(3, p1)
    for key in ("r", "dmax", "params", "z_coeffs", "heis_coeffs", "verma_norms", "ratios", "verdict"):
        assert key in rep
    assert rep["direct_verdict"] is True
    assert all(x == 1 for x in rep["_direct"])


def test_agt_convolution_ratios_are_not_a_power_law(p1):
    # Z_d equals V_d, so dividing by the Heisenberg convolution cannot give rho_1^d
    rep = agt_compare(3, p1)
    assert rep["verdict"] is False
    r = rep["_ratios"]
    assert r[2] != r[1] ** 2
