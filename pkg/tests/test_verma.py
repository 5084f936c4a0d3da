from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from agtcheck.exactcore import determinant, solve_linear
from agtcheck.rootdata import multipartition_count, partitions
from agtcheck.verma import VermaModule, gram_matrix, lambda_zero, whittaker

from conftest import A1, A2, P1, P2, generic_point


def virasoro_gram(p, d):
    """Gram matrix from the Virasoro commutation relations alone.

    Tilded normalization: [L_m, L_n] = e (m - n) L_{m+n} + C (m^3 - m)/12 delta,
    with e = eps1 eps2, C = e (e + 6 Q^2) and L_0 |h> = -(a^2 - Q^2)/4 |h>.
    """
    e, q, a = p.eps1 * p.eps2, p.q, p.a[0]
    big_c = e * (e + 6 * q * q)
    h = -(a * a - q * q) / 4

    @lru_cache(maxsize=None)
    def vev(word):
        # <h| L_{word[0]} ... L_{word[-1]} |h>: move the leftmost creation mode to the left
        j = next((k for k, m in enumerate(word) if m < 0), None)
        if j is None:
            return h ** len(word) if all(m == 0 for m in word) else Fraction(0)
        if j == 0:
            return Fraction(0)
        a, b = word[j - 1], word[j]
        head, tail = word[: j - 1], word[j + 1:]
        total = vev(head + (b, a) + tail) + e * (a - b) * vev(head + (a + b,) + tail)
        if a + b == 0:
            total += big_c * Fraction(a**3 - a, 12) * vev(head + tail)
        return total

    basis = partitions(d)
    return [[vev(tuple(reversed(lam)) + tuple(-x for x in mu)) for mu in basis] for lam in basis]


@pytest.mark.parametrize("d", range(0, 5))
def test_a1_gram_matches_virasoro_oracle(d, p1):
    assert gram_matrix(d, p1, A1).entries == virasoro_gram(p1, d)


@given(st.integers(0, 500))
@settings(max_examples=8)
def test_a1_gram_matches_oracle_at_random_points(seed):
    p = generic_point(A1, seed)
    for d in range(0, 4):
        assert gram_matrix(d, p, A1).entries == virasoro_gram(p, d)


def test_first_gram_entry_closed_form(p1):
    e, q, a = p1.eps1 * p1.eps2, p1.q, p1.a[0]
    assert gram_matrix(1, p1, A1).entries == [[-e * (a * a - q * q) / 2]]


@pytest.mark.parametrize("rs,p,dmax", [(A1, P1, 4), (A2, P2, 3)])
def test_gram_two_ways(rs, p, dmax):
    m = VermaModule(rs, p)
    for d in range(dmax + 1):
        assert m.gram(d).entries == m.gram_by_pairing(d).entries


@pytest.mark.parametrize("d", range(1, 4))
def test_a2_gram_transpose_is_gram_at_negated_point(d, p2):
    k = gram_matrix(d, p2, A2).entries
    assert [list(r) for r in zip(*k)] == gram_matrix(d, p2.negated(), A2).entries


@pytest.mark.parametrize("rs,p,dmax", [(A1, P1, 4), (A2, P2, 3)])
def test_gram_size_and_nondegeneracy(rs, p, dmax):
    m = VermaModule(rs, p)
    for d in range(dmax + 1):
        g = m.gram(d)
        assert len(g.basis) == multipartition_count(rs.rank, d)
        assert g.determinant() != 0


def test_lambda_zero_is_last_basis_element():
    assert VermaModule(A2, P2).basis(3)[-1] == lambda_zero(2, 3)


def test_whittaker_a1_conditions_and_norms(p1):
    ws = whittaker(4, p1, A1)
    for d in range(1, 5):
        rep = ws[d].report
        assert rep["dual_basis"] and rep["whittaker_conditions"]
        assert rep["top_sign"] == 1
        # norm solves K x = e_lam0 against an independently built Gram matrix
        k = virasoro_gram(p1, d)
        x = solve_linear(k, [Fraction(int(i == len(k) - 1)) for i in range(len(k))])
        assert ws[d].norm == x[-1]


def test_whittaker_a1_first_norm_closed_form(p1):
    e, q, a = p1.eps1 * p1.eps2, p1.q, p1.a[0]
    assert whittaker(1, p1, A1)[1].norm == -2 / (e * (a * a - q * q))


def test_whittaker_a2_conditions_carry_sign(p2):
    ws = whittaker(3, p2, A2)
    for d in range(1, 4):
        rep = ws[d].report
        assert rep["dual_basis"] and rep["whittaker_conditions"]
        assert rep["top_sign"] == -1


def test_whittaker_norm_is_inverse_gram_entry(p2):
    m = VermaModule(A2, P2)
    for d in (1, 2):
        k = m.gram(d).entries
        n = len(k)
        # Cramer: (K^-1)_{last,last} = minor / det
        minor = [row[:-1] for row in k[:-1]]
        expected = determinant(minor) / determinant(k) if n > 1 else 1 / k[0][0]
        assert m.whittaker_vector(d).norm == expected


def test_whittaker_json_is_exact_strings(p1):
    w = whittaker(2, p1, A1, verify=False)[2]
    js = w.to_json()
    assert set(js) == {"degree", "whittaker_coeffs", "norm"}
    assert isinstance(js["norm"], str)
    assert set(js["whittaker_coeffs"]) == {"2", "1,1"}
