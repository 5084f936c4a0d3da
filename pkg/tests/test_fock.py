from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, strategies as st

from agtcheck.exactcore import ParamPoint
from agtcheck.fock import (
    FockState,
    Frame,
    HeisenbergMode,
    apply_current,
    apply_mode,
    apply_normal_ordered,
    apply_word,
    basis,
    combine,
    dual_ground,
    fock_pairing,
    marked_ground,
    module_ground,
    theta,
    vacuum_ground,
)
from agtcheck.rootdata import RootSystem, multipartition_count, partitions

from conftest import A1, A2, P1, P2, rationals

FRAMES = [(Frame.root(A1), P1), (Frame.root(A2), P2),
          (Frame.gl(3), ParamPoint(P2.eps1, P2.eps2, (Fraction(1, 2), Fraction(-3, 4), Fraction(2, 7))))]


def z_lambda(p):
    return prod(n**m * factorial(m) for n, m in p.multiplicities().items())


def random_state(frame, p, d, data):
    g = module_ground(frame, p)
    keys = basis(frame, d)
    coeffs = data.draw(st.lists(rationals(), min_size=len(keys), max_size=len(keys)))
    return g._like(dict(zip(keys, coeffs)))


@pytest.mark.parametrize("frame,p", FRAMES[:2])
@pytest.mark.parametrize("d", range(5))
def test_basis_size(frame, p, d):
    assert len(basis(frame, d)) == multipartition_count(frame.dim, d)


@pytest.mark.parametrize("frame,p", FRAMES)
def test_zero_modes_by_sector(frame, p):
    q = p.q
    g = module_ground(frame, p)
    for j in range(frame.dim):
        expected = p.a[j] - q * frame.rho[j]
        assert apply_mode((j, 0), g) == g.scale(expected)
    assert apply_mode((0, 0), vacuum_ground(frame, p.eps1, p.eps2)).is_zero()
    dual = dual_ground(frame, p)
    assert dual.zero == tuple(-z - 2 * q * r for z, r in zip(g.zero, frame.rho))


def test_marked_sector_zero_mode(p1):
    frame = Frame.root(A1)
    m = marked_ground(frame, p1.eps1, p1.eps2, (1,))
    # -eps1 (alpha, alpha) = -2 eps1
    assert m.zero == (-2 * p1.eps1,)


@pytest.mark.parametrize("frame,p", FRAMES[:2])
@given(data=st.data())
def test_heisenberg_relations(frame, p, data):
    rs = frame.rs
    i, j = data.draw(st.integers(0, rs.rank - 1)), data.draw(st.integers(0, rs.rank - 1))
    m, n = data.draw(st.integers(-4, 4)), data.draw(st.integers(-4, 4))
    s = random_state(frame, p, data.draw(st.integers(0, 3)), data)
    lhs = apply_word([(i, m), (j, n)], s) - apply_word([(j, n), (i, m)], s)
    central = -m * p.eps1 * p.eps2 * rs.cartan[i][j] if m == -n else 0
    assert lhs == s.scale(central)


@pytest.mark.parametrize("n", range(1, 7))
def test_single_color_norms(n, p1):
    # <p_lam, p_mu> = delta z_lam (G eps1 eps2)^len
    frame = Frame.root(A1)
    g, dg = module_ground(frame, p1), dual_ground(frame, p1)
    c = 2 * p1.eps1 * p1.eps2
    for lam in partitions(n):
        for mu in partitions(n):
            val = fock_pairing(dg._like({(lam,): 1}), g._like({(mu,): 1}))
            assert val == (z_lambda(lam) * c ** len(lam) if lam == mu else 0)


@pytest.mark.parametrize("frame,p", FRAMES)
@given(data=st.data())
def test_pairing_adjointness(frame, p, data):
    # <u, P_n v> = <theta(P_n) u, v>
    n = data.draw(st.integers(-3, 3))
    j = data.draw(st.integers(0, frame.dim - 1))
    dv = data.draw(st.integers(max(0, n), 3))
    v = random_state(frame, p, dv, data)
    du = dv - n
    dual = dual_ground(frame, p)
    keys = basis(frame, du)
    u = dual._like(dict(zip(keys, data.draw(st.lists(rationals(), min_size=len(keys), max_size=len(keys))))))
    lhs = fock_pairing(u, apply_mode((j, n), v))
    rhs = Fraction(0)
    for word, c in theta((j, n), p.q, frame).items():
        rhs += c * fock_pairing(apply_word(word, u), v)
    assert lhs == rhs


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(-3, 3)), max_size=4), rationals())
def test_theta_is_an_involution(word, q):
    once = theta(word, q)
    twice: dict = {}
    for w, c in once.items():
        for w2, c2 in theta(w, q).items():
            twice[w2] = twice.get(w2, 0) + c * c2
    twice = {w: c for w, c in twice.items() if c}
    assert twice == {tuple(word): 1}


@given(data=st.data())
def test_currents_are_linear(data):
    frame, p = FRAMES[1]
    s = random_state(frame, p, 2, data)
    u = (data.draw(rationals()), data.draw(rationals()))
    n = data.draw(st.integers(-2, 2))
    expected = apply_mode((0, n), s).scale(u[0]) + apply_mode((1, n), s).scale(u[1])
    assert apply_current(u, n, s) == expected


def test_normal_ordering_moves_annihilators_right(p1):
    frame = Frame.root(A1)
    g = module_ground(frame, p1)
    s = apply_mode((0, -1), g)
    # :P_1 P_-1: = P_-1 P_1
    assert apply_normal_ordered([(0, 1), (0, -1)], s) == apply_word([(0, -1), (0, 1)], s)


def test_state_arithmetic(p1):
    frame = Frame.root(A1)
    g = module_ground(frame, p1)
    a, b = apply_mode(HeisenbergMode(0, -1), g), apply_mode((0, -2), g)
    s = combine([a, b], [2, -1])
    assert s.coefficient(((1,),)) == 2 and s.coefficient(((2,),)) == -1
    assert (s - s).is_zero()
    assert s.degrees() == {1, 2}
    with pytest.raises(ValueError):
        s.degree()
    with pytest.raises(ValueError):
        _ = g + dual_ground(frame, p1)


def test_pairing_rejects_wrong_sector(p1):
    frame = Frame.root(A1)
    g = module_ground(frame, p1)
    with pytest.raises(ValueError):
        fock_pairing(g, g)


def test_gl_frame_rho():
    f = Frame.gl(3)
    assert f.rho == (1, 0, -1)
    assert f.simple_root_vector(1) == (0, 1, -1)


def test_ground_is_frozen_state(p1):
    g = module_ground(Frame.root(A1), p1)
    assert isinstance(g, FockState)
    assert g.ground_coefficient() == 1
