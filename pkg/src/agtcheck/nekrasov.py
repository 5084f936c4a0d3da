"""Instanton partition functions by torus localization on the Gieseker space,
and the comparison with W-algebra Whittaker norms.

The fixed points of the moduli space of framed rank-``r`` torsion free
sheaves of second Chern class ``d`` are ``r``-tuples of Young diagrams of
total size ``d``.  The tangent space at ``(Y_1, ..., Y_r)`` has weights

    E = a_alpha - a_beta - eps1 * l_{Y_beta}(s) + eps2 * (a_{Y_alpha}(s) + 1)
    eps1 + eps2 - E

for every pair ``(alpha, beta)`` and every box ``s`` of ``Y_alpha``, where
``a`` and ``l`` are arm and leg lengths (negative outside the diagram).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcore import NonGenericPointError, ParamPoint, QSeries, format_rational, solve_linear
from .fock import Frame, dual_ground, fock_pairing, module_ground
from .rootdata import MultiPartition, Partition, RootSystem, partitions, root_to_gl

__all__ = [
    "FixedPoint",
    "LocalWeight",
    "fixed_points",
    "tangent_weights",
    "z_series",
    "heis_whittaker_series",
    "agt_compare",
    "coulomb_gl",
]


@dataclass(frozen=True)
class FixedPoint:
    diagrams: tuple

    def __post_init__(self):
        object.__setattr__(self, "diagrams", tuple(Partition(y) for y in self.diagrams))

    @property
    def size(self) -> int:
        return sum(y.size for y in self.diagrams)

    @property
    def rank(self) -> int:
        return len(self.diagrams)


@dataclass(frozen=True)
class LocalWeight:
    """``c0 + c1 eps1 + c2 eps2 + sum_alpha m_alpha a_alpha``."""

    c0: int
    c1: int
    c2: int
    m: tuple

    def evaluate(self, eps1, eps2, a: Sequence) -> Fraction:
        return (self.c0 + self.c1 * Fraction(eps1) + self.c2 * Fraction(eps2)
                + sum((mi * Fraction(ai) for mi, ai in zip(self.m, a) if mi), Fraction(0)))


def fixed_points(r: int, d: int) -> list:
    from .rootdata import enumerate_multipartitions

    return [FixedPoint(mp) for mp in enumerate_multipartitions(r, d)]


def tangent_weights(fp: FixedPoint) -> list:
    r = fp.rank
    out = []
    for alpha, beta in itertools.product(range(r), repeat=2):
        ya, yb = fp.diagrams[alpha], fp.diagrams[beta]
        m = tuple(int(k == alpha) - int(k == beta) for k in range(r))
        for s in ya.cells():
            leg, arm = yb.leg(s), ya.arm(s)
            out.append(LocalWeight(0, -leg, arm + 1, m))
            out.append(LocalWeight(0, 1 + leg, -arm, tuple(-x for x in m)))
    return out


def coulomb_gl(r: int, p: ParamPoint) -> tuple:
    """gl coordinates of the Coulomb parameters.

    ``p.a`` holds ``r - 1`` simple-root values (converted to traceless gl
    coordinates) or ``r`` gl coordinates directly.
    """
    if p.rank == r - 1:
        return root_to_gl(p.a) if r > 1 else (Fraction(0),)
    if p.rank == r:
        return p.a
    raise ValueError(f"need {r - 1} root or {r} gl coordinates, got {p.rank}")


def z_series(r: int, dmax: int, p: ParamPoint) -> QSeries:
    a = coulomb_gl(r, p)
    coeffs = []
    for d in range(dmax + 1):
        total = Fraction(0)
        for fp in fixed_points(r, d):
            prod = Fraction(1)
            for w in tangent_weights(fp):
                val = w.evaluate(p.eps1, p.eps2, a)
                if val == 0:
                    raise NonGenericPointError(f"vanishing tangent weight at {fp.diagrams}")
                prod *= val
            total += 1 / prod
        coeffs.append(total)
    return QSeries(coeffs)


def heis_whittaker_series(r: int, dmax: int, p: ParamPoint) -> QSeries:
    """Norms of the Whittaker chain of the diagonal Heisenberg current.

    The current ``b = sum_j P~^{x_j}`` has ``[b_m, b_n] = -m r eps1 eps2``.
    The chain is the dual vector to ``b_{-1}^d`` under the Gram matrix of
    the monomial basis, so ``b_1 h^d = -h^(d-1)`` and ``b_n h^d = 0`` for
    ``n >= 2``; the norm is ``1/(d! (r eps1 eps2)^d)``.
    """
    frame = Frame.diagonal(r)
    point = ParamPoint(p.eps1, p.eps2, (Fraction(0),))
    ground, dual = module_ground(frame, point), dual_ground(frame, point)
    coeffs = [Fraction(1)]
    for d in range(1, dmax + 1):
        keys = [(tuple(mu),) for mu in partitions(d)]
        gram = [[fock_pairing(dual._like({k: 1}), ground._like({m: 1})) for m in keys] for k in keys]
        target = ((1,) * d,)
        x = solve_linear(gram, [Fraction(int(k == target)) for k in keys])
        coeffs.append(x[keys.index(target)])
    return QSeries(coeffs)


def agt_compare(dmax: int, p: ParamPoint, whittaker_norms: Sequence | None = None) -> dict:
    """Per-degree ratios of the U(r) series against W(gl_r) Whittaker norms.

    ``r = p.rank + 1`` (``p.a`` holds simple-root values of sl_r).
    ``ratios`` are ``Z_d / sum_{d1 + d2 = d} H_d1 V_d2`` (Heisenberg times
    W(sl_r)); ``direct_ratios`` are ``Z_d / V_d``.  A verdict is true when
    the ratios follow ``rho_d = rho_1^d`` exactly.
    """
    if p.rank < 1:
        raise ValueError("need at least one Coulomb parameter")
    r = p.rank + 1
    if whittaker_norms is None:
        from .verma import whittaker

        whittaker_norms = [w.norm for w in whittaker(dmax, p, RootSystem.A(r - 1), verify=False)]
    z = z_series(r, dmax, p)
    h = heis_whittaker_series(r, dmax, p)
    v = list(whittaker_norms)

    def power_law(rs):
        return all(rs[d] == rs[1] ** d for d in range(2, dmax + 1)) if dmax >= 1 else True

    ratios, direct = [], []
    for d in range(dmax + 1):
        conv = sum((h[k] * v[d - k] for k in range(d + 1)), Fraction(0))
        if conv == 0 or v[d] == 0:
            raise NonGenericPointError(f"vanishing denominator in degree {d}")
        ratios.append(z[d] / conv)
        direct.append(z[d] / v[d])
    return {
        "r": r,
        "dmax": dmax,
        "params": p.to_json(),
        "z_coeffs": [format_rational(x) for x in z],
        "heis_coeffs": [format_rational(x) for x in h],
        "verma_norms": [format_rational(x) for x in v],
        "ratios": [format_rational(x) for x in ratios],
        "verdict": power_law(ratios),
        "direct_ratios": [format_rational(x) for x in direct],
        "direct_verdict": power_law(direct),
        "_ratios": ratios,
        "_direct": direct,
    }
