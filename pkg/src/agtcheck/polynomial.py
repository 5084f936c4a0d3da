"""Sparse multivariate polynomials with Fraction coefficients.

A polynomial is a dict mapping exponent tuples to coefficients.  Only what
the invariant-polynomial bookkeeping needs is here.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


def clean(p: dict) -> dict:
    return {e: c for e, c in p.items() if c}


def constant(c, nvars: int) -> dict:
    return clean({(0,) * nvars: Fraction(c)})


def linear(coeffs: Sequence) -> dict:
    n = len(coeffs)
    return clean({tuple(int(j == i) for j in range(n)): Fraction(c) for i, c in enumerate(coeffs)})


def add(p: dict, q: dict) -> dict:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, ZERO) + c
    return clean(out)


def scale(p: dict, c) -> dict:
    c = Fraction(c)
    return clean({e: c * v for e, v in p.items()})


def mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, ZERO) + c1 * c2
    return clean(out)


def elementary_symmetric(forms: Sequence[dict], k: int, nvars: int) -> dict:
    """``e_k`` of the given polynomials (usually linear forms)."""
    # coefficients of prod_j (1 + t f_j), truncated at t^k
    layers = [constant(1, nvars)] + [{} for _ in range(k)]
    for f in forms:
        for j in range(k, 0, -1):
            layers[j] = add(layers[j], mul(layers[j - 1], f))
    return layers[k]


def derivative(p: dict, var: int) -> dict:
    out: dict = {}
    for e, c in p.items():
        if e[var]:
            ne = e[:var] + (e[var] - 1,) + e[var + 1:]
            out[ne] = out.get(ne, ZERO) + c * e[var]
    return clean(out)


def evaluate(p: dict, point: Sequence) -> Fraction:
    total = ZERO
    for e, c in p.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term *= Fraction(x) ** k
        total += term
    return total


def degree(p: dict) -> int:
    return max((sum(e) for e in p), default=0)


def to_json(p: dict) -> list:
    from .exactcore import format_rational

    return [[list(e), format_rational(c)] for e, c in sorted(p.items())]
