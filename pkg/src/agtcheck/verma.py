"""W-algebra Verma modules inside Fock modules, with their Gram matrices and
Whittaker vectors."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactcore import (
    NonGenericPointError,
    ParamPoint,
    SingularMatrixError,
    determinant,
    format_rational,
    solve_linear,
)
from .fock import FockState, combine, dual_ground, fock_pairing, module_ground
from .rootdata import MultiPartition, enumerate_multipartitions
from .walgebra import extract_w_generators, frame_of, state_to_field_mode

__all__ = [
    "GramMatrix",
    "WhittakerVector",
    "VermaModule",
    "pbw_action",
    "gram_matrix",
    "whittaker",
    "lambda_zero",
]


def lambda_zero(rank: int, d: int) -> MultiPartition:
    """``(empty, ..., empty, (1^d))``."""
    return MultiPartition([()] * (rank - 1) + [(1,) * d])


def pbw_action(lam, hw: FockState, gens) -> FockState:
    """``W~[lam] hw`` with ``W~[lam] = W~^(1)_{-lam^1_1} W~^(1)_{-lam^1_2} ...``."""
    factors = [(k, part) for k, comp in enumerate(lam) for part in comp]
    state = hw
    for k, part in reversed(factors):
        state = state_to_field_mode(gens[k], -part, state)
    return state


def theta_pbw_action(lam, state: FockState, gens) -> FockState:
    """``theta(W~[lam]) state`` using ``theta(W_n) = (-1)^cdeg W_{-n}``."""
    factors = [(k, part) for k, comp in enumerate(lam) for part in comp]
    sign = 1
    for k, part in factors:
        state = state_to_field_mode(gens[k], part, state)
        sign *= (-1) ** gens[k].cdeg
    return state.scale(sign)


@dataclass
class GramMatrix:
    degree: int
    basis: tuple
    entries: list

    def determinant(self) -> Fraction:
        return determinant(self.entries)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "basis": [mp.to_json() for mp in self.basis],
            "gram": [[format_rational(x) for x in row] for row in self.entries],
        }


@dataclass
class WhittakerVector:
    degree: int
    coeffs: dict
    norm: Fraction
    state: FockState | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "whittaker_coeffs": {mp.key(): format_rational(c) for mp, c in self.coeffs.items()},
            "norm": format_rational(self.norm),
        }


class VermaModule:
    """The W-submodule of the Fock module at ``a`` generated by ``|a>``."""

    def __init__(self, system, p: ParamPoint, table=None):
        self.frame = frame_of(system)
        self.params = p
        self.gens = extract_w_generators(self.frame, p, table)
        self.rank = len(self.gens)
        self.hw = module_ground(self.frame, p)
        self.dual_hw = dual_ground(self.frame, p)
        self._pbw: dict = {}
        self._dual_pbw: dict = {}

    def basis(self, d: int) -> tuple:
        return enumerate_multipartitions(self.rank, d)

    def pbw(self, lam) -> FockState:
        lam = MultiPartition(lam)
        if lam not in self._pbw:
            self._pbw[lam] = pbw_action(lam, self.hw, self.gens)
        return self._pbw[lam]

    def dual_pbw(self, lam) -> FockState:
        lam = MultiPartition(lam)
        if lam not in self._dual_pbw:
            self._dual_pbw[lam] = pbw_action(lam, self.dual_hw, self.gens)
        return self._dual_pbw[lam]

    def gram(self, d: int) -> GramMatrix:
        """``K_{lam,mu} = <-a| theta(W~[lam]) W~[mu] |a>``."""
        basis = self.basis(d)
        entries = [[theta_pbw_action(lam, self.pbw(mu), self.gens).ground_coefficient() for mu in basis]
                   for lam in basis]
        return GramMatrix(d, basis, entries)

    def gram_by_pairing(self, d: int) -> GramMatrix:
        """The same matrix through the Fock pairing of ``W~[lam]|-a>`` and ``W~[mu]|a>``."""
        basis = self.basis(d)
        entries = [[fock_pairing(self.dual_pbw(lam), self.pbw(mu)) for mu in basis] for lam in basis]
        return GramMatrix(d, basis, entries)

    def whittaker_vector(self, d: int) -> WhittakerVector:
        basis = self.basis(d)
        if d == 0:
            return WhittakerVector(0, {basis[0]: Fraction(1)}, Fraction(1), self.hw)
        gram = self.gram(d)
        target = lambda_zero(self.rank, d)
        rhs = [Fraction(int(mp == target)) for mp in basis]
        try:
            x = solve_linear(gram.entries, rhs)
        except SingularMatrixError as exc:
            raise NonGenericPointError(f"Gram matrix of degree {d} is singular") from exc
        coeffs = dict(zip(basis, x))
        state = combine([self.pbw(mp) for mp in basis], x)
        return WhittakerVector(d, coeffs, coeffs[target], state)

    def whittaker_report(self, w: WhittakerVector, previous: WhittakerVector | None) -> dict:
        """Check the dual-basis property and the Whittaker conditions of ``w``.

        Solving ``K x = e_lam0`` gives ``W~^(l)_1 w^d = (-1)^cdeg w^(d-1)``
        because ``theta(W~_{-1}) = (-1)^cdeg W~_1``; the sign is reported.
        """
        d = w.degree
        target = lambda_zero(self.rank, d)
        duals = {mp: theta_pbw_action(mp, w.state, self.gens).ground_coefficient() for mp in self.basis(d)}
        dual_ok = all(v == int(mp == target) for mp, v in duals.items())
        cond_ok = True
        sign = (-1) ** self.gens[-1].cdeg
        for k, gen in enumerate(self.gens):
            for n in range(1, d + 1):
                image = state_to_field_mode(gen, n, w.state)
                if k == self.rank - 1 and n == 1:
                    cond_ok &= previous is not None and image == previous.state.scale(sign)
                else:
                    cond_ok &= image.is_zero()
        return {"degree": d, "dual_basis": dual_ok, "whittaker_conditions": cond_ok, "top_sign": sign}


def gram_matrix(d: int, p: ParamPoint, system, table=None) -> GramMatrix:
    return VermaModule(system, p, table).gram(d)


def whittaker(dmax: int, p: ParamPoint, system, table=None, verify: bool = True) -> list:
    """Whittaker vectors ``w^0..w^dmax``; each carries its norm ``K^{lam0 lam0}``.

    With ``verify`` a report of the defining conditions is attached as
    ``vector.report``.
    """
    module = VermaModule(system, p, table)
    out = []
    prev = None
    for d in range(dmax + 1):
        w = module.whittaker_vector(d)
        if verify and d > 0:
            w.report = module.whittaker_report(w, prev)
        out.append(w)
        prev = w
    return out
