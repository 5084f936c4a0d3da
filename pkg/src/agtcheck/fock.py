"""Fock modules of the Heisenberg algebra with modes ``P~^j_n``.

Relations: ``[P~^i_m, P~^j_n] = -m delta_{m,-n} G_ij eps1 eps2`` where ``G``
is the color pairing of the chosen :class:`Frame`.  A basis vector is a
:class:`MultiPartition` ``lam`` standing for
``prod_j prod_k P~^j_{-lam^j_k} |ground>`` (creation modes commute, so the
product is unordered and unnormalized).

Zero modes are sector data: ``P~^j_0`` acts on the whole sector by
``zero[j]``.  For the highest-weight sector at ``a`` this is
``a_j - (eps1 + eps2) rho_j`` (``rho_j = 1`` in the simple-root frame).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactcore import ParamPoint, format_rational
from .rootdata import MultiPartition, RootSystem

__all__ = [
    "Frame",
    "HeisenbergMode",
    "FockState",
    "module_ground",
    "dual_ground",
    "vacuum_ground",
    "marked_ground",
    "apply_mode",
    "apply_current",
    "apply_word",
    "apply_normal_ordered",
    "apply_operator",
    "theta",
    "fock_pairing",
    "basis",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class Frame:
    """Color basis of the Cartan subalgebra.

    ``gram`` is the pairing of the colors and ``rho`` the coordinates of the
    Weyl vector used for the zero-mode shift in highest-weight sectors.
    """

    name: str
    gram: tuple
    rho: tuple
    rs: RootSystem | None = None

    @property
    def dim(self) -> int:
        return len(self.gram)

    @classmethod
    def root(cls, rs: RootSystem) -> "Frame":
        """Simple-root colors, pairing = Cartan matrix."""
        return cls(rs.name, rs.cartan, tuple(Fraction(1) for _ in range(rs.rank)), rs)

    @classmethod
    def gl(cls, r: int) -> "Frame":
        """Orthonormal coordinates ``x_1..x_r`` of gl_r."""
        gram = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        rho = tuple(Fraction(r + 1, 2) - j for j in range(1, r + 1))
        return cls(f"gl{r}", gram, rho, RootSystem.A(r - 1) if r > 1 else None)

    @classmethod
    def diagonal(cls, r: int) -> "Frame":
        """The single diagonal current ``sum_j P^{x_j}`` of gl_r (pairing r)."""
        return cls(f"diag{r}", ((r,),), (Fraction(0),))

    def simple_root_vector(self, i: int) -> tuple:
        """Coordinates of ``alpha_i`` (0-based ``i``) in this frame."""
        if self.name.startswith("gl"):
            return tuple(int(j == i) - int(j == i + 1) for j in range(self.dim))
        return tuple(int(j == i) for j in range(self.dim))

    def pair(self, u: Sequence, v: Sequence):
        g = self.gram
        return sum(
            (u[i] * g[i][j] * v[j] for i in range(self.dim) for j in range(self.dim) if u[i] and v[j]),
            ZERO,
        )

    def lower(self, v: Sequence) -> tuple:
        """``G v``."""
        g = self.gram
        return tuple(sum((g[i][j] * v[j] for j in range(self.dim)), ZERO) for i in range(self.dim))


@dataclass(frozen=True)
class HeisenbergMode:
    color: int
    n: int


def _empty_key(dim: int):
    return ((),) * dim


def _insert(key, color: int, part: int):
    comp = key[color]
    k = 0
    while k < len(comp) and comp[k] >= part:
        k += 1
    new = comp[:k] + (part,) + comp[k:]
    return key[:color] + (new,) + key[color + 1:]


def _remove_one(comp: tuple, part: int) -> tuple:
    k = comp.index(part)
    return comp[:k] + comp[k + 1:]


class FockState:
    """Finite linear combination of basis vectors in a fixed sector."""

    __slots__ = ("frame", "eps1", "eps2", "zero", "sector", "terms")

    def __init__(self, frame: Frame, eps1, eps2, zero: Sequence, sector: str, terms: Mapping | None = None):
        self.frame = frame
        self.eps1 = Fraction(eps1)
        self.eps2 = Fraction(eps2)
        self.zero = tuple(Fraction(z) for z in zero)
        if len(self.zero) != frame.dim:
            raise ValueError("zero-mode vector has the wrong length")
        self.sector = sector
        self.terms = {tuple(tuple(c) for c in k): Fraction(v) for k, v in (terms or {}).items() if v}

    # construction helpers -------------------------------------------------
    def _like(self, terms: dict, zero=None, sector=None) -> "FockState":
        out = FockState.__new__(FockState)
        out.frame = self.frame
        out.eps1 = self.eps1
        out.eps2 = self.eps2
        out.zero = self.zero if zero is None else zero
        out.sector = self.sector if sector is None else sector
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def with_terms(self, terms: Mapping) -> "FockState":
        return self._like({tuple(tuple(c) for c in k): Fraction(v) for k, v in terms.items()})

    def zero_state(self) -> "FockState":
        return self._like({})

    def ground(self) -> "FockState":
        return self._like({_empty_key(self.frame.dim): Fraction(1)})

    # algebra ----------------------------------------------------------------
    def _check(self, other: "FockState"):
        if (self.frame != other.frame or self.eps1 != other.eps1 or self.eps2 != other.eps2
                or self.zero != other.zero):
            raise ValueError("states live in different modules")

    def __add__(self, other: "FockState") -> "FockState":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return self._like(out)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "FockState":
        c = Fraction(c)
        if c == 0:
            return self._like({})
        return self._like({k: c * v for k, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FockState):
            return NotImplemented
        return (self.frame == other.frame and self.eps1 == other.eps1 and self.eps2 == other.eps2
                and self.zero == other.zero and self.terms == other.terms)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key) -> Fraction:
        return self.terms.get(tuple(tuple(c) for c in key), ZERO)

    def ground_coefficient(self) -> Fraction:
        return self.terms.get(_empty_key(self.frame.dim), ZERO)

    def degrees(self) -> set:
        return {sum(map(sum, k)) for k in self.terms}

    @property
    def degree(self) -> int:
        """Degree of a homogeneous state (0 for the zero state)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("state is not homogeneous")
        return ds.pop() if ds else 0

    def vector(self, keys: Sequence) -> list:
        return [self.terms.get(tuple(k), ZERO) for k in keys]

    def to_json(self) -> dict:
        return {
            "sector": self.sector,
            "zero_mode": [format_rational(z) for z in self.zero],
            "terms": {MultiPartition(k).key(): format_rational(v) for k, v in sorted(self.terms.items())},
        }

    def __repr__(self):
        body = " + ".join(f"({format_rational(v)}){list(map(list, k))}" for k, v in sorted(self.terms.items()))
        return f"FockState[{self.sector}]({body or '0'})"


# --------------------------------------------------------------------------
# sectors


def module_ground(frame: Frame, p: ParamPoint) -> FockState:
    """``|a>``; ``p.a`` are coordinates in ``frame`` (simple-root values or gl)."""
    if p.rank != frame.dim:
        raise ValueError(f"frame {frame.name} needs {frame.dim} coordinates, got {p.rank}")
    q = p.eps1 + p.eps2
    zero = tuple(a - q * r for a, r in zip(p.a, frame.rho))
    return FockState(frame, p.eps1, p.eps2, zero, "module", {_empty_key(frame.dim): 1})


def dual_ground(frame: Frame, p: ParamPoint) -> FockState:
    """``|-a>``, the ground vector of the twisted dual module."""
    g = module_ground(frame, p.negated())
    g.sector = "dual"
    return g


def vacuum_ground(frame: Frame, eps1, eps2) -> FockState:
    return FockState(frame, eps1, eps2, (ZERO,) * frame.dim, "vacuum", {_empty_key(frame.dim): 1})


def marked_ground(frame: Frame, eps1, eps2, v: Sequence) -> FockState:
    """Vacuum shifted by the marker of the root ``v``: zero mode ``-eps1 G v``."""
    zero = tuple(-Fraction(eps1) * x for x in frame.lower(v))
    return FockState(frame, eps1, eps2, zero, "marked", {_empty_key(frame.dim): 1})


def basis(frame: Frame, d: int) -> tuple:
    """Basis keys of degree ``d`` (canonical multipartition order)."""
    from .rootdata import enumerate_multipartitions

    return tuple(tuple(tuple(c) for c in mp) for mp in enumerate_multipartitions(frame.dim, d))


# --------------------------------------------------------------------------
# mode action on raw term dictionaries


def _apply_raw(terms: dict, color: int, n: int, state: FockState) -> dict:
    out: dict = {}
    if n < 0:
        for k, v in terms.items():
            nk = _insert(k, color, -n)
            out[nk] = out.get(nk, ZERO) + v
        return out
    if n == 0:
        z = state.zero[color]
        return {k: z * v for k, v in terms.items()} if z else {}
    row = state.frame.gram[color]
    base = -n * state.eps1 * state.eps2
    for k, v in terms.items():
        for j, comp in enumerate(k):
            g = row[j]
            if not g or n not in comp:
                continue
            mult = comp.count(n)
            nk = k[:j] + (_remove_one(comp, n),) + k[j + 1:]
            out[nk] = out.get(nk, ZERO) + v * mult * g * base
    return out


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def apply_mode(mode, state: FockState, n: int | None = None) -> FockState:
    """Apply ``P~^color_n``; accepts a :class:`HeisenbergMode` or ``(color, n)``."""
    if n is not None:
        mode = HeisenbergMode(mode, n)
    elif not isinstance(mode, HeisenbergMode):
        mode = HeisenbergMode(*mode)
    if not 0 <= mode.color < state.frame.dim:
        raise IndexError(f"color {mode.color} out of range for frame {state.frame.name}")
    return state._like(_clean(_apply_raw(state.terms, mode.color, mode.n, state)))


def apply_current(v: Sequence, n: int, state: FockState) -> FockState:
    """Apply ``P~^v_n = sum_j v_j P~^j_n``."""
    out: dict = {}
    for j, c in enumerate(v):
        if c:
            for k, x in _apply_raw(state.terms, j, n, state).items():
                out[k] = out.get(k, ZERO) + c * x
    return state._like(_clean(out))


def apply_word(word: Sequence, state: FockState) -> FockState:
    """Apply the product ``m_1 m_2 ... m_k`` (rightmost first)."""
    terms = state.terms
    for color, n in reversed([tuple(m) if not isinstance(m, HeisenbergMode) else (m.color, m.n) for m in word]):
        terms = _clean(_apply_raw(terms, color, n, state))
        if not terms:
            break
    return state._like(terms)


def apply_normal_ordered(word: Sequence, state: FockState, coef=1) -> FockState:
    """``coef * :m_1 ... m_k:`` with creators left of annihilators."""
    ordered = sorted(word, key=lambda m: m[1])  # creators left, so annihilators act first
    terms = state.terms
    c = Fraction(coef)
    for color, n in reversed(ordered):
        if n == 0:
            c *= state.zero[color]
            if not c:
                return state._like({})
            continue
        terms = _clean(_apply_raw(terms, color, n, state))
        if not terms:
            return state._like({})
    return state._like({k: c * v for k, v in terms.items()})


def apply_operator(op: Mapping, state: FockState) -> FockState:
    """Apply ``sum coef * word`` given as a mapping ``word -> coef``."""
    out: dict = {}
    for word, c in op.items():
        for k, v in apply_word(word, state).terms.items():
            out[k] = out.get(k, ZERO) + c * v
    return state._like(_clean(out))


# --------------------------------------------------------------------------
# anti-involution and pairing


def theta(word, q, frame: Frame | None = None) -> dict:
    """``theta`` of a word of modes, as a mapping ``word -> coef``.

    ``theta(P~^j_n) = -P~^j_{-n} - 2 q rho_j delta_{n,0}`` with ``q = eps1 + eps2``,
    extended anti-multiplicatively.  ``rho_j = 1`` unless a frame is given.
    """
    if isinstance(word, HeisenbergMode) or (len(word) == 2 and isinstance(word[0], int)):
        word = [word]
    q = Fraction(q)
    result = {(): Fraction(1)}
    for m in reversed(list(word)):
        color, n = (m.color, m.n) if isinstance(m, HeisenbergMode) else m
        image = {((color, -n),): Fraction(-1)}
        if n == 0:
            rho = frame.rho[color] if frame is not None else Fraction(1)
            if rho:
                image[()] = -2 * q * rho
        nxt: dict = {}
        for w, c in result.items():
            for w2, c2 in image.items():
                key = w + w2
                nxt[key] = nxt.get(key, ZERO) + c * c2
        result = {w: c for w, c in nxt.items() if c}
    return result


def fock_pairing(u: FockState, v: FockState) -> Fraction:
    """Contragredient pairing of ``u`` (dual sector, ``a -> -a``) with ``v``.

    ``<prod P~_{-n_k} |-a>, v> = (-1)^k <-a| prod P~_{n_k} v>``.
    """
    if u.frame != v.frame or u.eps1 != v.eps1 or u.eps2 != v.eps2:
        raise ValueError("pairing needs the same frame and (eps1, eps2)")
    q = u.eps1 + u.eps2
    expected = tuple(-z - 2 * q * r for z, r in zip(v.zero, v.frame.rho))
    if u.zero != expected:
        raise ValueError("left argument is not in the dual sector of the right argument")
    total = ZERO
    cache: dict = {}
    for key, c in u.terms.items():
        word = tuple((j, n) for j, comp in enumerate(key) for n in comp)
        if word not in cache:
            cache[word] = apply_word(word, v).ground_coefficient()
        val = cache[word]
        if val:
            total += c * val * (-1) ** len(word)
    return total


def creation_word(key) -> tuple:
    """The word of creation modes building the basis vector ``key``."""
    return tuple((j, -n) for j, comp in enumerate(key) for n in comp)


def state_from_dict(frame: Frame, template: FockState, terms: Mapping) -> FockState:
    return template._like({tuple(tuple(c) for c in k): Fraction(v) for k, v in terms.items() if v})


def combine(states: Iterable[FockState], coeffs: Iterable) -> FockState:
    states = list(states)
    out: dict = {}
    for s, c in zip(states, coeffs):
        c = Fraction(c)
        if c:
            for k, v in s.terms.items():
                out[k] = out.get(k, ZERO) + c * v
    return states[0]._like(_clean(out))
