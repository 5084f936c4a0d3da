"""Simply-laced root data, Weyl reflections and partition combinatorics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .exactcore import ParamPoint, inverse

__all__ = [
    "RootSystem",
    "Partition",
    "MultiPartition",
    "partitions",
    "enumerate_multipartitions",
    "multipartition_count",
    "weyl_reflect",
    "root_to_gl",
    "gl_to_root",
]


def _chain_cartan(n: int):
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def _cartan_from_edges(n: int, edges):
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        c[i][j] = c[j][i] = -1
    return c


@dataclass(frozen=True)
class RootSystem:
    """Cartan data of a simply-laced simple Lie algebra (Bourbaki labelling)."""

    kind: str
    rank: int
    cartan: tuple
    exponents: tuple
    dual_coxeter: int

    @classmethod
    def A(cls, rank: int) -> "RootSystem":
        if rank < 1:
            raise ValueError("A_l needs l >= 1")
        return cls("A", rank, _freeze(_chain_cartan(rank)), tuple(range(1, rank + 1)), rank + 1)

    @classmethod
    def D(cls, rank: int) -> "RootSystem":
        if rank < 4:
            raise ValueError("D_l needs l >= 4")
        edges = [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
        exps = sorted(list(range(1, 2 * rank - 2, 2)) + [rank - 1])
        return cls("D", rank, _freeze(_cartan_from_edges(rank, edges)), tuple(exps), 2 * rank - 2)

    @classmethod
    def E(cls, rank: int) -> "RootSystem":
        table = {
            6: ((1, 4, 5, 7, 8, 11), 12),
            7: ((1, 5, 7, 9, 11, 13, 17), 18),
            8: ((1, 7, 11, 13, 17, 19, 23, 29), 30),
        }
        if rank not in table:
            raise ValueError("E_l exists for l = 6, 7, 8")
        # Bourbaki: 1-3-4-5-6(-7-8), with 2 attached to 4
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, rank - 1)]
        exps, h = table[rank]
        return cls("E", rank, _freeze(_cartan_from_edges(rank, edges)), exps, h)

    @classmethod
    def from_name(cls, name: str) -> "RootSystem":
        builders = {"A": cls.A, "D": cls.D, "E": cls.E}
        kind, rank = name[:1].upper(), name[1:]
        if kind not in builders or not rank.isdigit():
            raise ValueError(f"unsupported root system {name!r}")
        return builders[kind](int(rank))

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    def pairing(self, i: int, j: int) -> int:
        """``(alpha_i, alpha_j)`` with 0-based indices."""
        return self.cartan[i][j]

    @property
    def cdegs(self) -> tuple:
        """Conformal degrees ``d_k + 1`` of the W-generators."""
        return tuple(d + 1 for d in self.exponents)

    def cartan_inverse(self):
        return inverse([list(map(Fraction, row)) for row in self.cartan])

    def is_type_a(self) -> bool:
        return self.kind == "A"

    def positive_roots(self) -> tuple:
        """Positive roots as coefficient vectors in the simple roots."""
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = list(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                for i in range(n):
                    pair = sum(beta[j] * self.cartan[j][i] for j in range(n))
                    if pair == -1:
                        gamma = tuple(b + int(j == i) for j, b in enumerate(beta))
                        if gamma not in found:
                            found.append(gamma)
                            nxt.append(gamma)
            layer = nxt
        return tuple(sorted(found, key=lambda b: (sum(b), b)))

    def genericity_constraints(self, bound: int = 4) -> list:
        """Functions of a point that must not vanish for generic behaviour.

        Covers ``m eps1 + n eps2`` and ``beta(a) - m eps1 - n eps2`` for every
        positive root ``beta`` and ``|m|, |n| <= bound``.
        """
        out = []
        rng = range(-bound, bound + 1)
        for m in rng:
            for n in rng:
                if m or n:
                    out.append(Constraint(f"{m}*eps1 + {n}*eps2",
                                          lambda p, m=m, n=n: m * p.eps1 + n * p.eps2))
        for beta in self.positive_roots():
            label = " + ".join(f"{c}*a{j + 1}" for j, c in enumerate(beta) if c)
            for m in rng:
                for n in rng:
                    out.append(Constraint(
                        f"{label} - ({m}*eps1 + {n}*eps2)",
                        lambda p, b=beta, m=m, n=n: sum(c * x for c, x in zip(b, p.a)) - m * p.eps1 - n * p.eps2))
        return out


class Constraint:
    """A named function of a parameter point that must not vanish."""

    def __init__(self, name: str, fn):
        self.name = name
        self.fn = fn

    def __call__(self, p):
        return self.fn(p)

    def __repr__(self):
        return f"Constraint({self.name!r})"


def _freeze(m):
    return tuple(tuple(row) for row in m)


def root_to_gl(a: Sequence[Fraction]) -> tuple:
    """Simple-root values ``a^i`` to traceless gl coordinates ``a_1..a_{l+1}``."""
    n = len(a)
    # a_1 = (sum_k (n+1-k) a^k)/(n+1), then a_{j+1} = a_j - a^j
    first = sum((Fraction(n - k) * Fraction(x) for k, x in enumerate(a)), Fraction(0)) / (n + 1)
    out = [first]
    for x in a:
        out.append(out[-1] - Fraction(x))
    return tuple(out)


def gl_to_root(x: Sequence[Fraction]) -> tuple:
    return tuple(Fraction(x[i]) - Fraction(x[i + 1]) for i in range(len(x) - 1))


def weyl_reflect(rs: RootSystem, i: int, p: ParamPoint) -> ParamPoint:
    """Simple reflection ``s_i`` (1-based ``i``): ``a^j -> a^j - C_ji a^i``."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"simple root index {i} out of range 1..{rs.rank}")
    if p.rank != rs.rank:
        raise ValueError("parameter point has the wrong rank")
    ai = p.a[i - 1]
    return p.with_a(x - rs.cartan[j][i - 1] * ai for j, x in enumerate(p.a))


# --------------------------------------------------------------------------
# partitions


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts) or any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def cells(self) -> Iterator[tuple]:
        """Cells ``(row, col)``, 0-based."""
        for r, p in enumerate(self):
            for c in range(p):
                yield (r, c)

    def part(self, r: int) -> int:
        return self[r] if 0 <= r < len(self) else 0

    def transpose(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > c) for c in range(self[0]))

    def arm(self, cell) -> int:
        """Boxes to the right of ``cell``; negative for cells outside the diagram."""
        r, c = cell
        return self.part(r) - c - 1

    def leg(self, cell) -> int:
        """Boxes below ``cell``; negative for cells outside the diagram."""
        r, c = cell
        return self.transpose().part(c) - r - 1

    def hook(self, cell) -> int:
        return self.arm(cell) + self.leg(cell) + 1

    def multiplicities(self) -> dict:
        out: dict = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def to_json(self):
        return list(self)

    def __repr__(self):
        return f"Partition({list(self)})"


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """Partitions of ``n`` in reverse-lexicographic order: (4), (3,1), (2,2), ..."""

    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(Partition(p) for p in gen(n, n))


class MultiPartition(tuple):
    """A tuple of partitions; indexes both PBW monomials and Fock basis vectors."""

    def __new__(cls, components: Sequence[Sequence[int]]):
        return super().__new__(cls, tuple(Partition(c) for c in components))

    @property
    def size(self) -> int:
        return sum(p.size for p in self)

    @property
    def rank(self) -> int:
        return len(self)

    def to_json(self):
        return [list(p) for p in self]

    def key(self) -> str:
        return "|".join(",".join(map(str, p)) for p in self)

    def __repr__(self):
        return f"MultiPartition({self.to_json()})"


def _compositions(total: int, slots: int):
    """Weak compositions of ``total`` into ``slots``, earlier slots largest first."""
    if slots == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_multipartitions(rank: int, d: int) -> tuple:
    """All ``rank``-tuples of partitions of total size ``d`` in canonical order.

    Order: by component sizes with the first component as large as possible
    first, then componentwise reverse-lexicographic.  The last entry is
    always ``(empty, ..., empty, (1^d))``.
    """
    if rank < 1 or d < 0:
        raise ValueError("need rank >= 1 and d >= 0")
    out = []
    for sizes in _compositions(d, rank):
        combos = [()]
        for s in sizes:
            combos = [c + (p,) for c in combos for p in partitions(s)]
        out.extend(MultiPartition(c) for c in combos)
    return tuple(out)


def multipartition_count(rank: int, d: int) -> int:
    """Coefficient of ``q^d`` in ``prod_n (1 - q^n)^(-rank)`` by series expansion."""
    coeffs = [1] + [0] * d
    for n in range(1, d + 1):
        for _ in range(rank):
            # multiply by 1/(1 - q^n)
            for k in range(n, d + 1):
                coeffs[k] += coeffs[k - n]
    return coeffs[d]
