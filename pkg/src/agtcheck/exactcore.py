"""Exact linear algebra over Fraction, plus the parameter points and truncated
series built on it.

Everything here works over :class:`fractions.Fraction`; there is no floating
point path.  Matrices are plain lists of lists of Fractions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "ParamPoint",
    "QSeries",
    "SingularMatrixError",
    "NonGenericPointError",
    "ReconstructionError",
    "as_rational",
    "format_rational",
    "sample_params",
    "limit_at_zero",
    "limit_along",
    "solve_linear",
    "nullspace",
    "rank",
    "determinant",
    "inverse",
    "matmul",
    "matvec",
    "identity",
]


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`solve_linear` when the matrix has a kernel."""

    def __init__(self, message, kernel):
        super().__init__(message)
        self.kernel = kernel


class NonGenericPointError(ArithmeticError):
    """A parameter point hit a degenerate locus (zero weight, singular Gram, ...)."""


class ReconstructionError(ArithmeticError):
    """Rational reconstruction failed: bounds too small or pole at the origin."""


def as_rational(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def format_rational(x: Fraction) -> str:
    """Serialize as ``"num/den"``, dropping ``/1``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ParamPoint:
    """An exact evaluation point ``(eps1, eps2, a^1..a^l)``.

    ``a`` holds coordinates in whatever frame the caller works in; for root
    frames these are the simple-root values ``a^i``.
    """

    eps1: Fraction
    eps2: Fraction
    a: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "eps1", as_rational(self.eps1))
        object.__setattr__(self, "eps2", as_rational(self.eps2))
        object.__setattr__(self, "a", tuple(as_rational(x) for x in self.a))
        if self.eps1 == 0 or self.eps2 == 0:
            raise NonGenericPointError("eps1 and eps2 must be nonzero")

    @property
    def rank(self) -> int:
        return len(self.a)

    @property
    def level_shift(self) -> Fraction:
        """``k + h^vee = -eps2/eps1``."""
        return -self.eps2 / self.eps1

    @property
    def q(self) -> Fraction:
        return self.eps1 + self.eps2

    def with_a(self, a) -> "ParamPoint":
        return ParamPoint(self.eps1, self.eps2, tuple(a))

    def negated(self) -> "ParamPoint":
        return self.with_a(-x for x in self.a)

    def swapped(self) -> "ParamPoint":
        return ParamPoint(self.eps2, self.eps1, self.a)

    def to_json(self) -> dict:
        return {
            "eps1": format_rational(self.eps1),
            "eps2": format_rational(self.eps2),
            "a": [format_rational(x) for x in self.a],
        }


Constraint = Callable[[ParamPoint], Fraction]


def sample_params(
    seed: int,
    rank: int,
    denominator_bound: int = 7,
    avoid: Sequence[Constraint] = (),
    retries: int = 200,
) -> ParamPoint:
    """Draw a reproducible point with ``eps1*eps2 != 0`` avoiding every constraint.

    Each entry of ``avoid`` maps a point to a rational that must not vanish.
    """
    if denominator_bound < 2:
        raise ValueError("denominator_bound must be at least 2")
    rng = random.Random(seed)

    def draw():
        den = rng.randint(2, denominator_bound)
        num = rng.randint(-4 * den, 4 * den)
        return Fraction(num, den)

    for _ in range(retries):
        e1, e2 = draw(), draw()
        if e1 == 0 or e2 == 0:
            continue
        p = ParamPoint(e1, e2, tuple(draw() for _ in range(rank)))
        try:
            if all(c(p) != 0 for c in avoid):
                return p
        except ZeroDivisionError:
            continue
    raise NonGenericPointError(
        f"no admissible point after {retries} draws (seed={seed}); "
        "the avoid-set is probably unsatisfiable"
    )


# --------------------------------------------------------------------------
# linear algebra


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [Fraction(0)] * cols
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        new[j] += x * bk[j]
        out.append(new)
    return out


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def _rref(rows, ncols):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            rows[r] = pr = [x * inv for x in pr]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [x - f * y if y else x for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(matrix):
    """Return ``(reduced rows, pivot columns)`` without touching the input."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = _rref(rows, ncols)
    return rows[: len(pivots)], pivots


def nullspace(matrix, ncols: int | None = None):
    """Basis of the right kernel, one vector per free column (free entry = 1)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(v)
    return basis


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def determinant(matrix) -> Fraction:
    """Bareiss fraction-free elimination (entries may be Fractions)."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_linear(matrix, rhs):
    """Solve a square system exactly.

    Raises :class:`SingularMatrixError` carrying a kernel witness when the
    matrix is singular.  The residual of the returned solution is zero.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("solve_linear expects a square matrix")
    if len(rhs) != n:
        raise ValueError("right-hand side has the wrong length")
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = _rref(aug, n)
    if len(pivots) < n:
        kernel = nullspace(matrix, n)
        raise SingularMatrixError(f"singular {n}x{n} matrix", kernel[0])
    return [aug[i][n] for i in range(n)]


def solve_any(matrix, rhs):
    """A particular solution of a consistent (possibly rectangular) system.

    Free variables are set to zero.  Raises ``ValueError`` if inconsistent.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = _rref(aug, ncols + 1)
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = aug[r][ncols]
    return x


def inverse(matrix):
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    pivots = _rref(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError("matrix is not invertible", nullspace(matrix, n)[0])
    return [row[n:] for row in aug]


# --------------------------------------------------------------------------
# rational reconstruction


def limit_at_zero(samples, num_degree_bound: int, den_degree_bound: int) -> Fraction:
    """Value at ``t = 0`` of the rational function interpolating ``samples``.

    ``samples`` is a sequence of ``(t, f(t))`` pairs with distinct nonzero
    ``t``.  The first ``m + n + 1`` samples fix ``p/q`` with ``deg p <= m``,
    ``deg q <= n``; every remaining sample is used as a held-out check.
    """
    m, n = num_degree_bound, den_degree_bound
    samples = [(as_rational(t), as_rational(v)) for t, v in samples]
    need = m + n + 1
    if len(samples) < need + 1:
        raise ValueError(f"need at least {need + 1} samples, got {len(samples)}")
    ts = [t for t, _ in samples]
    if len(set(ts)) != len(ts) or any(t == 0 for t in ts):
        raise ValueError("sample abscissae must be distinct and nonzero")
    fit, held = samples[:need], samples[need:]
    # unknowns: p_0..p_m, q_0..q_n ; equations p(t) - f q(t) = 0
    rows = []
    for t, v in fit:
        powers = [t**k for k in range(max(m, n) + 1)]
        rows.append(powers[: m + 1] + [-v * powers[k] for k in range(n + 1)])
    kernel = nullspace(rows, m + n + 2)
    vec = next((k for k in kernel if k[m + 1] != 0), None)
    if vec is None:
        # every interpolant has q(0) = 0 (or is the zero pair)
        raise ReconstructionError("interpolant has a pole at t = 0")
    p, q = vec[: m + 1], vec[m + 1:]

    def ev(coeffs, t):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc

    for t, v in held:
        qt = ev(q, t)
        if qt == 0 or ev(p, t) != v * qt:
            raise ReconstructionError("held-out sample mismatch: degree bounds too small")
    return p[0] / q[0]


# --------------------------------------------------------------------------
# truncated series


class QSeries:
    """Power series in ``Q`` truncated after degree ``dmax``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, dmax: int | None = None):
        c = [as_rational(x) for x in coeffs]
        if dmax is not None:
            c = (c + [Fraction(0)] * (dmax + 1))[: dmax + 1]
        if not c:
            raise ValueError("a series needs at least the constant term")
        self.coeffs = tuple(c)

    @property
    def dmax(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d):
        return self.coeffs[d]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QSeries({[format_rational(c) for c in self.coeffs]})"

    def _trunc(self, other):
        return min(self.dmax, other.dmax)

    def __add__(self, other):
        d = self._trunc(other)
        return QSeries([self[k] + other[k] for k in range(d + 1)])

    def __sub__(self, other):
        d = self._trunc(other)
        return QSeries([self[k] - other[k] for k in range(d + 1)])

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([c * as_rational(other) for c in self.coeffs])
        d = self._trunc(other)
        out = [Fraction(0)] * (d + 1)
        for i in range(d + 1):
            if self[i]:
                for j in range(d + 1 - i):
                    out[i + j] += self[i] * other[j]
        return QSeries(out)

    __rmul__ = __mul__

    def rescale(self, factor) -> "QSeries":
        """Substitute ``Q -> factor * Q``."""
        factor = as_rational(factor)
        return QSeries([c * factor**k for k, c in enumerate(self.coeffs)])

    def exp(self) -> "QSeries":
        """``exp`` of a series with zero constant term (via ``E' = f' E``)."""
        if self[0] != 0:
            raise ValueError("exp needs a vanishing constant term")
        d = self.dmax
        e = [Fraction(0)] * (d + 1)
        e[0] = Fraction(1)
        for k in range(1, d + 1):
            e[k] = sum((j * self[j] * e[k - j] for j in range(1, k + 1)), Fraction(0)) / k
        return QSeries(e)


def limit_along(f: Callable[[Fraction], Fraction], max_bound: int = 40, extra: int = 3,
                start: int = 1) -> Fraction:
    """Value at ``t = 0`` of a rational function known only through samples.

    Degree bounds grow until the interpolant reproduces ``extra`` held-out
    samples.  Points where ``f`` raises :class:`NonGenericPointError` or
    ``ZeroDivisionError`` are skipped.
    """
    cache: dict = {}
    ts: list = []
    k = 0

    def take(count):
        nonlocal k
        while len(ts) < count:
            t = Fraction(1, 11 + 3 * k) * (-1) ** k
            k += 1
            try:
                cache[t] = as_rational(f(t))
            except (NonGenericPointError, ZeroDivisionError):
                continue
            ts.append(t)

    bound = start
    while bound <= max_bound:
        take(2 * bound + 1 + extra)
        try:
            return limit_at_zero([(t, cache[t]) for t in ts[: 2 * bound + 1 + extra]], bound, bound)
        except ReconstructionError:
            bound = bound + 1 if bound < 8 else bound + 4
    raise ReconstructionError(f"no rational reconstruction with degrees <= {max_bound}")
