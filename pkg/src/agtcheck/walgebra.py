"""Virasoro and W-algebra operators on Fock states.

The W-algebra is the joint kernel of the screening operators inside the
vacuum Fock module.  Generators are extracted degree by degree as kernel
vectors and turned back into operators through the state-field
correspondence of the Heisenberg vertex algebra.

Simple-root indices ``i`` in this module are 1-based; Heisenberg colors are
0-based positions in the frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from . import polynomial as poly
from .exactcore import (
    NonGenericPointError,
    ParamPoint,
    format_rational,
    limit_at_zero,
    nullspace,
    rref,
    solve_any,
)
from .fock import (
    FockState,
    Frame,
    _apply_raw,
    _clean,
    _insert,
    apply_current,
    basis,
    marked_ground,
    module_ground,
    vacuum_ground,
)
from .rootdata import RootSystem, partitions

__all__ = [
    "WGenerator",
    "ScreeningMatrix",
    "frame_of",
    "invariant_generators",
    "virasoro_mode",
    "total_virasoro_mode",
    "state_to_field_mode",
    "screening",
    "screening_matrix",
    "kernel_basis",
    "extract_w_generators",
    "w_mode",
    "classical_limit_check",
    "gl_classical_identity",
]

ZERO = Fraction(0)


def frame_of(system) -> Frame:
    if isinstance(system, Frame):
        return system
    if isinstance(system, RootSystem):
        return Frame.root(system)
    raise TypeError("expected a RootSystem or a Frame")


# --------------------------------------------------------------------------
# invariant polynomials


def invariant_generators(frame: Frame, table: Sequence | None = None) -> list:
    """``[(cdeg, F)]`` with ``F`` a polynomial in the frame coordinates.

    Type A uses elementary symmetric polynomials of the gl coordinates.  In
    the simple-root frame these are pulled back along ``a -> x(a)``; other
    types need ``table`` (a list of polynomials, one per exponent).
    """
    if table is not None:
        return [(poly.degree(f), f) for f in table]
    if frame.name.startswith("gl"):
        r = frame.dim
        xs = [poly.linear([int(j == i) for j in range(r)]) for i in range(r)]
        return [(k, poly.elementary_symmetric(xs, k, r)) for k in range(1, r + 1)]
    rs = frame.rs
    if rs is None or not rs.is_type_a():
        raise ValueError(f"frame {frame.name} needs an explicit invariant table")
    ell = rs.rank
    cinv = rs.cartan_inverse()

    def cinv_row(j):
        return cinv[j] if 0 <= j < ell else [ZERO] * ell

    xs = [poly.linear([a - b for a, b in zip(cinv_row(j), cinv_row(j - 1))]) for j in range(ell + 1)]
    return [(k + 1, poly.elementary_symmetric(xs, k + 1, ell)) for k in range(1, ell + 1)]


def _pure_key(exps: Sequence[int]) -> tuple:
    return tuple((1,) * e for e in exps)


# --------------------------------------------------------------------------
# normal-ordered operators


def _apply_terms(terms_list, state: FockState) -> FockState:
    """Apply ``sum coef * :word:`` to ``state``; ``word`` sorted, annihilators last."""
    cache: dict = {}
    out: dict = {}
    for word, coef in terms_list:
        ann = tuple(m for m in word if m[1] > 0)
        c = coef
        for color, n in word:
            if n == 0:
                c *= state.zero[color]
        if not c:
            continue
        if ann not in cache:
            t = state.terms
            for color, n in ann:
                t = _clean(_apply_raw(t, color, n, state))
                if not t:
                    break
            cache[ann] = t
        t = cache[ann]
        if not t:
            continue
        creators = [m for m in word if m[1] < 0]
        for k, v in t.items():
            for color, n in creators:
                k = _insert(k, color, -n)
            out[k] = out.get(k, ZERO) + c * v
    return state._like(_clean(out))


def virasoro_terms(v: Sequence, n: int, q, top: int) -> list:
    """Normal-ordered terms of ``-1/4 sum :P^v_m P^v_{n-m}: - (n+1)/2 q P^v_n``.

    ``top`` bounds the degree of the states it will act on.
    """
    q = Fraction(q)
    out: dict = {}
    colors = [j for j, c in enumerate(v) if c]
    for m in range(n - top, top + 1):
        for j in colors:
            for k in colors:
                w = tuple(sorted(((j, m), (k, n - m)), key=lambda x: (x[1], x[0])))
                out[w] = out.get(w, ZERO) - Fraction(1, 4) * v[j] * v[k]
    lin = -Fraction(n + 1, 2) * q
    if lin:
        for j in colors:
            w = ((j, n),)
            out[w] = out.get(w, ZERO) + lin * v[j]
    return [(w, c) for w, c in out.items() if c]


def total_virasoro_terms(frame: Frame, n: int, q, top: int) -> list:
    """``-1/2 sum G^ij :P^i P^j:_n - (n+1) q (rho, P_n)``, the full conformal vector."""
    from .exactcore import inverse

    q = Fraction(q)
    ginv = inverse([[Fraction(x) for x in row] for row in frame.gram])
    dim = frame.dim
    out: dict = {}
    for m in range(n - top, top + 1):
        for j in range(dim):
            for k in range(dim):
                if ginv[j][k]:
                    w = tuple(sorted(((j, m), (k, n - m)), key=lambda x: (x[1], x[0])))
                    out[w] = out.get(w, ZERO) - Fraction(1, 2) * ginv[j][k]
    for k in range(dim):
        coef = -(n + 1) * q * sum((ginv[j][k] * frame.rho[j] for j in range(dim)), ZERO)
        if coef:
            out[((k, n),)] = out.get(((k, n),), ZERO) + coef
    return [(w, c) for w, c in out.items() if c]


def total_virasoro_mode(n: int, s: FockState) -> FockState:
    """Apply the mode ``L_n`` of the total conformal vector of the frame."""
    out = s.zero_state()
    for d in sorted(s.degrees()):
        part = s._like({k: c for k, c in s.terms.items() if sum(map(sum, k)) == d})
        out = out + _apply_terms(total_virasoro_terms(s.frame, n, s.eps1 + s.eps2, d), part)
    return out


def virasoro_mode(i: int, n: int, s: FockState) -> FockState:
    """Apply ``L~^i_n`` built from the current of the simple root ``i``."""
    v = s.frame.simple_root_vector(i - 1)
    out = None
    for d in sorted(s.degrees()) or [0]:
        part = s._like({k: c for k, c in s.terms.items() if sum(map(sum, k)) == d})
        res = _apply_terms(virasoro_terms(v, n, s.eps1 + s.eps2, max(d, 0)), part)
        out = res if out is None else out + res
    return out if out is not None else s.zero_state()


# --------------------------------------------------------------------------
# state-field correspondence


def _gbinom(x: int, r: int) -> Fraction:
    num = 1
    for k in range(r):
        num *= x - k
    return Fraction(num, factorial(r))


@lru_cache(maxsize=None)
def field_terms(monomial: tuple, n: int, top: int) -> tuple:
    """Mode ``n`` of the field of ``prod P~^{c}_{-p}|0>`` acting on degree ``top``.

    ``monomial`` is a tuple of ``(color, p)``.  Each factor contributes
    ``binom(-m-1, p-1) P~^c_m`` with ``sum m = n``; positive modes total at
    most ``top``.
    """
    k = len(monomial)
    out: dict = {}
    lo = n - top

    def rec(idx, remaining, budget, coef, chosen):
        if idx == k - 1:
            m = remaining
            if m < lo or (m > 0 and m > budget):
                return
            color, p = monomial[idx]
            c = coef * _gbinom(-m - 1, p - 1)
            if c:
                w = tuple(sorted(chosen + ((color, m),), key=lambda x: (x[1], x[0])))
                out[w] = out.get(w, ZERO) + c
            return
        color, p = monomial[idx]
        for m in range(lo, budget + 1):
            c = coef * _gbinom(-m - 1, p - 1)
            if c:
                rec(idx + 1, remaining - m, budget - max(m, 0), c, chosen + ((color, m),))

    if k == 0:
        return (((), Fraction(1)),) if n == 0 else ()
    rec(0, n, top, Fraction(1), ())
    return tuple((w, c) for w, c in out.items() if c)


def _monomial(key) -> tuple:
    return tuple((j, p) for j, comp in enumerate(key) for p in comp)


def _generator_state(w) -> FockState:
    state = w.state if isinstance(w, WGenerator) else w
    if state.sector != "vacuum":
        raise ValueError("fields are reconstructed from vacuum-sector states only")
    return state


def state_to_field_mode(w, n: int, s: FockState) -> FockState:
    """Apply the ``n``-th mode of the field of the vacuum state ``w`` to ``s``."""
    gen = _generator_state(w)
    if gen.frame != s.frame or gen.eps1 != s.eps1 or gen.eps2 != s.eps2:
        raise ValueError("generator and state use different frames or parameters")
    out: dict = {}
    for d in sorted(s.degrees()):
        if d - n < 0:
            continue
        part = s._like({k: c for k, c in s.terms.items() if sum(map(sum, k)) == d})
        combined: dict = {}
        for key, coef in gen.terms.items():
            for word, c in field_terms(_monomial(key), n, d):
                combined[word] = combined.get(word, ZERO) + coef * c
        res = _apply_terms([(w_, c) for w_, c in combined.items() if c], part)
        for k, v in res.terms.items():
            out[k] = out.get(k, ZERO) + v
    return s._like(_clean(out))


# --------------------------------------------------------------------------
# screening


@dataclass(frozen=True)
class ScreeningMatrix:
    color: int
    degree: int
    rows: tuple
    cols: tuple
    matrix: tuple

    def to_json(self) -> dict:
        return {
            "color": self.color,
            "degree": self.degree,
            "rows": [[list(c) for c in k] for k in self.rows],
            "cols": [[list(c) for c in k] for k in self.cols],
            "matrix": [[format_rational(x) for x in row] for row in self.matrix],
        }


def _exp_component(v, q: int, s: FockState, sign: int) -> FockState:
    """Degree-``q`` coefficient of ``exp(sum_n sign * P^v_{sign'*n} / (n eps2))``.

    ``sign=+1``: creation part ``prod (P_{-n}/(n eps2))^{m}/m!``;
    ``sign=-1``: annihilation part ``prod (-P_n/(n eps2))^{m}/m!``.
    """
    e2 = s.eps2
    total = s.zero_state()
    for mu in partitions(q):
        cur = s
        coef = Fraction(1)
        for n, mult in mu.multiplicities().items():
            coef *= Fraction(sign, n) ** mult / (e2**mult * factorial(mult))
            mode = -n if sign > 0 else n
            for _ in range(mult):
                cur = apply_current(v, mode, cur)
                if cur.is_zero():
                    break
        if not cur.is_zero():
            total = total + cur.scale(coef)
    return total


def screening(i: int, s: FockState) -> FockState:
    """``chi_i = sum_p V^-_[p] V^+_[p+1]``; vacuum sector in, marked sector out."""
    if s.sector != "vacuum":
        raise ValueError("screening operators act on the vacuum sector only")
    v = s.frame.simple_root_vector(i - 1)
    target = marked_ground(s.frame, s.eps1, s.eps2, v)
    out: dict = {}
    top = max(s.degrees(), default=0)
    for p in range(top):
        lowered = _exp_component(v, p + 1, s, -1)
        if lowered.is_zero():
            continue
        raised = _exp_component(v, p, lowered, +1)
        for k, c in raised.terms.items():
            out[k] = out.get(k, ZERO) + c
    return target._like(_clean(out))


def screening_matrix(i: int, d: int, system, eps1, eps2) -> ScreeningMatrix:
    """Matrix of ``chi_i`` from vacuum degree ``d`` to marked degree ``d-1``."""
    if d < 1:
        raise ValueError("screening matrices start at degree 1")
    frame = frame_of(system)
    vac = vacuum_ground(frame, eps1, eps2)
    cols = basis(frame, d)
    rows = basis(frame, d - 1)
    columns = [screening(i, vac._like({k: Fraction(1)})).vector(rows) for k in cols]
    matrix = tuple(tuple(columns[c][r] for c in range(len(cols))) for r in range(len(rows)))
    return ScreeningMatrix(i, d, rows, cols, matrix)


def _n_screenings(frame: Frame) -> int:
    return frame.dim - 1 if frame.name.startswith("gl") else frame.dim


def kernel_basis(system, d: int, p: ParamPoint) -> list:
    """Basis of the joint kernel of all screenings in vacuum degree ``d``."""
    frame = frame_of(system)
    vac = vacuum_ground(frame, p.eps1, p.eps2)
    cols = basis(frame, d)
    if d == 0:
        return [vac]
    rows = []
    for i in range(1, _n_screenings(frame) + 1):
        rows.extend(screening_matrix(i, d, frame, p.eps1, p.eps2).matrix)
    if not rows:
        vecs = [[Fraction(int(a == b)) for b in range(len(cols))] for a in range(len(cols))]
    else:
        vecs = nullspace(rows, len(cols))
    return [vac._like(dict(zip(cols, v))) for v in vecs]


# --------------------------------------------------------------------------
# generators


@dataclass
class WGenerator:
    """A strong generator ``W~^(kappa)`` as a vacuum state of degree ``cdeg``."""

    index: int
    cdeg: int
    state: FockState
    invariant: dict

    def mode(self, n: int, s: FockState) -> FockState:
        return state_to_field_mode(self, n, s)

    def to_json(self) -> dict:
        return {"index": self.index, "cdeg": self.cdeg, "state": self.state.to_json()}


_GEN_CACHE: dict = {}


def extract_w_generators(system, p: ParamPoint, table: Sequence | None = None) -> list:
    """Screening-kernel generators normalized by their pure ``P~_{-1}`` part.

    For each invariant ``F`` of degree ``c`` the returned state ``x`` lies in
    the degree-``c`` kernel, its coefficients on monomials made only of
    ``P~_{-1}`` modes reproduce ``F(P~_{-1})`` exactly, and it is reduced
    made quasi-primary (``L_1 x = 0`` for the total conformal vector) by
    adding kernel vectors without such a part.  Any freedom left is removed
    by RREF reduction on the monomial basis.  Every condition is homogeneous
    in ``(eps, P~)``, so the ``eps -> 0`` value is ``F(P~_{-1})|0>``.
    """
    frame = frame_of(system)
    cache_key = (frame, p.eps1, p.eps2, None if table is None else repr(table))
    if cache_key in _GEN_CACHE:
        return _GEN_CACHE[cache_key]
    gens = []
    for idx, (cdeg, F) in enumerate(invariant_generators(frame, table), start=1):
        kernel = kernel_basis(frame, cdeg, p)
        cols = basis(frame, cdeg)
        pure_cols = [c for c in cols if all(part == 1 for comp in c for part in comp)]
        target = {_pure_key(e): c for e, c in F.items()}
        # pure projection of each kernel vector
        proj = [[kv.coefficient(c) for kv in kernel] for c in pure_cols]
        rhs = [target.get(c, ZERO) for c in pure_cols]
        try:
            y = solve_any(proj, rhs)
        except ValueError as exc:
            raise NonGenericPointError(
                f"no kernel vector with the required leading part in degree {cdeg}"
            ) from exc
        x = [sum((yk * kv.coefficient(c) for yk, kv in zip(y, kernel) if yk), ZERO) for c in cols]
        # kernel vectors with vanishing pure part
        zero_pure = nullspace(proj, len(kernel)) if kernel else []
        zvecs = [[sum((z[k] * kernel[k].coefficient(c) for k in range(len(kernel)) if z[k]), ZERO)
                  for c in cols] for z in zero_pure]
        vac = vacuum_ground(frame, p.eps1, p.eps2)
        if zvecs:
            # quasi-primary: L_1 x = 0 for the total conformal vector
            low = basis(frame, cdeg - 1)
            l1x = total_virasoro_mode(1, vac._like(dict(zip(cols, x)))).vector(low)
            l1z = [total_virasoro_mode(1, vac._like(dict(zip(cols, z)))).vector(low) for z in zvecs]
            amat = [[l1z[k][r] for k in range(len(zvecs))] for r in range(len(low))]
            try:
                c = solve_any(amat, [-v for v in l1x])
            except ValueError as exc:
                raise NonGenericPointError(f"no quasi-primary generator in degree {cdeg}") from exc
            x = [xi + sum((ck * z[j] for ck, z in zip(c, zvecs) if ck), ZERO) for j, xi in enumerate(x)]
            # remaining freedom: quasi-primary kernel vectors without pure part
            free = nullspace(amat, len(zvecs))
            if free:
                fvecs = [[sum((f[k] * zvecs[k][j] for k in range(len(zvecs)) if f[k]), ZERO)
                          for j in range(len(cols))] for f in free]
                rows, pivots = rref(fvecs)
                for row, pc in zip(rows, pivots):
                    f = x[pc]
                    if f:
                        x = [a - f * b for a, b in zip(x, row)]
        state = vac._like(dict(zip(cols, x)))
        gens.append(WGenerator(idx, cdeg, state, F))
    _GEN_CACHE[cache_key] = gens
    return gens


def w_mode(gen: WGenerator, n: int, s: FockState) -> FockState:
    return state_to_field_mode(gen, n, s)


# --------------------------------------------------------------------------
# classical limit


def _pure_monomials(dim: int, k: int) -> list:
    """Exponent vectors of degree ``k`` in ``dim`` variables."""
    if dim == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        out.extend((first,) + rest for rest in _pure_monomials(dim - 1, k - first))
    return out


def _untilded_matrix(frame: Frame, p: ParamPoint, gen_index: int, n: int, k: int, table=None) -> list:
    """Matrix of ``W~_n`` (``n = 1``) or ``W~_{-1}/(eps1 eps2)`` (``n = -1``).

    Basis: pure monomials ``prod (P^j_{-1})^{e_j}|a>`` with untilded
    ``P = P~/(eps1 eps2)``; the image is projected onto pure monomials.
    Rows: target monomials of degree ``k - n``; columns: source degree ``k``.
    """
    gens = extract_w_generators(frame, p, table)
    gen = gens[gen_index]
    ground = module_ground(frame, p)
    e12 = p.eps1 * p.eps2
    src = _pure_monomials(frame.dim, k)
    dst = _pure_monomials(frame.dim, k - n)
    cols = []
    for e in src:
        s = ground._like({_pure_key(e): e12 ** (-k)})
        img = state_to_field_mode(gen, n, s)
        if n == -1:
            img = img.scale(1 / e12)
        cols.append([img.coefficient(_pure_key(f)) * e12 ** (k - n) for f in dst])
    return [[cols[c][r] for c in range(len(src))] for r in range(len(dst))]


def _classical_rhs(frame: Frame, F: dict, a: Sequence, n: int, k: int) -> list:
    """Exact ``eps = 0`` matrices of ``sum_i dF/da_i(a) X_i``.

    ``n = -1``: ``X_i = P^i_{-1}`` (multiplication); ``n = 1``:
    ``X_i = P~^i_1`` acting by ``[P~^i_1, P^j_{-1}] = -G_ij``.
    """
    dim = frame.dim
    grads = [poly.evaluate(poly.derivative(F, i), a) for i in range(dim)]
    src = _pure_monomials(dim, k)
    dst = _pure_monomials(dim, k - n)
    index = {f: r for r, f in enumerate(dst)}
    mat = [[ZERO] * len(src) for _ in dst]
    for c, e in enumerate(src):
        for i, g in enumerate(grads):
            if not g:
                continue
            if n == -1:
                f = tuple(x + int(j == i) for j, x in enumerate(e))
                mat[index[f]][c] += g
            else:
                for j in range(dim):
                    if e[j] and frame.gram[i][j]:
                        f = tuple(x - int(t == j) for t, x in enumerate(e))
                        mat[index[f]][c] += g * (-frame.gram[i][j]) * e[j]
    return mat


def _scaled_point(u: Sequence, a: Sequence, t) -> ParamPoint:
    return ParamPoint(t * Fraction(u[0]), t * Fraction(u[1]), tuple(a))


def _limit_matrix(build, u, a, bounds=(6, 6), extra=2):
    m, n = bounds
    ts = [Fraction(1, k + 1) for k in range(m + n + 1 + extra)]
    samples = [build(_scaled_point(u, a, t)) for t in ts]
    rows, cols = len(samples[0]), len(samples[0][0]) if samples[0] else 0
    return [[limit_at_zero([(t, s[r][c]) for t, s in zip(ts, samples)], m, n) for c in range(cols)]
            for r in range(rows)]


def classical_limit_check(system, d: int, u: Sequence, a: Sequence, table=None, bounds=(6, 6)) -> dict:
    """Compare ``eps -> 0`` limits of ``W~_1`` and ``W~_{-1}/(eps1 eps2)`` with
    ``sum_i dF(a) P~^i_1`` and ``sum_i dF(a) P^i_{-1}`` on pure monomials of
    degree ``<= d``.  Limits are taken along ``eps = t u``.
    """
    if d > 3:
        raise ValueError("classical limits are checked up to degree 3")
    frame = frame_of(system)
    a = tuple(Fraction(x) for x in a)
    report = {"frame": frame.name, "u": [format_rational(Fraction(x)) for x in u],
              "a": [format_rational(x) for x in a], "checks": [], "ok": True}
    gens = invariant_generators(frame, table)
    for idx, (cdeg, F) in enumerate(gens):
        for k in range(0, d + 1):
            for n in (1, -1):
                if k - n < 0:
                    continue
                lim = _limit_matrix(lambda pt: _untilded_matrix(frame, pt, idx, n, k, table), u, a, bounds)
                rhs = _classical_rhs(frame, F, a, n, k)
                ok = lim == rhs
                report["ok"] &= ok
                report["checks"].append({
                    "generator": idx + 1, "mode": n, "degree": k, "ok": ok,
                    "limit": [[format_rational(x) for x in row] for row in lim],
                    "expected": [[format_rational(x) for x in row] for row in rhs],
                })
    return report


def gl_classical_identity(r: int, u: Sequence, a: Sequence, bounds=(6, 6)) -> dict:
    """``W^(p)_1 Q^i_{-1}|a> -> (d e_p / d a_i)|a>`` in gl_r coordinates.

    ``Q^i_{-1} = -Q~^i_{-1}/(eps1 eps2)``, the sign for which
    ``[Q~^i_1, Q^j_{-1}] = +delta_ij``.
    """
    frame = Frame.gl(r)
    a = tuple(Fraction(x) for x in a)
    gens = invariant_generators(frame)

    def build(pt):
        ws = extract_w_generators(frame, pt)
        ground = module_ground(frame, pt)
        e12 = pt.eps1 * pt.eps2
        mat = []
        for w in ws:
            row = []
            for i in range(r):
                key = tuple((1,) if j == i else () for j in range(r))
                s = ground._like({key: -1 / e12})
                row.append(state_to_field_mode(w, 1, s).ground_coefficient())
            mat.append(row)
        return mat

    lim = _limit_matrix(build, u, a, bounds)
    expected = [[poly.evaluate(poly.derivative(F, i), a) for i in range(r)] for _, F in gens]
    return {"r": r, "ok": lim == expected,
            "limit": [[format_rational(x) for x in row] for row in lim],
            "expected": [[format_rational(x) for x in row] for row in expected]}
