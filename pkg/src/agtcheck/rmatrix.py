"""R-matrices as normalized intertwiners between Fock modules at ``a`` and
``s_i a``.

``R`` is the unique operator, up to scale, that carries ``L~^i_n`` at ``a``
to ``L~^i_n`` at ``s_i a`` and commutes with the Heisenberg currents
orthogonal to ``alpha_i``.  It is found by solving the linear conditions on
all blocks of degree ``<= d`` at once and fixing ``R|a> = |s_i a>``.
Simple-root indices are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactcore import (
    NonGenericPointError,
    ParamPoint,
    format_rational,
    identity,
    limit_at_zero,
    matmul,
    nullspace,
)
from .fock import apply_current, basis, module_ground
from .rootdata import RootSystem, weyl_reflect
from .walgebra import frame_of, virasoro_mode

__all__ = ["RBlock", "rmatrix_blocks", "rmatrix_block", "unitarity_check", "ybe_check",
           "leading_term_check", "reflection_operator", "intertwiner_residual"]

VIRASORO_MODES = (0, 1, -1, 2, -2)


@dataclass
class RBlock:
    color: int
    degree: int
    basis: tuple
    matrix: list

    def to_json(self) -> dict:
        return {
            "color": self.color,
            "degree": self.degree,
            "basis": [[list(c) for c in k] for k in self.basis],
            "matrix": [[format_rational(x) for x in row] for row in self.matrix],
        }


def _orthogonal_currents(rs: RootSystem, i: int) -> list:
    """Basis of ``{u : (u, alpha_i) = 0}`` in simple-root color coordinates."""
    row = [[Fraction(rs.cartan[j][i - 1]) for j in range(rs.rank)]]
    return nullspace(row, rs.rank)


def rmatrix_blocks(i: int, d: int, p: ParamPoint, rs: RootSystem, modes=VIRASORO_MODES) -> list:
    """Blocks ``R_0..R_d`` of the normalized intertwiner ``Fock(a) -> Fock(s_i a)``."""
    frame = frame_of(rs)
    src = module_ground(frame, p)
    dst = module_ground(frame, weyl_reflect(rs, i, p))
    bases = [basis(frame, k) for k in range(d + 1)]
    offset, pos = 0, {}
    for k, b in enumerate(bases):
        for r in range(len(b)):
            for c in range(len(b)):
                pos[(k, r, c)] = offset
                offset += 1
    nunk = offset
    ops = [("L", n) for n in modes]
    ops += [("P", tuple(u), n) for u in _orthogonal_currents(rs, i)
            for n in range(-d, d + 1) if n]

    def act(op, state):
        if op[0] == "L":
            return virasoro_mode(i, op[1], state)
        return apply_current(op[1], op[2], state)

    rows = []
    dst_images: dict = {}
    for k, b in enumerate(bases):
        for c, key in enumerate(b):
            e = src._like({key: 1})
            for op in ops:
                n = op[-1]
                k2 = k - n
                if k2 < 0 or k2 > d:
                    continue
                b2 = bases[k2]
                # R_{k2}(op e)
                lhs = act(op, e)
                eq = [dict() for _ in b2]
                for key2, coef in lhs.terms.items():
                    col = b2.index(key2)
                    for r2 in range(len(b2)):
                        idx = pos[(k2, r2, col)]
                        eq[r2][idx] = eq[r2].get(idx, 0) + coef
                # - op' R_k e, with R_k e = sum_r R_k[r, c] f_r
                for r, fkey in enumerate(b):
                    cache_key = (op, k, r)
                    if cache_key not in dst_images:
                        dst_images[cache_key] = act(op, dst._like({fkey: 1}))
                    img = dst_images[cache_key]
                    idx = pos[(k, r, c)]
                    for key2, coef in img.terms.items():
                        r2 = b2.index(key2)
                        eq[r2][idx] = eq[r2].get(idx, 0) - coef
                for e_row in eq:
                    if any(e_row.values()):
                        row = [Fraction(0)] * nunk
                        for idx, v in e_row.items():
                            row[idx] = Fraction(v)
                        rows.append(row)
    kernel = nullspace(rows, nunk)
    if len(kernel) != 1:
        raise NonGenericPointError(f"intertwiner space has dimension {len(kernel)}, expected 1")
    vec = kernel[0]
    scale = vec[pos[(0, 0, 0)]]
    if scale == 0:
        raise NonGenericPointError("intertwiner kills the highest weight vector")
    vec = [x / scale for x in vec]
    out = []
    for k, b in enumerate(bases):
        mat = [[vec[pos[(k, r, c)]] for c in range(len(b))] for r in range(len(b))]
        out.append(RBlock(i, k, b, mat))
    return out


_BLOCK_CACHE: dict = {}


def rmatrix_block(i: int, d: int, p: ParamPoint, rs: RootSystem) -> RBlock:
    key = (i, d, p, rs)
    if key not in _BLOCK_CACHE:
        for blk in rmatrix_blocks(i, d, p, rs):
            _BLOCK_CACHE[(i, blk.degree, p, rs)] = blk
    return _BLOCK_CACHE[key]


def intertwiner_residual(i: int, d: int, p: ParamPoint, rs: RootSystem, modes) -> bool:
    """True when the degree ``<= d`` blocks intertwine every ``L~^i_n`` in ``modes``."""
    frame = frame_of(rs)
    blocks = rmatrix_blocks(i, d, p, rs)
    src = module_ground(frame, p)
    dst = module_ground(frame, weyl_reflect(rs, i, p))

    def apply_r(state):
        out = dst.zero_state()
        for key, coef in state.terms.items():
            k = sum(map(sum, key))
            blk = blocks[k]
            c = blk.basis.index(key)
            out = out + dst._like({blk.basis[r]: blk.matrix[r][c] * coef for r in range(len(blk.basis))})
        return out

    for k in range(d + 1):
        for key in basis(frame, k):
            e = src._like({key: 1})
            for n in modes:
                if not 0 <= k - n <= d:
                    continue
                if apply_r(virasoro_mode(i, n, e)) != virasoro_mode(i, n, apply_r(e)):
                    return False
    return True


def unitarity_check(i: int, d: int, p: ParamPoint, rs: RootSystem) -> bool:
    """``R_i(s_i a) R_i(a) = 1`` on every block of degree ``<= d``."""
    q = weyl_reflect(rs, i, p)
    for k in range(d + 1):
        m = matmul(rmatrix_block(i, k, q, rs).matrix, rmatrix_block(i, k, p, rs).matrix)
        if m != identity(len(m)):
            return False
    return True


def _braid_side(word, d, p, rs):
    """``R_{w_k}(...) ... R_{w_1}(a)`` on degree ``d``; ``word`` applied left to right."""
    point = p
    mat = None
    for i in word:
        blk = rmatrix_block(i, d, point, rs).matrix
        mat = blk if mat is None else matmul(blk, mat)
        point = weyl_reflect(rs, i, point)
    return mat


def ybe_check(d: int, p: ParamPoint, rs: RootSystem | None = None, i: int = 1, j: int = 2,
              orientation: str = "ij") -> bool:
    """Braid relation of the R-matrices on every degree ``<= d``.

    For ``(alpha_i, alpha_j) = -1``: ``R_j R_i R_j = R_i R_j R_i`` (read right
    to left, starting at ``a``); for orthogonal roots ``R_i R_j = R_j R_i``.
    ``orientation="ji"`` swaps the roles of ``i`` and ``j``.
    """
    rs = rs or RootSystem.A(2)
    if orientation == "ji":
        i, j = j, i
    braid = rs.cartan[i - 1][j - 1] == -1
    left = (j, i, j) if braid else (j, i)
    right = (i, j, i) if braid else (i, j)
    for k in range(d + 1):
        if _braid_side(left, k, p, rs) != _braid_side(right, k, p, rs):
            return False
    return True


def reflection_operator(i: int, d: int, rs: RootSystem) -> list:
    """Matrix of ``P^j -> s_i P^j`` on monomials of degree ``d``.

    ``s_i`` acts on the colors as on the coordinate functions ``a^j``:
    ``P^j -> P^j - C_ji P^i``.
    """
    frame = frame_of(rs)
    b = basis(frame, d)
    index = {k: r for r, k in enumerate(b)}
    mat = [[Fraction(0)] * len(b) for _ in b]
    for c, key in enumerate(b):
        terms = {tuple(() for _ in range(rs.rank)): Fraction(1)}
        for j, comp in enumerate(key):
            for part in comp:
                image = {j: Fraction(1)}
                if j != i - 1:
                    image[i - 1] = image.get(i - 1, 0) - rs.cartan[j][i - 1]
                else:
                    image = {j: Fraction(-1)}
                nxt: dict = {}
                for t, v in terms.items():
                    for color, coef in image.items():
                        if not coef:
                            continue
                        comp2 = tuple(sorted(t[color] + (part,), reverse=True))
                        t2 = t[:color] + (comp2,) + t[color + 1:]
                        nxt[t2] = nxt.get(t2, 0) + v * coef
                terms = nxt
        for t, v in terms.items():
            if v:
                mat[index[t]][c] += v
    return mat


def leading_term_check(i: int, d: int, p0: ParamPoint, rs: RootSystem, bounds=None) -> dict:
    """Limit of the degree-``d`` block along ``a = N a0`` as ``N -> infinity``.

    Entries are reconstructed as rational functions of ``t = 1/N``.  The
    report compares the limit with the reflection operator and with ``-1``,
    and checks that the block at a finite ``N`` differs from its limit.
    """
    size = len(basis(frame_of(rs), d))
    m = n = bounds if bounds is not None else 2 * d + 2
    ts = [Fraction(1, 3 + 2 * k) for k in range(m + n + 3)]
    samples = [rmatrix_block(i, d, p0.with_a(x / t for x in p0.a), rs).matrix for t in ts]
    limit = [[limit_at_zero([(t, s[r][c]) for t, s in zip(ts, samples)], m, n) for c in range(size)]
             for r in range(size)]
    refl = reflection_operator(i, d, rs)
    minus_one = [[-x for x in row] for row in identity(size)]
    return {
        "color": i,
        "degree": d,
        "limit": [[format_rational(x) for x in row] for row in limit],
        "is_reflection": limit == refl,
        "is_minus_identity": limit == minus_one,
        "finite_tail_nonzero": samples[0] != limit,
    }
