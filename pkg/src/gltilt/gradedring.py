"""Monomial bases and exact linear algebra for the graded coordinate rings.

S = k[X1..X4] with deg X_i = x_i; the hypersurface ring is R = S/(f) with
f = X1^2 + X2^2 + X3^p + X4^q.  For a degree in normal form with
c-coefficient lam, the monomials of S in that degree are lam_i + p_i*k_i
with k >= 0 summing to lam, so dim S = C(lam+3,3) and (f being a
nonzerodivisor of degree c) dim R = C(lam+2,2).

Graded pieces of R are realized concretely as the complement of the pivot
columns of the echelonized image of f*S_{x-c} inside S_x; that gives
canonical monomial bases for all rank computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import linalg, poly
from .errors import DegreeMismatch
from .glgroup import GLContext, GLElement


@dataclass(frozen=True)
class MonomialSpace:
    degree: GLElement
    basis: tuple[tuple[int, int, int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class MultMatrix:
    src: MonomialSpace
    dst: MonomialSpace
    matrix: tuple[tuple, ...]  # rows over dst basis, columns over src basis


def dim_S(x: GLElement) -> int:
    return comb(x.l + 3, 3) if x.l >= 0 else 0


def dim_R(x: GLElement) -> int:
    """Closed form C(lam+2, 2); equals dim S_x - dim S_{x-c}."""
    return comb(x.l + 2, 2) if x.l >= 0 else 0


@lru_cache(maxsize=None)
def monomial_space(x: GLElement) -> MonomialSpace:
    if x.l < 0:
        return MonomialSpace(x, ())
    ctx = x.ctx
    basis = []
    for k1 in range(x.l + 1):
        for k2 in range(x.l - k1 + 1):
            for k3 in range(x.l - k1 - k2 + 1):
                k4 = x.l - k1 - k2 - k3
                basis.append(tuple(a + p * k for a, p, k in
                                   zip(x.lam, ctx.weights, (k1, k2, k3, k4))))
    basis.sort()
    return MonomialSpace(x, tuple(basis))


def expand(p: dict, space: MonomialSpace):
    """Coefficient vector of a polynomial over the monomial basis of space."""
    vec = [0] * space.dim
    index = _index_of(space)
    for m, cf in p.items():
        try:
            vec[index[m]] += cf
        except KeyError:
            raise DegreeMismatch(f"monomial {m} not in degree {space.degree}")
    return vec


def _index_of(space: MonomialSpace):
    idx = _INDEX.get(space.basis)
    if idx is None:
        idx = _INDEX[space.basis] = {m: i for i, m in enumerate(space.basis)}
    return idx


_INDEX: dict = {}


def mult_matrix(g: dict, src: GLElement) -> MultMatrix:
    """Multiplication by homogeneous g on S, from degree src."""
    ctx = src.ctx
    gdeg = poly.degree_of(g, ctx)
    if gdeg is None:
        gdeg = ctx.zero
    s_space = monomial_space(src)
    d_space = monomial_space(src + gdeg)
    cols = [expand(poly.p_mul(g, poly.monomial(m)), d_space) for m in s_space.basis]
    rows = tuple(tuple(col[r] for col in cols) for r in range(d_space.dim))
    return MultMatrix(s_space, d_space, rows)


class RPiece:
    """The graded piece R_x as an echelon complement of f*S_{x-c} in S_x."""

    def __init__(self, x: GLElement):
        ctx = x.ctx
        self.degree = x
        self.space = monomial_space(x)
        sub = monomial_space(x - ctx.c)
        f = poly.potential(ctx)
        image = [expand(poly.p_mul(f, poly.monomial(m)), self.space) for m in sub.basis]
        self.rows, self.pivots = linalg.rref(image, self.space.dim)
        pivot_set = set(self.pivots)
        self.complement = tuple(i for i in range(self.space.dim) if i not in pivot_set)
        self.dim = len(self.complement)

    def project(self, vec):
        """Coordinates over the complement basis, reducing modulo im(f)."""
        v = [Fraction(a) for a in vec]
        for row, pc in zip(self.rows, self.pivots):
            fcf = v[pc]
            if fcf:
                v = [a - fcf * b for a, b in zip(v, row)]
        return [v[i] for i in self.complement]

    def project_poly(self, p: dict):
        return self.project(expand(p, self.space))

    def monomials(self):
        return tuple(self.space.basis[i] for i in self.complement)


@lru_cache(maxsize=None)
def r_piece(x: GLElement) -> RPiece:
    return RPiece(x)


def mult_rank(g: dict, src: GLElement, in_R: bool = False) -> int:
    """Rank of multiplication by g out of the given graded piece."""
    ctx = src.ctx
    gdeg = poly.degree_of(g, ctx)
    if gdeg is None:
        return 0
    if not in_R:
        mm = mult_matrix(g, src)
        return linalg.rank_int([list(r) for r in mm.matrix])
    src_piece = r_piece(src)
    dst_piece = r_piece(src + gdeg)
    cols = [dst_piece.project_poly(poly.p_mul(g, poly.monomial(m)))
            for m in src_piece.monomials()]
    rows = [[col[r] for col in cols] for r in range(dst_piece.dim)]
    return linalg.rank_fraction(rows)


def line_hom(x: GLElement, y: GLElement) -> int:
    """dim Hom(O(x), O(y)) = dim R_{y-x}."""
    return dim_R(y - x)


def line_ext1(x: GLElement, y: GLElement) -> int:
    """Always 0 between line bundles in dimension 2."""
    return 0


def line_ext2(x: GLElement, y: GLElement) -> int:
    """Serre-dual form dim R_{x-y+w}."""
    return dim_R(x - y + x.ctx.w)
