"""Graded matrix factorizations of the defining hypersurface polynomial.

A factorization is a pair of square polynomial matrices phi: F1 -> F0 and
psi: F0 -> F1(c) with phi*psi = psi*phi = f * id, where F0, F1 are graded
free modules recorded by their generator degrees (F = sum S(-g_i)).  The
cokernel of phi is a maximal Cohen-Macaulay module over R = S/(f); free
R-modules R(x) are carried by the trivial factorization (f | 1), which lets
every summand of a candidate bundle run through the same Hom machinery.

Extension bundles are tensor products of the Koszul factorizations
(X_i^{l_i} | X_i^{p_i - l_i}); the global twist pinning the tensor cokernel
to the bundle appearing in the four-term sheaf sequence is found by
calibration against line-bundle Hom targets.

Hom conventions.  A degree-0 morphism cok(phi_M) -> cok(phi_N) is an
F0-level matrix A with A*phi_M = phi_N*B for the (unique) matrix B; it is
zero at module level iff A = phi_N*D, and zero in the stable category iff
A = phi_N*H + H'*psi_M.  All dimensions reduce to integer matrix ranks.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from . import linalg, poly
from .errors import CalibrationFailed, DegreeMismatch, InvariantViolation, NotComposable
from .glgroup import GLContext, GLElement
from .gradedring import dim_R, monomial_space, r_piece

UNIT = {(0, 0, 0, 0): 1}


def mat_mul(A, B):
    if not B:
        return ()
    ncols = len(B[0]) if B else 0
    out = []
    for i in range(len(A)):
        row = []
        for j in range(ncols):
            acc: dict = {}
            for k in range(len(B)):
                if A[i][k] and B[k][j]:
                    acc = poly.p_add(acc, poly.p_mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_identity(n):
    return tuple(tuple(dict(UNIT) if i == j else {} for j in range(n)) for i in range(n))


def _freeze_matrix(m):
    return tuple(tuple(poly.freeze(e) for e in row) for row in m)


class GradedMF:
    """Immutable graded matrix factorization; see the module docstring."""

    __slots__ = ("ctx", "deg0", "deg1", "phi", "psi", "potential", "_key")

    def __init__(self, ctx, deg0, deg1, phi, psi, potential, validate=True):
        self.ctx = ctx
        self.deg0 = tuple(deg0)
        self.deg1 = tuple(deg1)
        self.phi = tuple(tuple(dict(e) for e in row) for row in phi)
        self.psi = tuple(tuple(dict(e) for e in row) for row in psi)
        self.potential = dict(potential)
        self._key = None
        if validate:
            self.validate()

    @property
    def size(self):
        return len(self.deg0)

    @property
    def key(self):
        if self._key is None:
            self._key = (
                self.ctx.weights,
                tuple(d.raw() for d in self.deg0),
                tuple(d.raw() for d in self.deg1),
                _freeze_matrix(self.phi),
                _freeze_matrix(self.psi),
            )
        return self._key

    def validate(self):
        n = self.size
        if len(self.deg1) != n:
            raise InvariantViolation("factorization is not square")
        for i in range(n):
            for j in range(n):
                poly.check_homogeneous(self.phi[i][j], self.deg1[j] - self.deg0[i], self.ctx)
                poly.check_homogeneous(self.psi[i][j], self.deg0[j] - self.deg1[i] + self.ctx.c, self.ctx)
        for prod in (mat_mul(self.phi, self.psi), mat_mul(self.psi, self.phi)):
            for i in range(n):
                for j in range(n):
                    want = self.potential if i == j else {}
                    if not poly.p_eq(prod[i][j], want):
                        raise InvariantViolation("phi*psi != f*id")

    def __repr__(self):
        return f"GradedMF(size={self.size}, weights={self.ctx.weights})"


def free_mf(ctx: GLContext, x: GLElement) -> GradedMF:
    """Trivial factorization (f | 1) presenting the free module R(x)."""
    f = poly.potential(ctx)
    return GradedMF(ctx, [-x], [-x + ctx.c], ((f,),), ((dict(UNIT),),), f, validate=False)


def koszul_mf(ctx: GLContext, u: dict, v: dict) -> GradedMF:
    """1x1 factorization (u | v) of the product monomial u*v of degree c."""
    du = poly.degree_of(u, ctx)
    dv = poly.degree_of(v, ctx)
    if du is None or dv is None or du + dv != ctx.c:
        raise DegreeMismatch("Koszul factors must be nonzero with degrees summing to c")
    if len(u) != 1 or len(v) != 1:
        raise DegreeMismatch("Koszul factors must be monomials")
    return GradedMF(ctx, [ctx.zero], [du], ((u,),), ((v,),), poly.p_mul(u, v))


def tensor(a: GradedMF, b: GradedMF) -> GradedMF:
    """Tensor product; factors the sum of the two potentials."""
    ctx = a.ctx
    na, nb = a.size, b.size
    deg0 = [da + db for da in a.deg0 for db in b.deg0] + \
           [da + db - ctx.c for da in a.deg1 for db in b.deg1]
    deg1 = [da + db for da in a.deg1 for db in b.deg0] + \
           [da + db for da in a.deg0 for db in b.deg1]
    n = na * nb
    zero = {}

    def blockm(tl, tr, bl, br):
        rows = []
        for i in range(2 * n):
            row = []
            for j in range(2 * n):
                bi, bj = divmod(i, n)[0], divmod(j, n)[0]
                block = (tl, tr, bl, br)[2 * bi + bj]
                row.append(block(i % n, j % n))
            rows.append(tuple(row))
        return tuple(rows)

    def kron_left(m):  # m (x) identity_b
        return lambda i, j: m[i // nb][j // nb] if i % nb == j % nb else zero

    def kron_right(m, sign=1):  # identity_a (x) m
        return lambda i, j: (poly.p_scale(m[i % nb][j % nb], sign) if i // nb == j // nb else zero)

    phi = blockm(kron_left(a.phi), kron_right(b.phi),
                 kron_right(b.psi, -1), kron_left(a.psi))
    psi = blockm(kron_left(a.psi), kron_right(b.phi, -1),
                 kron_right(b.psi), kron_left(a.phi))
    return GradedMF(ctx, deg0, deg1, phi, psi, poly.p_add(a.potential, b.potential))


def twist(M: GradedMF, t: GLElement) -> GradedMF:
    """Grading shift M(t); generator degrees drop by t."""
    return GradedMF(M.ctx, [d - t for d in M.deg0], [d - t for d in M.deg1],
                    M.phi, M.psi, M.potential, validate=False)


def suspend(M: GradedMF) -> GradedMF:
    """Shift [1] of the stable category; suspend^2 = twist by c."""
    return GradedMF(M.ctx, [d - M.ctx.c for d in M.deg1], M.deg0,
                    M.psi, M.phi, M.potential, validate=False)


def suspend_inv(M: GradedMF) -> GradedMF:
    return suspend(twist(M, -M.ctx.c))


def shift(M: GradedMF, n: int) -> GradedMF:
    for _ in range(abs(n)):
        M = suspend(M) if n > 0 else suspend_inv(M)
    return M


def mf_tau_inv(M: GradedMF) -> GradedMF:
    """Inverse AR translate: (-w) twist followed by [-1]."""
    return suspend_inv(twist(M, -M.ctx.w))


def mf_tau(M: GradedMF) -> GradedMF:
    return suspend(twist(M, M.ctx.w))


def direct_sum(a: GradedMF, b: GradedMF) -> GradedMF:
    if not poly.p_eq(a.potential, b.potential):
        raise InvariantViolation("potentials differ")
    na, nb = a.size, b.size
    zero = {}

    def glue(ma, mb):
        rows = []
        for i in range(na + nb):
            row = []
            for j in range(na + nb):
                if i < na and j < na:
                    row.append(ma[i][j])
                elif i >= na and j >= na:
                    row.append(mb[i - na][j - na])
                else:
                    row.append(zero)
            rows.append(tuple(row))
        return tuple(rows)

    return GradedMF(a.ctx, a.deg0 + b.deg0, a.deg1 + b.deg1,
                    glue(a.phi, b.phi), glue(a.psi, b.psi), a.potential, validate=False)


def cone(mor: "Morphism") -> GradedMF:
    """Mapping cone of a morphism of factorizations (triangle N -> cone -> M[1])."""
    M, N = mor.src, mor.dst
    ctx = M.ctx
    A = mor.A
    B = _lift_B(mor)
    sM = suspend(M)
    deg0 = list(N.deg0) + list(sM.deg0)
    deg1 = list(N.deg1) + list(sM.deg1)
    nN, nM = N.size, M.size
    zero = {}

    def build(top_left, top_right, bottom_right):
        rows = []
        for i in range(nN + nM):
            row = []
            for j in range(nN + nM):
                if i < nN and j < nN:
                    row.append(top_left[i][j])
                elif i < nN and j >= nN:
                    row.append(top_right[i][j - nN])
                elif i >= nN and j >= nN:
                    row.append(poly.p_neg(bottom_right[i - nN][j - nN]))
                else:
                    row.append(zero)
            rows.append(tuple(row))
        return tuple(rows)

    phi = build(N.phi, A, sM.phi)
    psi = build(N.psi, B, sM.psi)
    return GradedMF(ctx, deg0, deg1, phi, psi, N.potential)


def _lift_B(mor: "Morphism"):
    """The F1-level component B with A*phi_M = phi_N*B, via B = psi_N*A*phi_M / f."""
    M, N = mor.src, mor.dst
    prod = mat_mul(mat_mul(N.psi, mor.A), M.phi)
    f = N.potential
    B = []
    for row in prod:
        brow = []
        for entry in row:
            brow.append(_exact_poly_div(entry, f))
        B.append(tuple(brow))
    return tuple(B)


def _exact_poly_div(p: dict, f: dict):
    """Exact division by the potential (valid on morphism products)."""
    if not p:
        return {}
    # divide greedily: subtract (lead coeff ratio) * f aligned at a monomial of f
    out: dict = {}
    rem = dict(p)
    flead = max(f)
    fcf = f[flead]
    while rem:
        m = max(rem)
        quot_mono = tuple(a - b for a, b in zip(m, flead))
        if any(a < 0 for a in quot_mono):
            raise InvariantViolation("inexact division by the potential")
        q = Fraction(rem[m], 1) / fcf
        if q.denominator == 1:
            q = int(q)
        out[quot_mono] = out.get(quot_mono, 0) + q
        rem = poly.p_sub(rem, poly.p_mul({quot_mono: q}, f))
    return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# graded pieces of the free modules and the cokernel

def _piece_layout(degs, d):
    """Basis layout of (sum S(-degs))_d: list of (slot, monomial), plus offsets."""
    layout = []
    offsets = []
    for i, g in enumerate(degs):
        offsets.append(len(layout))
        space = monomial_space(d - g)
        layout.extend((i, m) for m in space.basis)
    return layout, offsets


def _matrix_at_degree(mat, row_degs, col_degs, d):
    """Integer matrix of a polynomial matrix on the degree-d graded pieces."""
    row_layout, row_off = _piece_layout(row_degs, d)
    col_layout, _ = _piece_layout(col_degs, d)
    rows = [[0] * len(col_layout) for _ in row_layout]
    row_index = {}
    for pos, (i, m) in enumerate(row_layout):
        row_index[(i, m)] = pos
    for cpos, (j, mu) in enumerate(col_layout):
        for i in range(len(row_degs)):
            entry = mat[i][j]
            if not entry:
                continue
            for m, cf in poly.p_mul(entry, poly.monomial(mu)).items():
                rows[row_index[(i, m)]][cpos] += cf
    return rows, row_layout, col_layout


def from_free_dim(M: GradedMF, d: GLElement) -> int:
    """dim of the cokernel of phi in degree d; equals Hom(R(-d), cok phi)."""
    key = (M.key, d.raw())
    val = _FROM_FREE_CACHE.get(key)
    if val is None:
        rows, row_layout, col_layout = _matrix_at_degree(M.phi, M.deg0, M.deg1, d)
        val = len(row_layout) - linalg.rank_int(rows) if row_layout else 0
        _FROM_FREE_CACHE[key] = val
    return val


def to_free_dim(M: GradedMF, y: GLElement) -> int:
    """dim Hom(cok phi, R(y)): row vectors over R annihilating phi."""
    key = (M.key, y.raw())
    val = _TO_FREE_CACHE.get(key)
    if val is not None:
        return val
    pieces = [r_piece(g + y) for g in M.deg0]
    n_vars = sum(p.dim for p in pieces)
    if n_vars == 0:
        _TO_FREE_CACHE[key] = 0
        return 0
    rows = []
    for j in range(M.size):
        target = r_piece(M.deg1[j] + y)
        if target.dim == 0:
            continue
        block_rows = [[0] * n_vars for _ in range(target.dim)]
        off = 0
        for i, piece in enumerate(pieces):
            entry = M.phi[i][j]
            if entry:
                for t, m in enumerate(piece.monomials()):
                    coords = target.project_poly(poly.p_mul(entry, poly.monomial(m)))
                    for r, cf in enumerate(coords):
                        if cf:
                            block_rows[r][off + t] = cf
            off += piece.dim
        rows.extend(block_rows)
    val = n_vars - linalg.rank_fraction(rows) if rows else n_vars
    _TO_FREE_CACHE[key] = val
    return val


_FROM_FREE_CACHE: dict = {}
_TO_FREE_CACHE: dict = {}
_LEFT_KERNEL_CACHE: dict = {}
_HOM_DIM_CACHE: dict = {}
_HOM_SPACE_CACHE: dict = {}


def _left_kernel_rows(N: GradedMF, d: GLElement):
    """Functionals on (F0_N)_d vanishing on the image of phi_N."""
    key = (N.key, d.raw())
    val = _LEFT_KERNEL_CACHE.get(key)
    if val is None:
        rows, row_layout, col_layout = _matrix_at_degree(N.phi, N.deg0, N.deg1, d)
        if not row_layout:
            val = ([], row_layout)
        else:
            val = (linalg.left_kernel(rows, len(row_layout), len(col_layout)) if col_layout
                   else [tuple(1 if k == t else 0 for k in range(len(row_layout)))
                         for t in range(len(row_layout))],
                   row_layout)
        _LEFT_KERNEL_CACHE[key] = val
    return val


class _PairLayout:
    """Variable layout for degree-0 matrices sum S(-src) -> sum S(-dst)."""

    def __init__(self, src_degs, dst_degs):
        self.vars = []
        self.block = {}
        for i, gd in enumerate(dst_degs):
            for j, gs in enumerate(src_degs):
                basis = monomial_space(gs - gd).basis
                self.block[(i, j)] = (len(self.vars), basis)
                self.vars.extend((i, j, m) for m in basis)

    @property
    def dim(self):
        return len(self.vars)

    def matrix_from_vector(self, vec, n_dst, n_src):
        rows = [[{} for _ in range(n_src)] for _ in range(n_dst)]
        for val, (i, j, m) in zip(vec, self.vars):
            if val:
                rows[i][j] = poly.p_add(rows[i][j], poly.monomial(m, val))
        return tuple(tuple(r) for r in rows)

    def vector_from_matrix(self, mat):
        vec = []
        for (i, j, m) in self.vars:
            vec.append(mat[i][j].get(m, 0))
        return vec


def _hom_constraints(M: GradedMF, N: GradedMF, layout: _PairLayout):
    """Rows of the linear system cutting out {A : A*phi_M lands in im phi_N}."""
    rows = []
    for jM in range(M.size):
        d = M.deg1[jM]
        kernels, row_layout = _left_kernel_rows(N, d)
        if not kernels:
            continue
        pos_of = {pair: t for t, pair in enumerate(row_layout)}
        # coefficient of variable (i,k,mu) in coordinate (i, m) is the
        # m-coefficient of mu * phi_M[k][jM]
        var_cols = []
        for (i, k, mu) in layout.vars:
            entry = M.phi[k][jM]
            col = []
            if entry:
                prod = poly.p_mul(entry, poly.monomial(mu))
                for m, cf in prod.items():
                    col.append((pos_of[(i, m)], cf))
            var_cols.append(col)
        for w in kernels:
            row = [0] * layout.dim
            nonzero = False
            for v, col in enumerate(var_cols):
                acc = 0
                for pos, cf in col:
                    if w[pos]:
                        acc += w[pos] * cf
                if acc:
                    row[v] = acc
                    nonzero = True
            if nonzero:
                rows.append(row)
    return rows


def _homotopy_columns(M: GradedMF, N: GradedMF, layout: _PairLayout):
    """Images of (H, H') |-> phi_N*H + H'*psi_M in A-coordinates."""
    idx = {v: t for t, v in enumerate(layout.vars)}
    cols = []
    h_layout = _PairLayout(M.deg0, N.deg1)
    for (kN, iM, mu) in h_layout.vars:
        vec = [0] * layout.dim
        for iN in range(N.size):
            entry = N.phi[iN][kN]
            if entry:
                for m, cf in poly.p_mul(entry, poly.monomial(mu)).items():
                    vec[idx[(iN, iM, m)]] += cf
        cols.append(vec)
    hp_layout = _PairLayout([d - M.ctx.c for d in M.deg1], N.deg0)
    for (iN, jM, mu) in hp_layout.vars:
        vec = [0] * layout.dim
        for kM in range(M.size):
            entry = M.psi[jM][kM]
            if entry:
                for m, cf in poly.p_mul(entry, poly.monomial(mu)).items():
                    vec[idx[(iN, kM, m)]] += cf
        cols.append(vec)
    return cols


def _module_zero_columns(M: GradedMF, N: GradedMF, layout: _PairLayout):
    """Images of D |-> phi_N*D in A-coordinates."""
    idx = {v: t for t, v in enumerate(layout.vars)}
    cols = []
    d_layout = _PairLayout(M.deg0, N.deg1)
    for (kN, iM, mu) in d_layout.vars:
        vec = [0] * layout.dim
        for iN in range(N.size):
            entry = N.phi[iN][kN]
            if entry:
                for m, cf in poly.p_mul(entry, poly.monomial(mu)).items():
                    vec[idx[(iN, iM, m)]] += cf
        cols.append(vec)
    return cols


def hom_dims(M: GradedMF, N: GradedMF):
    """(module_hom_dim, stable_hom_dim) for degree-0 morphisms cok M -> cok N."""
    key = (M.key, N.key)
    val = _HOM_DIM_CACHE.get(key)
    if val is not None:
        return val
    layout = _PairLayout(M.deg0, N.deg0)
    if layout.dim == 0:
        val = (0, 0)
        _HOM_DIM_CACHE[key] = val
        return val
    constraints = _hom_constraints(M, N, layout)
    dim_sol = layout.dim - linalg.rank_fraction(constraints)
    d_layout = _PairLayout(M.deg0, N.deg1)
    module = dim_sol - d_layout.dim
    hcols = _homotopy_columns(M, N, layout)
    stable = dim_sol - linalg.rank_fraction(hcols)
    if module < 0 or stable < 0 or stable > module:
        raise InvariantViolation(f"hom dimension bookkeeping failed: sol={dim_sol}, "
                                 f"module={module}, stable={stable}")
    val = (module, stable)
    _HOM_DIM_CACHE[key] = val
    return val


def module_hom_dim(M: GradedMF, N: GradedMF) -> int:
    return hom_dims(M, N)[0]


def stable_hom_dim(M: GradedMF, N: GradedMF) -> int:
    return hom_dims(M, N)[1]


def free_hom_dim(x: GLElement, M: GradedMF, direction: str) -> int:
    """Hom with the free module R(x): 'from-free' = Hom(R(x), cok),
    'to-free' = Hom(cok, R(x))."""
    if direction == "from-free":
        return from_free_dim(M, -x)
    if direction == "to-free":
        return to_free_dim(M, x)
    raise ValueError(f"direction must be 'from-free' or 'to-free', got {direction!r}")


class Morphism:
    """Degree-0 morphism of cokernels, stored as its F0-level matrix."""

    __slots__ = ("src", "dst", "A")

    def __init__(self, src, dst, A):
        self.src = src
        self.dst = dst
        self.A = tuple(tuple(dict(e) for e in row) for row in A)

    @staticmethod
    def identity(M):
        return Morphism(M, M, mat_identity(M.size))

    def __repr__(self):
        return f"Morphism({self.src!r} -> {self.dst!r})"


def compose(f1: Morphism, f2: Morphism) -> Morphism:
    """f1 after f2 (matrix product of representatives)."""
    if f2.dst.key != f1.src.key:
        raise NotComposable("codomain of the second factor must match domain of the first")
    return Morphism(f2.src, f1.dst, mat_mul(f1.A, f2.A))


class HomSpace:
    """Basis of Hom(cok M, cok N) (module or stable level) with coordinates.

    Basis vectors are reduced-row-echelon representatives of the solution
    space modulo the zero-morphism subspace, so composition classes are
    canonical.
    """

    def __init__(self, M, N, stable=False):
        self.M, self.N, self.stable = M, N, stable
        self.layout = _PairLayout(M.deg0, N.deg0)
        constraints = _hom_constraints(M, N, self.layout)
        solutions = linalg.nullspace(constraints, self.layout.dim) if self.layout.dim else []
        zero_cols = (_homotopy_columns(M, N, self.layout) if stable
                     else _module_zero_columns(M, N, self.layout))
        self.zero = linalg.Subspace([c for c in zero_cols if any(c)], self.layout.dim)
        reduced = [self.zero.reduce(v) for v in solutions]
        rows, _ = linalg.rref([r for r in reduced if any(r)], self.layout.dim)
        self.basis_vectors = rows
        self.basis = [Morphism(M, N, self.layout.matrix_from_vector(v, N.size, M.size))
                      for v in rows]

    @property
    def dim(self):
        return len(self.basis_vectors)

    def coords_of(self, mor: Morphism):
        vec = self.zero.reduce(self.layout.vector_from_matrix(mor.A))
        if not any(vec):
            return tuple([0] * self.dim)
        coeffs = linalg.solve_in_span(self.basis_vectors, vec, self.layout.dim)
        if coeffs is None:
            raise InvariantViolation("composite is not a morphism class of this pair")
        return tuple(coeffs)

    def is_zero(self, mor: Morphism) -> bool:
        return not any(self.coords_of(mor))


def hom_space(M: GradedMF, N: GradedMF, stable=False) -> HomSpace:
    key = (M.key, N.key, stable)
    val = _HOM_SPACE_CACHE.get(key)
    if val is None:
        val = _HOM_SPACE_CACHE[key] = HomSpace(M, N, stable)
    return val


# ---------------------------------------------------------------------------
# reduction: splitting off unit entries (free summands of the cokernel)

def _strip_phi_units(M: GradedMF):
    deg0 = list(M.deg0)
    deg1 = list(M.deg1)
    phi = [list(r) for r in M.phi]
    psi = [list(r) for r in M.psi]
    changed = False
    while True:
        unit = None
        for i in range(len(deg0)):
            for j in range(len(deg1)):
                e = phi[i][j]
                if len(e) == 1 and (0, 0, 0, 0) in e:
                    unit = (i, j, e[(0, 0, 0, 0)])
                    break
            if unit:
                break
        if not unit:
            break
        changed = True
        i0, j0, u = unit
        inv_u = Fraction(1, 1) / u
        # clear column j0 of phi (rows i != i0), mirroring on psi columns
        for i in range(len(deg0)):
            if i != i0 and phi[i][j0]:
                g = poly.p_scale(phi[i][j0], inv_u)
                for j in range(len(deg1)):
                    phi[i][j] = poly.p_sub(phi[i][j], poly.p_mul(g, phi[i0][j]))
                for j in range(len(deg1)):
                    psi[j][i0] = poly.p_add(psi[j][i0], poly.p_mul(g, psi[j][i]))
        # clear row i0 of phi (cols j != j0), mirroring on psi rows
        for j in range(len(deg1)):
            if j != j0 and phi[i0][j]:
                h = poly.p_scale(phi[i0][j], inv_u)
                for i in range(len(deg0)):
                    phi[i][j] = poly.p_sub(phi[i][j], poly.p_mul(phi[i][j0], h))
                for i in range(len(deg0)):
                    psi[j0][i] = poly.p_add(psi[j0][i], poly.p_mul(h, psi[j][i]))
        del deg0[i0], deg1[j0]
        phi = [r[:j0] + r[j0 + 1:] for t, r in enumerate(phi) if t != i0]
        psi = [r[:i0] + r[i0 + 1:] for t, r in enumerate(psi) if t != j0]
    if not changed:
        return M, False
    return GradedMF(M.ctx, deg0, deg1, phi, psi, M.potential), True


def reduce_mf(M: GradedMF) -> GradedMF:
    """Minimal representative: strip unit entries of phi and of psi."""
    while True:
        M, c1 = _strip_phi_units(M)
        S, c2 = _strip_phi_units(suspend(M))
        if c2:
            M = suspend_inv(S)
        if not (c1 or c2):
            return M


# ---------------------------------------------------------------------------
# extension bundles and their calibration

def _gamma_kernel_dim(ctx, ell, y):
    """dim ker( (+)_i R_{2c-ell+l_i x_i - y} --(X_i^{p_i-l_i})--> R_{3c-ell-y} )."""
    ell_exps = ell.lam
    target = r_piece(3 * ctx.c - ell - y)
    sources = []
    for i in range(4):
        deg = 2 * ctx.c - ell + ell_exps[i] * ctx.gen(i + 1) - y
        sources.append(r_piece(deg))
    n_vars = sum(p.dim for p in sources)
    if n_vars == 0:
        return 0
    if target.dim == 0:
        return n_vars
    cols = []
    for i, piece in enumerate(sources):
        g = poly.variable_power(i + 1, ctx.weights[i] - ell_exps[i])
        for m in piece.monomials():
            cols.append(target.project_poly(poly.p_mul(g, poly.monomial(m))))
    rows = [[col[r] for col in cols] for r in range(target.dim)]
    return n_vars - linalg.rank_fraction(rows)


def _calibration_targets(ctx, ell, probes):
    """dim Hom(O(y), pi U^ell) forced by the four-term sheaf sequence."""
    return tuple(dim_R(-y) + _gamma_kernel_dim(ctx, ell, y) for y in probes)


@lru_cache(maxsize=None)
def extension_bundle_mf(ell: GLElement) -> GradedMF:
    """The calibrated factorization of the extension bundle for ell in [s, s+delta].

    The tensor factorization is pinned down by matching Hom(O(y), -) for
    probe line bundles against the values the four-term sequence forces;
    exactly one (suspension parity, twist) in the search window may match.
    """
    ctx = ell.ctx
    lo, hi = ctx.s, ctx.s + ctx.delta
    if ell.l != 0 or not (lo <= ell and ell <= hi):
        raise ValueError(f"{ell} is not in the slice interval")
    ell_exps = ell.lam
    base = None
    for i in range(4):
        u = poly.variable_power(i + 1, ell_exps[i])
        v = poly.variable_power(i + 1, ctx.weights[i] - ell_exps[i])
        k = koszul_mf(ctx, u, v)
        base = k if base is None else tensor(base, k)
    probes = (ctx.zero, ctx.gen(3), ctx.gen(4), ctx.c, ctx.s)
    targets = _calibration_targets(ctx, ell, probes)
    window = _twist_window(ctx)
    matches = []
    for parity in (0, 1):
        Mp = base if parity == 0 else suspend(base)
        for t in window:
            cand = twist(Mp, t)
            if all(from_free_dim(cand, -y) == want for y, want in zip(probes, targets)):
                matches.append((parity, t, cand))
    if len(matches) != 1:
        raise CalibrationFailed(
            f"extension bundle for {ell}: {len(matches)} twist candidates matched "
            f"targets {targets}")
    _, _, cand = matches[0]
    if to_free_dim(cand, ctx.zero) != 0:
        raise CalibrationFailed(f"calibrated bundle for {ell} has morphisms to the structure sheaf")
    return cand


def _twist_window(ctx):
    from itertools import product as iproduct
    out = []
    for lam in iproduct(*(range(p) for p in ctx.weights)):
        for l in (0, -1, 1, -2, 2):
            out.append(GLElement(lam, l, ctx))
    out.sort(key=lambda t: (abs(t.l), sum(t.lam), t.sort_key()))
    return out


# ---------------------------------------------------------------------------
# isomorphism testing (minimal representatives)

def mf_isomorphic(M: GradedMF, N: GradedMF) -> bool:
    """Graded isomorphism of cokernels of reduced factorizations.

    For minimal presentations a morphism is an isomorphism iff the constant
    part of its F0-matrix is invertible, so it suffices to find one Hom
    element with invertible constant block; random combinations of the
    basis hit the (open, dense when nonempty) invertible locus.
    """
    if sorted(d.raw() for d in M.deg0) != sorted(d.raw() for d in N.deg0):
        return False
    if M.size == 0:
        return True
    space = hom_space(M, N)
    if space.dim == 0:
        return False
    n = M.size
    rng = random.Random(11)
    trials = [[1 if t == k else 0 for t in range(space.dim)] for k in range(space.dim)]
    trials += [[rng.randint(-3, 3) for _ in range(space.dim)] for _ in range(25)]
    for coeffs in trials:
        if not any(coeffs):
            continue
        const = [[0] * n for _ in range(n)]
        for cf, mor in zip(coeffs, space.basis):
            if cf:
                for i in range(n):
                    for j in range(n):
                        const[i][j] += cf * mor.A[i][j].get((0, 0, 0, 0), 0)
        if linalg.rank_fraction(const) == n:
            return True
    return False
