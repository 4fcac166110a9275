"""Exact linear algebra facade.

Ranks of integer matrices are the hot kernel of the whole workbench (every
Hom/Ext dimension reduces to them).  The compiled Bareiss kernel is used when
the extension built and the matrix fits int64; otherwise the pure-Python
fallback runs.  Set GLTILT_PURE=1 to force the fallback.

On top of the rank kernel sit small Fraction-based routines (reduced row
echelon, nullspaces, span tests) used on the cold paths where an explicit
basis is needed rather than a dimension.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import gcd, lcm

from . import _linalg_py

try:
    from . import _linalg_cy as _compiled
except ImportError:  # pragma: no cover - depends on build host
    _compiled = None

if os.environ.get("GLTILT_PURE"):
    _compiled = None

HAVE_COMPILED = _compiled is not None

if HAVE_COMPILED:
    import numpy as np


def rank_int(rows) -> int:
    """Rank over Q of an integer matrix (list of row lists)."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    if _compiled is not None:
        try:
            m = np.array(rows, dtype=np.int64)
        except OverflowError:
            return _linalg_py.rank_int(rows)
        try:
            return _compiled.rank_int64(m)
        except OverflowError:
            pass
    return _linalg_py.rank_int(rows)


def rank_fraction(rows) -> int:
    """Rank of a matrix with Fraction/int entries."""
    return rank_int([_int_row(r) for r in rows])


def _int_row(row):
    mult = lcm(*(Fraction(v).denominator for v in row)) if row else 1
    ints = [int(v * mult) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def rref(rows, ncols):
    """Reduced row echelon form over Q.

    Returns (rows, pivot_cols); rows are tuples of Fractions, zero rows
    dropped.
    """
    m = [[Fraction(v) for v in r] for r in rows if any(r)]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        if pv != 1:
            m[rank] = [v / pv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(m):
            break
    return [tuple(r) for r in m[:rank]], pivots


def nullspace(rows, ncols):
    """Basis of the right kernel over Q, as integer tuples (primitive)."""
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in zip(red, pivots):
            vec[pc] = -r[fc]
        basis.append(_primitive(vec))
    return basis


def left_kernel(rows, nrows, ncols):
    """Integer basis of the left kernel (row vectors w with w*M = 0)."""
    transposed = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    return nullspace(transposed, nrows)


def _primitive(vec):
    mult = lcm(*(v.denominator for v in vec)) if vec else 1
    ints = [int(v * mult) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


class Subspace:
    """Row space of a set of vectors over Q, with membership and quotients.

    Used to canonicalize morphism representatives: vectors are reduced
    against the subspace rows, and quotient coordinates are read off the
    complement of the pivot set.
    """

    def __init__(self, vectors, dim):
        self.dim = dim
        self.rows, self.pivots = rref(vectors, dim) if vectors else ([], [])

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        v = [Fraction(x) for x in vec]
        for r, pc in zip(self.rows, self.pivots):
            f = v[pc]
            if f:
                v = [a - f * b for a, b in zip(v, r)]
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))


def solve_in_span(basis, target, dim):
    """Coefficients expressing target in the span of basis, or None.

    basis is a list of length-``dim`` vectors; returns a list of Fractions.
    """
    if not basis:
        return None if any(target) else []
    aug = [[Fraction(basis[k][j]) for k in range(len(basis))] + [Fraction(target[j])]
           for j in range(dim)]
    red, pivots = rref(aug, len(basis) + 1)
    if len(basis) in pivots:
        return None
    coeffs = [Fraction(0)] * len(basis)
    for r, pc in zip(red, pivots):
        coeffs[pc] = r[-1]
    return coeffs
