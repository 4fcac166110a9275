"""Sparse polynomials in k[X1..X4] graded by the group L.

A polynomial is a dict mapping exponent tuples (m1,m2,m3,m4) to nonzero
rational coefficients (int or Fraction).  The L-degree of a monomial is
sum(m_i * x_i); homogeneity is always with respect to that grading.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeMismatch
from .glgroup import GLContext, GLElement, normalize

ZERO: dict = {}


def monomial(exps, coeff=1) -> dict:
    if not coeff:
        return {}
    return {tuple(exps): coeff}


def variable_power(i: int, e: int, coeff=1) -> dict:
    """coeff * X_i ** e (i is 1-based)."""
    exps = [0, 0, 0, 0]
    exps[i - 1] = e
    return monomial(exps, coeff)


def potential(ctx: GLContext) -> dict:
    """The defining hypersurface polynomial X1^p1 + X2^p2 + X3^p3 + X4^p4."""
    out: dict = {}
    for i, p in enumerate(ctx.weights, start=1):
        out.update(variable_power(i, p))
    return out


def mono_degree(m, ctx: GLContext) -> GLElement:
    return normalize([*m, 0], ctx)


def p_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, cf in b.items():
        v = out.get(m, 0) + cf
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def p_neg(a: dict) -> dict:
    return {m: -cf for m, cf in a.items()}


def p_sub(a: dict, b: dict) -> dict:
    return p_add(a, p_neg(b))


def p_scale(a: dict, f) -> dict:
    if not f:
        return {}
    return {m: cf * f for m, cf in a.items()}


def p_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3])
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def is_zero(a: dict) -> bool:
    return not a


def degree_of(a: dict, ctx: GLContext) -> GLElement | None:
    """L-degree of a homogeneous polynomial (None for 0)."""
    if not a:
        return None
    degs = {mono_degree(m, ctx) for m in a}
    if len(degs) > 1:
        raise DegreeMismatch(f"polynomial {a!r} is not homogeneous")
    return next(iter(degs))


def check_homogeneous(a: dict, deg: GLElement, ctx: GLContext):
    d = degree_of(a, ctx)
    if d is not None and d != deg:
        raise DegreeMismatch(f"entry has degree {d}, expected {deg}")


def freeze(a: dict) -> tuple:
    """Hashable canonical form, for cache keys."""
    return tuple(sorted((m, Fraction(cf)) for m, cf in a.items()))


def p_eq(a: dict, b: dict) -> bool:
    return is_zero(p_sub(a, b))
