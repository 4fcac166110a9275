"""Exact arithmetic in the grading group of a weighted projective hypersurface.

The group L is abelian on generators x1..x4 and c subject to the relations
p_i * x_i = c.  Every element is uniquely written in normal form

    lam_1*x1 + ... + lam_4*x4 + lam*c      with 0 <= lam_i < p_i,

obtained by Euclidean division coefficientwise with carries into the
c-coefficient.  The positive cone is the submonoid generated by the x_i (and
hence c); an element is >= 0 exactly when the c-coefficient of its normal
form is nonnegative, which makes the partial order a one-line test.

Distinguished elements: c (canonical), s = x1+x2+x3+x4, the dualizing
element w = c - s, and the interval span delta = 2c + 2w.  The slice
interval [s, s+delta] is a (p3-1) x (p4-1) grid under the restriction of the
group order when p1 = p2 = 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product

from .errors import InvariantViolation, NotAnUpset, NotFinite


@dataclass(frozen=True)
class GLElement:
    """Group element in normal form: lam = (lam_1..lam_4), l = c-coefficient."""

    lam: tuple[int, int, int, int]
    l: int
    ctx: "GLContext" = field(repr=False)

    def raw(self) -> tuple[int, int, int, int, int]:
        return (*self.lam, self.l)

    def __add__(self, other: "GLElement") -> "GLElement":
        return normalize([a + b for a, b in zip(self.raw(), other.raw())], self.ctx)

    def __sub__(self, other: "GLElement") -> "GLElement":
        return normalize([a - b for a, b in zip(self.raw(), other.raw())], self.ctx)

    def __neg__(self) -> "GLElement":
        return normalize([-a for a in self.raw()], self.ctx)

    def __mul__(self, n: int) -> "GLElement":
        return normalize([n * a for a in self.raw()], self.ctx)

    __rmul__ = __mul__

    def __le__(self, other: "GLElement") -> bool:
        return leq(self, other)

    def __ge__(self, other: "GLElement") -> bool:
        return leq(other, self)

    def sort_key(self):
        return (self.l, self.lam)

    def encode(self) -> str:
        """Canonical textual form "lam1,lam2,lam3,lam4;l"."""
        return ",".join(str(a) for a in self.lam) + ";" + str(self.l)

    def __str__(self):
        return self.encode()


class GLContext:
    """Weight configuration (p1,p2,p3,p4) with the derived elements.

    Group operations accept any p_i >= 2; the theorem-level pipelines
    additionally require p1 = p2 = 2, which is checked where it matters.
    Immutable after construction and safe to share between threads.
    """

    def __init__(self, weights):
        weights = tuple(int(p) for p in weights)
        if len(weights) != 4 or any(p < 2 for p in weights):
            raise ValueError(f"need four weights >= 2, got {weights!r}")
        self.weights = weights
        self.d = 2
        self.zero = GLElement((0, 0, 0, 0), 0, self)
        self.c = GLElement((0, 0, 0, 0), 1, self)
        self.s = GLElement((1, 1, 1, 1), 0, self)
        self.w = self.c - self.s
        self.delta = 2 * self.c + 2 * self.w
        p3, p4 = weights[2], weights[3]
        if self.delta != normalize([0, 0, p3 - 2, p4 - 2, 0], self):
            raise InvariantViolation("delta != (p3-2)x3 + (p4-2)x4")
        if self.w + self.s != self.c:
            raise InvariantViolation("w + s != c")

    def __eq__(self, other):
        return isinstance(other, GLContext) and self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return f"GLContext{self.weights}"

    def gen(self, i: int) -> GLElement:
        """The generator x_i, 1-based."""
        lam = [0, 0, 0, 0]
        lam[i - 1] = 1
        return GLElement(tuple(lam), 0, self)

    def element(self, lam, l: int) -> GLElement:
        return normalize([*lam, l], self)

    def decode(self, text: str) -> GLElement:
        """Parse the canonical encoding "lam1,lam2,lam3,lam4;l"."""
        head, _, tail = text.partition(";")
        lam = [int(v) for v in head.split(",")]
        if len(lam) != 4:
            raise ValueError(f"bad element encoding {text!r}")
        return self.element(lam, int(tail) if tail else 0)


def normalize(raw, ctx: GLContext) -> GLElement:
    """Unique normal form of raw coefficients (a1,a2,a3,a4,a_c)."""
    a1, a2, a3, a4, ac = raw
    lam = []
    carry = ac
    for a, p in zip((a1, a2, a3, a4), ctx.weights):
        lam.append(a % p)
        carry += a // p
    return GLElement(tuple(lam), carry, ctx)


def leq(x: GLElement, y: GLElement) -> bool:
    """x <= y iff y - x lies in the positive cone."""
    return (y - x).l >= 0


class Dichotomy(enum.Enum):
    NON_NEGATIVE = "non-negative"
    BELOW_DUALIZING_BOUND = "below-dualizing-bound"


def dichotomy(x: GLElement) -> Dichotomy:
    """Every element satisfies exactly one of x >= 0, x <= 2c + w."""
    ctx = x.ctx
    nonneg = x.l >= 0
    below = leq(x, 2 * ctx.c + ctx.w)
    if nonneg == below:
        raise InvariantViolation(f"dichotomy failed for {x}: >=0 is {nonneg}, bound is {below}")
    return Dichotomy.NON_NEGATIVE if nonneg else Dichotomy.BELOW_DUALIZING_BOUND


def interval(x: GLElement, y: GLElement) -> tuple[GLElement, ...]:
    """All z with x <= z <= y, sorted; empty when x !<= y.

    Any z in the interval has z - x >= 0 with c-coefficient at most that of
    y - x, so scanning normal forms in that box is exhaustive.
    """
    ctx = x.ctx
    e = y - x
    if e.l < 0:
        return ()
    out = []
    for lam in product(*(range(p) for p in ctx.weights)):
        for lu in range(e.l + 1):
            u = GLElement(lam, lu, ctx)
            if leq(u, e):
                out.append(x + u)
    out.sort(key=GLElement.sort_key)
    return tuple(out)


def slice_interval(ctx: GLContext) -> tuple[GLElement, ...]:
    """The interval [s, s+delta] indexing the extension bundles."""
    return interval(ctx.s, ctx.s + ctx.delta)


def grid_coords(z: GLElement) -> tuple[int, int]:
    """Coordinates (a, b) of z = s + a*x3 + b*x4 inside the slice interval."""
    u = z - z.ctx.s
    if u.lam[0] or u.lam[1] or u.l:
        raise ValueError(f"{z} is not in the slice interval")
    return (u.lam[2], u.lam[3])


def is_upset(subset, ctx: GLContext) -> bool:
    """(J + L_+) meets the slice interval inside J."""
    box = slice_interval(ctx)
    sub = set(subset)
    return all(z in sub for j in sub for z in box if leq(j, z))


def enumerate_upsets(ctx: GLContext) -> tuple[frozenset, ...]:
    """All upsets of the slice interval.

    The interval is a grid in x3, x4; an upset is determined by, per
    x3-column, the least x4-row it contains, and those thresholds are
    non-increasing along x3.  Enumerating threshold vectors is the
    column-by-column dynamic programming specialized to a grid.
    """
    p3, p4 = ctx.weights[2], ctx.weights[3]
    na, nb = p3 - 1, p4 - 1
    x3, x4 = ctx.gen(3), ctx.gen(4)
    upsets = []

    def extend(col, prev_threshold, chosen):
        if col == na:
            upsets.append(frozenset(chosen))
            return
        for t in range(prev_threshold + 1):  # nb means empty column
            cells = [ctx.s + col * x3 + b * x4 for b in range(t, nb)]
            extend(col + 1, t, chosen + cells)

    extend(0, nb, [])
    upsets.sort(key=lambda j: (len(j), sorted(z.sort_key() for z in j)))
    return tuple(upsets)


def in_S(x: GLElement) -> bool:
    """Membership in the line-bundle index set S.

    The condition is 0 < 2*lam + #{i : lam_i >= 1} <= #{i in {3,4} :
    lam_i in {0,1}} on the normal form.
    """
    lhs = 2 * x.l + sum(1 for a in x.lam if a >= 1)
    rhs = sum(1 for a in x.lam[2:] if a in (0, 1))
    return 0 < lhs <= rhs


def enumerate_S(ctx: GLContext) -> tuple[GLElement, ...]:
    """The finite set S, sorted.

    The two bounds in the membership condition force the c-coefficient into
    {-1, 0, 1}, so the scan over normal forms is exhaustive.
    """
    out = []
    for lam in product(*(range(p) for p in ctx.weights)):
        for l in (-1, 0, 1):
            x = GLElement(lam, l, ctx)
            if in_S(x):
                out.append(x)
    out.sort(key=GLElement.sort_key)
    return tuple(out)


def degree_index(x: GLElement) -> int:
    """Image of x under the homomorphism L -> Z killing exactly the torsion."""
    P = 1
    for p in x.ctx.weights:
        P *= p
    return x.l * P + sum(a * (P // p) for a, p in zip(x.lam, x.ctx.weights))


def _smith_normal_form(mat):
    """Smith normal form over Z: returns (diag, V) with U*M*V diagonal.

    Only the column transform V is tracked; row operations do not affect
    coset representatives.
    """
    m = [list(r) for r in mat]
    nr = len(m)
    nc = len(m[0]) if m else 0
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
    diag = []

    def col_op(j, k, f):
        for r in m:
            r[j] += f * r[k]
        for r in V:
            r[j] += f * r[k]

    def col_swap(j, k):
        for r in m:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot in the remaining block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j]:
                    if piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        i, j = piv
        m[t], m[i] = m[i], m[t]
        if j != t:
            col_swap(t, j)
        while True:
            # clear row t and column t
            changed = False
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    col_op(j, t, -q)
                    if m[t][j]:
                        col_swap(t, j)
                        changed = True
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        changed = True
            if not changed:
                break
        diag.append(abs(m[t][t]))
        t += 1
    # divisibility chain is not needed for coset reduction; orders multiply
    return diag, V


class QuotientStructure:
    """The quotient L/<gen> with canonical coset representatives."""

    def __init__(self, ctx: GLContext, gen: GLElement):
        if degree_index(gen) == 0:
            raise InvariantViolation(f"{gen} has finite order in L")
        rows = []
        for i in range(4):
            row = [0, 0, 0, 0, -1]
            row[i] = ctx.weights[i]
            rows.append(row)
        rows.append(list(gen.raw()))
        self.diag, self.V = _smith_normal_form(rows)
        self.rank = len([d for d in self.diag if d])

    def class_of(self, x: GLElement):
        coords = x.raw()
        # y = x * V in the transformed basis; reduce modulo the diagonal
        y = [sum(coords[i] * self.V[i][j] for i in range(5)) for j in range(5)]
        out = []
        for j in range(5):
            d = self.diag[j] if j < len(self.diag) else 0
            out.append(y[j] % d if d else y[j])
        return tuple(out)

    def order(self) -> int:
        if self.rank < 5 or any(d == 0 for d in self.diag):
            raise NotFinite("quotient is infinite")
        n = 1
        for d in self.diag:
            n *= d
        return n


def quotient_class(x: GLElement, gen: GLElement):
    """Canonical representative of x in L/<gen> (stable under adding gen)."""
    return _quotient_structure(x.ctx, gen).class_of(x)


def quotient_order(gen: GLElement) -> int:
    """Order of L/<gen>; raises NotFinite when infinite."""
    return _quotient_structure(gen.ctx, gen).order()


_QUOTIENT_CACHE: dict = {}


def _quotient_structure(ctx, gen):
    key = (ctx.weights, gen.raw())
    q = _QUOTIENT_CACHE.get(key)
    if q is None:
        q = _QUOTIENT_CACHE[key] = QuotientStructure(ctx, gen)
    return q


def check_upset(subset, ctx: GLContext):
    if not is_upset(subset, ctx):
        raise NotAnUpset(f"{sorted(z.encode() for z in subset)} is not an upset of the slice interval")
