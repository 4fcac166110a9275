import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gltilt.errors import InvariantViolation, NotAnUpset
from gltilt.glgroup import (Dichotomy, GLContext, check_upset, degree_index,
                            dichotomy, enumerate_S, enumerate_upsets,
                            grid_coords, in_S, interval, is_upset, leq,
                            normalize, quotient_class, quotient_order,
                            slice_interval)

C2234 = GLContext((2, 2, 3, 4))
C2224 = GLContext((2, 2, 2, 4))
C2233 = GLContext((2, 2, 3, 3))


def equivalent_raw(u, v, weights):
    """Oracle: u ~ v iff u - v lies in the relation lattice p_i e_i - e_c."""
    d = [a - b for a, b in zip(u, v)]
    coeffs = []
    for di, p in zip(d[:4], weights):
        if di % p:
            return False
        coeffs.append(di // p)
    return d[4] == -sum(coeffs)


def normal_form_by_search(raw, ctx):
    """Oracle: scan the normal-form box for the unique equivalent element."""
    hits = []
    for lam in product(*(range(p) for p in ctx.weights)):
        for l in range(-8, 9):
            if equivalent_raw(raw, (*lam, l), ctx.weights):
                hits.append((lam, l))
    assert len(hits) == 1
    return hits[0]


@pytest.mark.parametrize("ctx,expected", [
    (C2224, ((1, 1, 1, 3), -3)),
    (C2233, ((1, 1, 2, 2), -3)),
])
def test_dualizing_element_normal_form(ctx, expected):
    w = ctx.w
    assert (w.lam, w.l) == expected
    assert normal_form_by_search((-1, -1, -1, -1, 1), ctx) == expected


def test_normalize_zero():
    z = normalize([0, 0, 0, 0, 0], C2233)
    assert z == C2233.zero and z.lam == (0, 0, 0, 0) and z.l == 0


@given(st.lists(st.integers(-30, 30), min_size=5, max_size=5))
def test_normalize_matches_oracle(raw):
    x = normalize(raw, C2233)
    assert equivalent_raw(tuple(raw), x.raw(), C2233.weights)
    assert all(0 <= a < p for a, p in zip(x.lam, C2233.weights))


@given(st.lists(st.integers(-20, 20), min_size=5, max_size=5),
       st.lists(st.integers(-20, 20), min_size=5, max_size=5))
def test_add_sub_round_trip(raw_x, raw_y):
    x, y = normalize(raw_x, C2234), normalize(raw_y, C2234)
    assert (x + y) - y == x
    assert normalize(normalize(raw_x, C2234).raw(), C2234) == x


def test_context_invariants():
    for ctx in (C2224, C2233, C2234):
        assert ctx.w + ctx.s == ctx.c
        p3, p4 = ctx.weights[2:]
        assert ctx.delta == ctx.element([0, 0, p3 - 2, p4 - 2], 0)
    with pytest.raises(ValueError):
        GLContext((1, 2, 3, 4))


def test_leq_examples():
    assert leq(C2233.s, C2233.s + C2233.delta)
    assert not leq(C2233.zero, C2233.w)
    x4 = C2233.gen(4)
    assert leq(C2233.zero, x4)
    assert not leq(x4, 2 * C2233.c + C2233.w)


def test_dichotomy_examples():
    assert dichotomy(C2233.zero) is Dichotomy.NON_NEGATIVE
    assert dichotomy(C2233.c) is Dichotomy.NON_NEGATIVE
    assert dichotomy(C2233.w) is Dichotomy.BELOW_DUALIZING_BOUND


@given(st.lists(st.integers(-25, 25), min_size=5, max_size=5))
def test_dichotomy_exclusive(raw):
    # raises InvariantViolation if both or neither branch held
    dichotomy(normalize(raw, C2234))


@settings(max_examples=50)
@given(st.tuples(*[st.lists(st.integers(-10, 10), min_size=5, max_size=5)] * 3))
def test_order_transitive(raws):
    x, y, z = (normalize(r, C2233) for r in raws)
    if leq(x, y) and leq(y, z):
        assert leq(x, z)


def test_interval_examples():
    x4 = C2224.gen(4)
    assert slice_interval(C2224) == (C2224.s, C2224.s + x4, C2224.s + 2 * x4)
    assert len(slice_interval(C2233)) == 4
    assert interval(C2233.s, C2233.s) == (C2233.s,)
    assert interval(C2233.c, C2233.zero) == ()


def test_grid_coords():
    x3, x4 = C2233.gen(3), C2233.gen(4)
    assert grid_coords(C2233.s + x3) == (1, 0)
    assert grid_coords(C2233.s + x3 + x4) == (1, 1)


def brute_force_upsets(ctx):
    box = slice_interval(ctx)
    out = set()
    for bits in product([0, 1], repeat=len(box)):
        sub = frozenset(z for z, b in zip(box, bits) if b)
        if all(z in sub for j in sub for z in box if leq(j, z)):
            out.add(sub)
    return out


@pytest.mark.parametrize("ctx,count", [(C2224, 4), (C2233, 6), (C2234, 10)])
def test_enumerate_upsets_matches_brute_force(ctx, count):
    ups = enumerate_upsets(ctx)
    assert len(ups) == count
    assert set(ups) == brute_force_upsets(ctx)
    assert frozenset() in ups and frozenset(slice_interval(ctx)) in ups
    for j in ups:
        assert is_upset(j, ctx)


def test_check_upset_raises():
    with pytest.raises(NotAnUpset):
        check_upset({C2233.s}, C2233)


def test_in_S_examples():
    assert not in_S(C2233.zero)
    for ctx in (C2224, C2233, C2234):
        assert in_S(ctx.c)
        assert in_S(ctx.s - ctx.c)  # equals -w


def test_S_finiteness_window():
    # membership forces the c-coefficient into {-1, 0, 1}
    for lam in product(*(range(p) for p in C2233.weights)):
        for l in range(-6, 7):
            if abs(l) >= 2:
                assert not in_S(C2233.element(lam, l))


def example_S_2224():
    """S for (2,2,2,4) per direct enumeration: H + {0, t12, t13, t23}."""
    ctx = C2224
    x1, x2, x3, x4 = (ctx.gen(i) for i in (1, 2, 3, 4))
    H = [x3, x3 + x4, x4, 2 * x4, 3 * x4, ctx.c]
    offsets = [ctx.zero, x1 - x2, x1 - x3, x2 - x3]
    return {h + t for h in H for t in offsets}


def test_enumerate_S_2224_matches_derived_set():
    S = set(enumerate_S(C2224))
    x3, x4 = C2224.gen(3), C2224.gen(4)
    assert x3 + x4 in S and C2224.c in S
    assert S == example_S_2224()
    assert len(S) == 24


@pytest.mark.parametrize("ctx", [C2224, C2233, C2234, GLContext((2, 2, 2, 2))])
def test_S_size_and_transversal(ctx):
    S = enumerate_S(ctx)
    p, q = ctx.weights[2:]
    assert len(S) == 4 * (p + q)
    assert quotient_order(ctx.w) == len(S)
    classes = {quotient_class(x, ctx.w) for x in S}
    assert len(classes) == len(S)


def test_quotient_order_of_canonical():
    for ctx in (C2224, C2233, C2234):
        p1, p2, p3, p4 = ctx.weights
        assert quotient_order(ctx.c) == p1 * p2 * p3 * p4


def test_quotient_class_stability():
    x = C2233.element([1, 0, 2, 1], 5)
    assert quotient_class(x + C2233.w, C2233.w) == quotient_class(x, C2233.w)
    assert quotient_class(x + 3 * C2233.c, C2233.c) == quotient_class(x, C2233.c)


def test_quotient_requires_infinite_order():
    torsion = C2233.gen(3) - C2233.gen(4)  # has finite order
    assert degree_index(torsion) == 0
    with pytest.raises(InvariantViolation):
        quotient_order(torsion)


@pytest.mark.parametrize("ctx", [C2224, C2233, C2234])
def test_lw_coefficient_closed_form(ctx):
    for ell in range(0, 30):
        lw = ell * ctx.w
        assert lw.l == ell - sum(-(-ell // p) for p in ctx.weights)


def test_encode_decode():
    x = C2233.element([1, 0, 2, 1], -4)
    assert x.encode() == "1,0,2,1;-4"
    assert C2233.decode(x.encode()) == x
    rng = random.Random(0)
    for _ in range(50):
        y = normalize([rng.randint(-9, 9) for _ in range(5)], C2234)
        assert C2234.decode(y.encode()) == y
