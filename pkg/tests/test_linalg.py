import random
from fractions import Fraction

import pytest

from gltilt import _linalg_py, linalg


def fraction_gauss_rank(rows):
    """Independent oracle: plain Gaussian elimination over Q."""
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        m[rank] = [v / pv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("seed", range(8))
def test_rank_matches_fraction_oracle(seed):
    rng = random.Random(seed)
    nr, nc = rng.randint(1, 12), rng.randint(1, 12)
    rows = [[rng.choice([0, 0, 0, 1, -1, 2, -3]) for _ in range(nc)] for _ in range(nr)]
    expected = fraction_gauss_rank(rows)
    assert linalg.rank_int(rows) == expected
    assert _linalg_py.rank_int(rows) == expected


def test_rank_pure_and_compiled_agree_on_structured():
    rng = random.Random(42)
    for _ in range(20):
        nr, nc = rng.randint(1, 20), rng.randint(1, 20)
        rows = [[rng.choice([0] * 6 + [1, -1]) for _ in range(nc)] for _ in range(nr)]
        assert linalg.rank_int(rows) == fraction_gauss_rank(rows)


def test_rank_big_entries_falls_back():
    big = 10 ** 30
    rows = [[big, 0], [0, big], [big, big]]
    assert linalg.rank_int(rows) == 2


def test_rank_edge_cases():
    assert linalg.rank_int([]) == 0
    assert linalg.rank_int([[0, 0], [0, 0]]) == 0
    assert linalg.rank_int([[5]]) == 1


def test_nullspace_vectors_annihilate():
    rng = random.Random(7)
    rows = [[rng.randint(-2, 2) for _ in range(6)] for _ in range(4)]
    basis = linalg.nullspace(rows, 6)
    assert len(basis) == 6 - fraction_gauss_rank(rows)
    for v in basis:
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) == 0


def test_left_kernel():
    rows = [[1, 2], [2, 4], [0, 1]]
    basis = linalg.left_kernel(rows, 3, 2)
    assert len(basis) == 1
    w = basis[0]
    for j in range(2):
        assert sum(w[i] * rows[i][j] for i in range(3)) == 0


def test_solve_in_span():
    basis = [(1, 0, 1), (0, 1, 1)]
    coeffs = linalg.solve_in_span(basis, (2, 3, 5), 3)
    assert coeffs == [2, 3]
    assert linalg.solve_in_span(basis, (0, 0, 1), 3) is None


def test_subspace_reduce_and_contains():
    sub = linalg.Subspace([(1, 1, 0), (0, 0, 2)], 3)
    assert sub.contains((3, 3, 4))
    assert not sub.contains((1, 0, 0))
    assert sub.rank == 2
