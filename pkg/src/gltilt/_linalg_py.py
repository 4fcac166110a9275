"""Fraction-free exact elimination over the integers, pure-Python fallback.

Bareiss elimination keeps every intermediate entry an exact minor of the
input, so ranks are exact over Q while all arithmetic stays in (arbitrary
precision) integers.  This is the reference implementation; the compiled
kernel in ``_linalg_cy`` mirrors it with int64 arithmetic and falls back here
on overflow.
"""


def rank_int(rows):
    """Rank over Q of an integer matrix given as a list of row lists."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    nrows = len(m)
    prev = 1
    rank = 0
    while rank < nrows:
        # pivot: smallest |value| among nonzero entries of the active block
        best = None
        for i in range(rank, nrows):
            ri = m[i]
            for j in range(ncols):
                v = ri[j]
                if v:
                    a = -v if v < 0 else v
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != rank:
            m[pi], m[rank] = m[rank], m[pi]
        piv_row = m[rank]
        p = piv_row[pj]
        for i in range(rank + 1, nrows):
            ri = m[i]
            f = ri[pj]
            if f:
                m[i] = [(p * ri[j] - f * piv_row[j]) // prev for j in range(ncols)]
            elif prev != 1:
                m[i] = [(p * ri[j]) // prev for j in range(ncols)]
            else:
                m[i] = [p * v for v in ri]
        prev = p
        rank += 1
    return rank
