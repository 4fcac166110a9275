# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Bareiss elimination over int64.

Raises OverflowError as soon as an intermediate minor leaves the int64 range;
the caller then redoes the computation with Python integers.
"""

cdef extern from *:
    ctypedef long long int128 "__int128"

cdef long long INT64_MAX = 0x7FFFFFFFFFFFFFFF


def rank_int64(long long[:, ::1] m):
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t rank = 0, i, j, pi, pj, k
    cdef long long prev = 1, p, f, v, a, best
    cdef int128 t
    if nrows == 0 or ncols == 0:
        return 0
    while rank < nrows:
        best = 0
        pi = -1
        pj = -1
        for i in range(rank, nrows):
            for j in range(ncols):
                v = m[i, j]
                if v != 0:
                    a = -v if v < 0 else v
                    if pi < 0 or a < best:
                        best = a
                        pi = i
                        pj = j
                        if a == 1:
                            break
            if best == 1:
                break
        if pi < 0:
            break
        if pi != rank:
            for k in range(ncols):
                v = m[pi, k]
                m[pi, k] = m[rank, k]
                m[rank, k] = v
        p = m[rank, pj]
        for i in range(rank + 1, nrows):
            f = m[i, pj]
            for j in range(ncols):
                t = <int128> p * <int128> m[i, j] - <int128> f * <int128> m[rank, j]
                t = t / prev
                if t > INT64_MAX or t < -INT64_MAX:
                    raise OverflowError("Bareiss minor exceeds int64")
                m[i, j] = <long long> t
        prev = p
        rank += 1
    return rank
