# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rank of an integer matrix modulo a prime below 2**31."""


cdef long long _inverse(long long a, long long p):
    cdef long long t = 0, new_t = 1, r = p, new_r = a, q, tmp
    while new_r != 0:
        q = r // new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += p
    return t


def rank_mod_p(long long[::1] data, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    """Rank of the row-major ``nrows x ncols`` matrix in ``data`` over GF(p).

    ``data`` is overwritten.  Entries may be any int64; they are reduced first.
    """
    cdef Py_ssize_t i, j, r = 0, c, piv
    cdef long long inv, f, x
    for i in range(nrows * ncols):
        x = data[i] % p
        if x < 0:
            x += p
        data[i] = x
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if data[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                x = data[piv * ncols + j]
                data[piv * ncols + j] = data[r * ncols + j]
                data[r * ncols + j] = x
        inv = _inverse(data[r * ncols + c], p)
        for j in range(c, ncols):
            data[r * ncols + j] = data[r * ncols + j] * inv % p
        for i in range(r + 1, nrows):
            f = data[i * ncols + c]
            if f == 0:
                continue
            for j in range(c, ncols):
                x = data[r * ncols + j]
                if x:
                    data[i * ncols + j] = (data[i * ncols + j] - f * x) % p
                    if data[i * ncols + j] < 0:
                        data[i * ncols + j] += p
        r += 1
    return r
