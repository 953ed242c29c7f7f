# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels for prime fields (kind 0) and GF(2^m) (kind 1).

Same contracts as coopstore._purekern: exact Gaussian elimination with
first-nonzero pivoting on flat row-major int matrices.  Prime moduli are
limited to < 2^31 so products fit in 64 bits; binary fields to m <= 24.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64


cdef u64 pow_mod(u64 a, u64 e, u64 p) noexcept:
    cdef u64 r = 1
    a %= p
    while e:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


cdef u64 gf2_mul(u64 a, u64 b, int m, u64 poly) noexcept:
    cdef u64 r = 0
    cdef u64 top = (<u64> 1) << m
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        if a & top:
            a ^= poly
        b >>= 1
    return r


cdef u64 gf2_pow(u64 a, u64 e, int m, u64 poly) noexcept:
    cdef u64 r = 1
    while e:
        if e & 1:
            r = gf2_mul(r, a, m, poly)
        a = gf2_mul(a, a, m, poly)
        e >>= 1
    return r


cdef inline u64 f_mul(u64 a, u64 b, int kind, int m, u64 mod) noexcept:
    if kind == 0:
        return (a * b) % mod
    return gf2_mul(a, b, m, mod)


cdef inline u64 f_sub(u64 a, u64 b, int kind, u64 mod) noexcept:
    if kind == 0:
        return (a + mod - b) % mod
    return a ^ b


cdef inline u64 f_inv(u64 a, int kind, int m, u64 mod) noexcept:
    if kind == 0:
        return pow_mod(a, mod - 2, mod)
    return gf2_pow(a, (((<u64> 1) << m) - 2), m, mod)


def rank(data, int nrows, int ncols, int kind, int m, u64 mod):
    """Rank of a flat row-major matrix."""
    cdef int n_entries = nrows * ncols
    cdef u64 *buf = <u64 *> malloc(n_entries * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    cdef int i, col, row, c, piv, r
    cdef u64 pinv, f, v
    try:
        for i in range(n_entries):
            buf[i] = data[i]
        r = 0
        for col in range(ncols):
            piv = -1
            for row in range(r, nrows):
                if buf[row * ncols + col]:
                    piv = row
                    break
            if piv < 0:
                continue
            if piv != r:
                for c in range(col, ncols):
                    v = buf[r * ncols + c]
                    buf[r * ncols + c] = buf[piv * ncols + c]
                    buf[piv * ncols + c] = v
            pinv = f_inv(buf[r * ncols + col], kind, m, mod)
            for row in range(r + 1, nrows):
                f = buf[row * ncols + col]
                if f:
                    f = f_mul(f, pinv, kind, m, mod)
                    buf[row * ncols + col] = 0
                    for c in range(col + 1, ncols):
                        v = buf[r * ncols + c]
                        if v:
                            buf[row * ncols + c] = f_sub(
                                buf[row * ncols + c], f_mul(f, v, kind, m, mod), kind, mod
                            )
            r += 1
            if r == nrows:
                break
        return r
    finally:
        free(buf)


def solve(a_data, int n, b_data, int bcols, int kind, int m, u64 mod):
    """Solve A X = B for square A; returns flat X or None when singular."""
    cdef int w = n + bcols
    cdef u64 *buf = <u64 *> malloc(n * w * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    cdef int i, j, col, row, c, piv
    cdef u64 pinv, f, v
    try:
        for i in range(n):
            for j in range(n):
                buf[i * w + j] = a_data[i * n + j]
            for j in range(bcols):
                buf[i * w + n + j] = b_data[i * bcols + j]
        for col in range(n):
            piv = -1
            for row in range(col, n):
                if buf[row * w + col]:
                    piv = row
                    break
            if piv < 0:
                return None
            if piv != col:
                for c in range(col, w):
                    v = buf[col * w + c]
                    buf[col * w + c] = buf[piv * w + c]
                    buf[piv * w + c] = v
            pinv = f_inv(buf[col * w + col], kind, m, mod)
            for c in range(col, w):
                v = buf[col * w + c]
                if v:
                    buf[col * w + c] = f_mul(v, pinv, kind, m, mod)
            for row in range(n):
                if row == col:
                    continue
                f = buf[row * w + col]
                if f:
                    buf[row * w + col] = 0
                    for c in range(col + 1, w):
                        v = buf[col * w + c]
                        if v:
                            buf[row * w + c] = f_sub(
                                buf[row * w + c], f_mul(f, v, kind, m, mod), kind, mod
                            )
        out = [0] * (n * bcols)
        for i in range(n):
            for j in range(bcols):
                out[i * bcols + j] = buf[i * w + n + j]
        return out
    finally:
        free(buf)
