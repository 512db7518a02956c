# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled integer kernels with an int64 fast path.

Inputs are copied into int64 buffers; every product and sum is checked with
the compiler's overflow builtins. Any input that does not fit, or any
intermediate that would overflow, is recomputed by the pure-Python kernel,
so results are always exact.
"""
from array import array

from . import _pykernels as _py

cdef extern from *:
    bint add_ovf "__builtin_add_overflow"(long long a, long long b, long long *r) nogil
    bint mul_ovf "__builtin_mul_overflow"(long long a, long long b, long long *r) nogil


cdef inline int _fma(long long acc, long long a, long long b, long long *out) nogil:
    cdef long long prod
    if mul_ovf(a, b, &prod):
        return 1
    if add_ovf(acc, prod, out):
        return 1
    return 0


cdef object _flat(rows, Py_ssize_t *nrows, Py_ssize_t *ncols):
    rows = [tuple(r) for r in rows]
    nrows[0] = len(rows)
    ncols[0] = len(rows[0]) if rows else 0
    buf = array("q")
    for r in rows:
        if len(r) != ncols[0]:
            raise ValueError("ragged matrix")
        buf.extend(r)
    return buf


cdef int _matmul_into(const long long[::1] a, const long long[::1] b, long long[::1] out,
                      Py_ssize_t m, Py_ssize_t k, Py_ssize_t p) nogil:
    cdef Py_ssize_t i, j, t
    cdef long long acc, aik
    for i in range(m):
        for j in range(p):
            out[i * p + j] = 0
        for t in range(k):
            aik = a[i * k + t]
            if aik == 0:
                continue
            for j in range(p):
                if _fma(out[i * p + j], aik, b[t * p + j], &acc):
                    return 1
                out[i * p + j] = acc
    return 0


def matvec(m, x):
    cdef Py_ssize_t rows, cols, i, j
    cdef long long acc
    try:
        mbuf = _flat(m, &rows, &cols)
        xbuf = array("q", x)
    except OverflowError:
        return _py.matvec(m, x)
    if len(xbuf) != cols:
        raise ValueError("dimension mismatch")
    cdef const long long[::1] mv = mbuf
    cdef const long long[::1] xv = xbuf
    out = array("q", bytes(8 * rows))
    cdef long long[::1] ov = out
    for i in range(rows):
        acc = 0
        for j in range(cols):
            if _fma(acc, mv[i * cols + j], xv[j], &acc):
                return _py.matvec(m, x)
        ov[i] = acc
    return tuple(out)


def matmul(a, b):
    cdef Py_ssize_t m, k, k2, p
    try:
        abuf = _flat(a, &m, &k)
        bbuf = _flat(b, &k2, &p)
    except OverflowError:
        return _py.matmul(a, b)
    if k != k2:
        raise ValueError("dimension mismatch")
    out = array("q", bytes(8 * m * p))
    if _matmul_into(abuf, bbuf, out, m, k, p):
        return _py.matmul(a, b)
    return tuple(tuple(out[i * p:(i + 1) * p]) for i in range(m))


def bilinear(gram, x, y):
    cdef Py_ssize_t rows, cols, i, j
    cdef long long acc, inner, xi
    try:
        gbuf = _flat(gram, &rows, &cols)
        xbuf = array("q", x)
        ybuf = array("q", y)
    except OverflowError:
        return _py.bilinear(gram, x, y)
    if len(xbuf) != rows or len(ybuf) != cols:
        raise ValueError("dimension mismatch")
    cdef const long long[::1] gv = gbuf
    cdef const long long[::1] xv = xbuf
    cdef const long long[::1] yv = ybuf
    acc = 0
    for i in range(rows):
        xi = xv[i]
        if xi == 0:
            continue
        inner = 0
        for j in range(cols):
            if _fma(inner, gv[i * cols + j], yv[j], &inner):
                return _py.bilinear(gram, x, y)
        if _fma(acc, xi, inner, &acc):
            return _py.bilinear(gram, x, y)
    return acc


def is_isometry(m, gram):
    cdef Py_ssize_t n, n2, g1, g2, i, j, t
    cdef long long acc
    try:
        mbuf = _flat(m, &n, &n2)
        gbuf = _flat(gram, &g1, &g2)
    except OverflowError:
        return _py.is_isometry(m, gram)
    if not (n == n2 == g1 == g2):
        raise ValueError("dimension mismatch")
    cdef const long long[::1] mv = mbuf
    cdef const long long[::1] gv = gbuf
    gm = array("q", bytes(8 * n * n))
    cdef long long[::1] gmv = gm
    if _matmul_into(gv, mv, gmv, n, n, n):
        return _py.is_isometry(m, gram)
    # (M^T G M)[i][j] = sum_t M[t][i] * (GM)[t][j]
    for i in range(n):
        for j in range(n):
            acc = 0
            for t in range(n):
                if _fma(acc, mv[t * n + i], gmv[t * n + j], &acc):
                    return _py.is_isometry(m, gram)
            if acc != gv[i * n + j]:
                return False
    return True
