# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""C implementations of the inner loops. See _pykernels for the reference versions."""
import numpy as np

from libc.stdlib cimport llabs

DEF SINGULAR = -32768


def batch_traces(long long p, const long long[::1] a, const long long[::1] b,
                 const signed char[::1] leg):
    cdef Py_ssize_t n = a.shape[0], k
    cdef long long x, s, ax, ak, bk, v
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] o = out
    cubes_arr = np.arange(p, dtype=np.int64) ** 3 % p
    cdef long long[::1] cubes = cubes_arr
    with nogil:
        for k in range(n):
            ak = a[k]
            bk = b[k]
            s = 0
            ax = 0
            for x in range(p):
                v = cubes[x] + ax + bk
                if v >= p:
                    v -= p
                if v >= p:
                    v -= p
                s += leg[v]
                ax += ak
                if ax >= p:
                    ax -= p
            o[k] = -s
    return out


def fill_trace_table(long long p, long long g, const long long[::1] tau, short[:, ::1] table):
    """Fill table[a, b], a, b != 0, from the (c, c) traces ``tau``.

    With a = g^i, b = g^j: c = a^3/b^2 = g^(3i - 2j) and (ab/p) = (-1)^(i+j),
    so the inner loop needs no reductions mod p.
    """
    cdef long long n = p - 1, i, j, e, a, t, k
    cdef int sgn
    pw_arr = np.empty(n, dtype=np.int64)
    te_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] pw = pw_arr
    cdef long long[::1] te = te_arr
    with nogil:
        a = 1
        for k in range(n):
            pw[k] = a
            te[k] = tau[a]
            a = a * g % p
        for i in range(n):
            a = pw[i]
            e = (3 * i) % n
            sgn = 1 if i % 2 == 0 else -1
            for j in range(n):
                t = te[e]
                if t == SINGULAR:
                    table[a, pw[j]] = SINGULAR
                else:
                    table[a, pw[j]] = <short>(sgn * t)
                sgn = -sgn
                e -= 2
                if e < 0:
                    e += n


def box_hits(const unsigned char[:, ::1] member, const long long[::1] ares,
             const long long[::1] bres, int[:, ::1] counts):
    cdef Py_ssize_t i, j, na = ares.shape[0], nb = bres.shape[0]
    cdef long long ai
    with nogil:
        for i in range(na):
            ai = ares[i]
            for j in range(nb):
                counts[i, j] += member[ai, bres[j]]


cdef inline long long _gcd(long long u, long long v) nogil:
    cdef long long t
    while v:
        t = u % v
        u = v
        v = t
    return u


def class_number(long long d):
    """Number of primitive reduced positive definite forms of discriminant d < 0."""
    cdef long long n = -d, a, b, num, c, h = 0
    with nogil:
        a = 1
        while 3 * a * a <= n:
            b = -a + 1
            if (b - d) & 1:
                b += 1
            while b <= a:
                num = b * b - d
                if num % (4 * a) == 0:
                    c = num // (4 * a)
                    if c >= a and not (b < 0 and c == a):
                        if _gcd(_gcd(a, llabs(b)), c) == 1:
                            h += 1
                b += 2
            a += 1
    return h


def trace_histogram(const short[:, ::1] table, long long R):
    """Counts of each trace -R..R in a trace table (SINGULAR entries skipped)."""
    out = np.zeros(2 * R + 1, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t i, j, n = table.shape[0], m = table.shape[1]
    cdef short t
    with nogil:
        for i in range(n):
            for j in range(m):
                t = table[i, j]
                if t != SINGULAR:
                    o[t + R] += 1
    return out
