"""Numpy implementations of the hot loops.

Same signatures and results as the compiled module; used when the
extension is not built or LANGTROTTER_BACKEND=python.
"""
import math

import numpy as np

SINGULAR = -32768

# Bound on the temporaries built by batch_traces (elements).
_CHUNK = 1 << 22


def batch_traces(p, a, b, leg):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    leg = np.asarray(leg)
    x = np.arange(p, dtype=np.int64)
    cubes = x**3 % p
    out = np.empty(len(a), dtype=np.int64)
    step = max(1, _CHUNK // max(p, 1))
    for lo in range(0, len(a), step):
        ak = a[lo : lo + step, None]
        bk = b[lo : lo + step, None]
        vals = (cubes[None, :] + ak * x[None, :] + bk) % p
        out[lo : lo + step] = -leg[vals].sum(axis=1, dtype=np.int64)
    return out


def fill_trace_table(p, g, tau, table):
    tau = np.asarray(tau, dtype=np.int64)
    u = np.arange(1, p, dtype=np.int64)
    leg = np.full(p, -1, dtype=np.int64)
    leg[u * u % p] = 1
    inv2 = np.array([pow(int(n), -2, p) for n in u], dtype=np.int64)
    rows = max(1, _CHUNK // (4 * p))
    for lo in range(1, p, rows):
        a = np.arange(lo, min(p, lo + rows), dtype=np.int64)[:, None]
        t = tau[(a**3 % p) * inv2[None, :] % p]
        sign = leg[a * u[None, :] % p]
        table[lo : lo + len(a), 1:] = np.where(t == SINGULAR, SINGULAR, sign * t)


def box_hits(member, ares, bres, counts):
    counts += member[np.ix_(np.asarray(ares), np.asarray(bres))]


def class_number(d):
    n = -d
    amax = math.isqrt(n // 3)
    if amax == 0:
        return 0
    a = np.arange(1, amax + 1, dtype=np.int64)[:, None]
    b = np.arange(-amax + 1, amax + 1, dtype=np.int64)[None, :]
    num = b * b - d
    ok = (b > -a) & (b <= a) & ((b - d) % 2 == 0) & (num % (4 * a) == 0)
    c = num // (4 * a)
    ok &= (c >= a) & ~((b < 0) & (c == a))
    ok &= np.gcd(np.gcd(a, np.abs(b)), c) == 1
    return int(ok.sum())


def trace_histogram(table, R):
    vals, cnt = np.unique(table, return_counts=True)
    out = np.zeros(2 * R + 1, dtype=np.int64)
    keep = vals != SINGULAR
    out[vals[keep].astype(np.int64) + R] = cnt[keep]
    return out
