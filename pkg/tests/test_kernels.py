"""Both kernel implementations against the oracles and each other."""
import numpy as np
import pytest

from langtrotter import _kernels
from langtrotter.arith import legendre_table, primitive_root

import oracles

BACKENDS = sorted(_kernels.BACKENDS)


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("p", [5, 7, 11, 13, 31])
def test_batch_traces(name, p):
    impl = _kernels.BACKENDS[name]
    a, b = np.divmod(np.arange(p * p, dtype=np.int64), p)
    got = impl.batch_traces(p, a, b, legendre_table(p))
    want = [oracles.trace(p, int(x), int(y)) for x, y in zip(a, b)]
    assert got.tolist() == want


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("p", [5, 7, 13, 41, 211])
def test_fill_trace_table(name, p):
    impl = _kernels.BACKENDS[name]
    leg = legendre_table(p)
    c = np.arange(p, dtype=np.int64)
    tau = impl.batch_traces(p, c, c, leg)
    tau[-27 * pow(4, -1, p) % p] = _kernels.SINGULAR
    table = np.full((p, p), 123, dtype=np.int16)
    impl.fill_trace_table(p, primitive_root(p), tau, table)
    # Interior entries only; the a = 0 and b = 0 edges are filled elsewhere.
    for a in range(1, p, max(1, p // 17)):
        for b in range(1, p, max(1, p // 13)):
            want = oracles.trace(p, a, b) if oracles.nonsingular(p, a, b) else _kernels.SINGULAR
            assert table[a, b] == want, (a, b)


def test_fill_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernels not built")
    p = 409
    tables = []
    for name in BACKENDS:
        impl = _kernels.BACKENDS[name]
        leg = legendre_table(p)
        c = np.arange(p, dtype=np.int64)
        tau = impl.batch_traces(p, c, c, leg)
        tau[-27 * pow(4, -1, p) % p] = _kernels.SINGULAR
        t = np.zeros((p, p), dtype=np.int16)
        impl.fill_trace_table(p, primitive_root(p), tau, t)
        tables.append(t[1:, 1:])
    assert np.array_equal(*tables)


@pytest.mark.parametrize("name", BACKENDS)
def test_box_hits(name):
    impl = _kernels.BACKENDS[name]
    rng = np.random.default_rng(1)
    p = 11
    member = (rng.random((p, p)) < 0.3).astype(np.uint8)
    ares = np.arange(-7, 8, dtype=np.int64) % p
    bres = np.arange(-5, 6, dtype=np.int64) % p
    counts = np.ones((len(ares), len(bres)), dtype=np.int32)
    impl.box_hits(member, ares, bres, counts)
    want = 1 + member[np.ix_(ares, bres)]
    assert np.array_equal(counts, want)


@pytest.mark.parametrize("name", BACKENDS)
def test_class_number(name):
    impl = _kernels.BACKENDS[name]
    for d in range(-3, -1200, -1):
        if d % 4 in (0, 1):
            assert impl.class_number(d) == oracles.form_class_number(d), d


@pytest.mark.parametrize("name", BACKENDS)
def test_trace_histogram(name):
    impl = _kernels.BACKENDS[name]
    table = np.array([[-32768, 1, 2], [2, -3, -32768], [0, 0, 3]], dtype=np.int16)
    hist = impl.trace_histogram(table, 3)
    assert hist.tolist() == [1, 0, 0, 2, 1, 2, 1]


def test_backend_selection_reported():
    assert _kernels.BACKEND in _kernels.BACKENDS
    assert "python" in _kernels.BACKENDS


def test_forced_python_backend_in_fresh_process():
    import os
    import subprocess
    import sys

    code = (
        "import langtrotter as L; from langtrotter.curves import *; "
        "print(L.BACKEND, trace_of_frobenius(CurveParams(5, 1, 0)).r)"
    )
    env = dict(os.environ, LANGTROTTER_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.split() == ["python", "2"]
