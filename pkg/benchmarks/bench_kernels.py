"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--p 1999] [--repeat 3] [--end-to-end]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from langtrotter import _kernels
from langtrotter.arith import legendre_table, primitive_root


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(impl, p):
    leg = legendre_table(p)
    c = np.arange(p, dtype=np.int64)
    tau = impl.batch_traces(p, c, c, leg)
    tau[-27 * pow(4, -1, p) % p] = _kernels.SINGULAR
    g = primitive_root(p)
    table = np.empty((p, p), dtype=np.int16)
    impl.fill_trace_table(p, g, tau, table)
    table[0, :] = table[:, 0] = _kernels.SINGULAR
    member = (table == 1).astype(np.uint8)
    res = np.arange(-1000, 1001, dtype=np.int64) % p
    counts = np.zeros((len(res), len(res)), dtype=np.int32)
    small = 211
    sa, sb = np.divmod(np.arange(small * small, dtype=np.int64), small)
    small_leg = legendre_table(small)
    R = int(np.sqrt(4 * p))
    return {
        f"batch_traces (p={p}, p curves)": lambda: impl.batch_traces(p, c, c, leg),
        f"batch_traces (p={small}, all p^2 curves)": lambda: impl.batch_traces(
            small, sa, sb, small_leg
        ),
        f"fill_trace_table (p={p})": lambda: impl.fill_trace_table(p, g, tau, table),
        f"trace_histogram (p={p})": lambda: impl.trace_histogram(table, R),
        f"box_hits (2001 x 2001, p={p})": lambda: impl.box_hits(member, res, res, counts),
        "class_number (d = -3 .. -40000)": lambda: [
            impl.class_number(d) for d in range(-3, -40000, -1) if d % 4 in (0, 1)
        ],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=1999)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument(
        "--end-to-end", action="store_true", help="also time `average --x 1000` per backend"
    )
    args = ap.parse_args()

    names = sorted(_kernels.BACKENDS)
    results = {n: {k: best_of(f, args.repeat) for k, f in cases(_kernels.BACKENDS[n], args.p).items()} for n in names}
    keys = list(results[names[0]])
    width = max(map(len, keys))
    print(f"{'kernel':<{width}}  " + "  ".join(f"{n:>10}" for n in names) + ("    speedup" if len(names) > 1 else ""))
    for k in keys:
        row = "  ".join(f"{results[n][k] * 1e3:>8.2f}ms" for n in names)
        extra = ""
        if "c" in results and "python" in results:
            extra = f"  {results['python'][k] / results['c'][k]:>8.1f}x"
        print(f"{k:<{width}}  {row}{extra}")
    if "c" not in results:
        print("compiled kernels not available; only the numpy fallback was timed")
    if args.end_to_end:
        cmd = [sys.executable, "-m", "langtrotter.cli", "average", "--x", "1000", "--A", "1000",
               "--B", "1000", "--r", "1", "--threads", "1"]
        for n in names:
            env = dict(os.environ, LANGTROTTER_BACKEND=n)
            t0 = time.perf_counter()
            subprocess.run(cmd, env=env, check=True, capture_output=True)
            print(f"average x=A=B=1000 ({n}): {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
