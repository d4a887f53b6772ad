"""langtrotter command line.

Every subcommand prints one report to stdout (json by default, or csv /
plain key=value). Exit status: 0 ok, 1 a check failed, 2 usage or domain
error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from . import experiments, verify
from .analytic import euler_product_Cr, lemma3_partial_sum
from .characters import (
    box_count_via_characters,
    fourth_moment_ratio,
    lemma5_check,
    polya_vinogradov_scan,
)
from .classnum import H_rp, kronecker_H
from .curves import (
    CurveParams,
    iso_classes_with_trace,
    partition_classes,
    trace_distribution,
    trace_of_frobenius,
    trace_table,
)
from .errors import LangTrotterError, ResourceError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("langtrotter")


class Output:
    """A report: a JSON-able dict, optional CSV rows, and a pass flag."""

    def __init__(self, payload: dict, rows=None, ok: bool = True, csv_text: str | None = None):
        self.payload = payload
        self.rows = rows
        self.ok = ok
        self.csv_text = csv_text

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2) + "\n"
        if fmt == "csv":
            if self.csv_text is not None:
                return self.csv_text
            buf = io.StringIO()
            if self.rows:
                w = csv.DictWriter(buf, fieldnames=list(self.rows[0]), lineterminator="\n")
                w.writeheader()
                w.writerows(self.rows)
            else:
                w = csv.writer(buf, lineterminator="\n")
                w.writerow(["key", "value"])
                for k, v in self.payload.items():
                    w.writerow([k, _plain(v)])
            return buf.getvalue()
        return "".join(f"{k}={_plain(v)}\n" for k, v in self.payload.items())


def _plain(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list, tuple)) or v is None:
        return json.dumps(v)
    return str(v)


# -- handlers ---------------------------------------------------------------


def cmd_trace(args) -> Output:
    res = trace_of_frobenius(CurveParams(args.p, args.a, args.b))
    return Output({"p": args.p, "a": args.a, "b": args.b, "r": res.r, "points": res.points})


def cmd_distribution(args) -> Output:
    dist = trace_distribution(args.p, membership_for=args.r)
    counts = sorted(dist.counts.items())
    payload = {"p": args.p, "total": dist.total, "counts": [[r, n] for r, n in counts]}
    if args.r is not None:
        payload["membership_r"] = args.r
        payload["membership_count"] = int(np.count_nonzero(dist.membership))
    return Output(payload, [{"r": r, "count": n} for r, n in counts])


def cmd_classnum(args) -> Output:
    rec = kronecker_H(args.D)
    parts = [{"f": f, "d": d, "h": h} for f, d, h in rec.decomposition]
    return Output({"D": rec.D, "H": rec.H, "decomposition": parts}, parts)


def cmd_isoclasses(args) -> Output:
    s = iso_classes_with_trace(args.p, args.r)
    classes = [
        {"a": a, "b": b, "size": size}
        for (a, b), size in partition_classes(args.p, np.argwhere(trace_table(args.p) == args.r))
    ]
    payload = {
        "p": s.p,
        "r": s.r,
        "class_count": s.class_count,
        "nonzero_class_count": s.nonzero_class_count,
        "H": H_rp(args.r, args.p),
        "classes": classes,
    }
    return Output(payload, classes)


def cmd_charcheck(args) -> Output:
    rng = np.random.default_rng(args.seed)
    N = args.N if args.N is not None else args.q // 2
    coeffs = rng.normal(size=N) + 1j * rng.normal(size=N)
    lhs, rhs = lemma5_check(args.q, coeffs)
    ortho_ok = abs(lhs - rhs) <= 1e-9 * max(abs(rhs), 1.0)
    worst, bound = polya_vinogradov_scan(args.q)
    moment, ratio = fourth_moment_ratio(args.q, N)
    payload = {
        "q": args.q,
        "orthogonality": {"N": N, "seed": args.seed, "lhs": lhs, "rhs": rhs, "ok": ortho_ok},
        "polya_vinogradov": {"max_partial_sum": worst, "bound": bound, "ok": worst <= bound},
        "fourth_moment": {"N": N, "moment": moment, "ratio": ratio},
        "passed": bool(ortho_ok and worst <= bound),
    }
    return Output(payload, ok=payload["passed"])


def cmd_boxcount(args) -> Output:
    d = box_count_via_characters(args.p, args.r, args.A, args.B)
    payload = {
        k: getattr(d, k)
        for k in ("p", "r", "A", "B", "total", "M", "E1", "E2", "direct", "nonzero_classes")
    }
    payload["main_term_closed_form"] = d.main_term_closed_form
    payload["max_imag"] = d.max_imag
    payload["residual"] = d.residual
    return Output(payload)


def cmd_constants(args) -> Output:
    c = euler_product_Cr(args.r, args.truncation, inverted=args.inverted)
    return Output(
        {
            "r": c.r,
            "value": c.value,
            "truncation_prime": c.truncation_prime,
            "tail_bound": c.tail_bound,
            "truncated": c.truncated,
            "inverted_divisor_factors": args.inverted,
        }
    )


def cmd_lemma3(args) -> Output:
    res = lemma3_partial_sum(args.x, args.r, args.truncation, inverted=args.inverted)
    return Output(
        {
            "x": res.x,
            "r": res.r,
            "total": res.total,
            "prediction": res.prediction,
            "ratio": res.ratio,
            "prime_count": res.prime_count,
            "inverted_divisor_factors": args.inverted,
        }
    )


def _config(args) -> experiments.ExperimentConfig:
    return experiments.ExperimentConfig(
        x=args.x,
        A=args.A,
        B=args.B,
        r=args.r,
        c=args.c,
        d=args.d,
        threads=args.threads,
        cache_dir=args.cache_dir,
    )


def _report_output(report: experiments.AverageReport, rows=None, csv_text=None) -> Output:
    for w in report.warnings:
        log.warning("%s", w)
    return Output(report.to_dict(), rows, csv_text=csv_text)


def cmd_average(args) -> Output:
    report = experiments.average_pi_r(_config(args), with_timing=args.timing)
    return _report_output(report, csv_text=report.to_csv())


def _histogram_rows(report) -> list[dict]:
    hist = report.diagnostics.get("pi_value_histogram", [])
    return [{"pi": k, "curves": n} for k, n in enumerate(hist) if n]


def cmd_moment(args) -> Output:
    report = experiments.second_moment(_config(args), with_timing=args.timing)
    return _report_output(report, _histogram_rows(report))


def cmd_census(args) -> Output:
    report = experiments.exceptional_census(
        _config(args), threshold=args.threshold, with_timing=args.timing
    )
    return _report_output(report, _histogram_rows(report))


def cmd_verify_all(args) -> Output:
    results = verify.run_all(args.max_p)
    ok = verify.summary_ok(results)
    checks = [r.to_dict() for r in results]
    rows = [{k: c[k] for k in ("name", "passed", "cases", "seconds")} for c in checks]
    return Output({"passed": ok, "checks": checks}, rows, ok=ok)


# -- parser -----------------------------------------------------------------


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    parser.add_argument(
        "--threads",
        type=int,
        default=experiments.default_threads(),
        help="worker threads (default: CPU count)",
    )
    parser.add_argument("--cache-dir", default=None, help="directory for per-prime trace files")
    parser.add_argument("--timing", action="store_true", help="include wall time in reports")
    parser.add_argument("-v", "--verbose", action="store_true")


def _experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--x", type=int, required=True)
    parser.add_argument("--A", type=int, required=True)
    parser.add_argument("--B", type=int, required=True)
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--d", type=float, default=3.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="langtrotter",
        description="Frobenius trace statistics of y^2 = x^3 + ax + b.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(func=func)
        return p

    p = add("trace", cmd_trace, "trace of Frobenius of one curve mod p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = add("distribution", cmd_distribution, "N_r(p) for every trace r")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="also count the membership table for r")

    p = add("classnum", cmd_classnum, "Kronecker class number H(D)")
    p.add_argument("--D", type=int, required=True)

    p = add("isoclasses", cmd_isoclasses, "F_p-isomorphism classes with trace r")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = add("charcheck", cmd_charcheck, "character identities and bounds mod q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, default=None, help="sum length (default q // 2)")
    p.add_argument("--seed", type=int, default=0)

    p = add("boxcount", cmd_boxcount, "character expansion of a box count")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)

    p = add("constants", cmd_constants, "the Euler product C_r")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--truncation", type=int, default=10**6)
    p.add_argument("--inverted", action="store_true", help="use (1 - 1/l^2)^-1 at l | r")

    p = add("lemma3", cmd_lemma3, "class-number sum against C_r pi_1/2(x)")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--truncation", type=int, default=10**5)
    p.add_argument("--inverted", action="store_true", help="use (1 - 1/l^2)^-1 at l | r")

    p = add("average", cmd_average, "box average of pi^r(x)")
    _experiment_flags(p)
    p = add("moment", cmd_moment, "box second moment of pi^r(x)")
    _experiment_flags(p)
    p = add("census", cmd_census, "curves far from the prediction")
    _experiment_flags(p)
    p.add_argument("--threshold", type=float, default=None)

    p = add("verify-all", cmd_verify_all, "run every invariant check")
    p.add_argument("--max-p", type=int, default=61)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = args.func(args)
    except ResourceError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except LangTrotterError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out.render(args.format))
    return EXIT_OK if out.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
