"""Box averages of pi^r_{E(a,b)}(x) over |a| <= A, |b| <= B.

Two routes:

* residue classes: for each prime p, count box points per residue class and
  weight the (alpha, beta) mod p with trace r. Cheap; used for the mean.
* per curve: accumulate pi^r for every curve in the box by table lookups,
  one prime at a time. Needed for the second moment and the census.

Every count is an integer until the final division, so results do not
depend on the thread count.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .analytic import B_of_r, euler_product_Cr, pi_half
from .cache import TraceCache
from .classnum import H_rp, primes_above_B
from .curves import CurveParams, trace_of_frobenius
from .errors import DomainError, ResourceError, SingularCurveError

log = logging.getLogger(__name__)

# Largest prime whose p x p trace table we agree to build (int16: 128 MiB).
MAX_TABLE_PRIME = 8192
# Largest box (number of curves) for the per-curve route (int32 counters).
MAX_BOX_CURVES = 1 << 26

CR_TRUNCATION = 10**5


@dataclass
class ExperimentConfig:
    x: int
    A: int
    B: int
    r: int
    c: float = 1.0
    d: float = 3.0
    threads: int = 1
    cache_dir: str | None = None

    def validate(self) -> list[str]:
        """Raise on unusable parameters; return hypothesis warnings."""
        if self.x < 5:
            raise DomainError(f"x must be at least 5, got {self.x}")
        if self.A < 1 or self.B < 1:
            raise DomainError(f"box half-widths must be >= 1, got A={self.A}, B={self.B}")
        if self.threads < 1:
            raise DomainError("threads must be >= 1")
        warnings = []
        root = math.sqrt(self.x)
        if self.A <= root or self.B <= root:
            warnings.append(f"A, B > sqrt(x) = {root:.6g} does not hold")
        if self.A * self.B <= self.x**1.5:
            warnings.append(f"AB > x^(3/2) = {self.x**1.5:.6g} does not hold")
        return warnings

    def public(self) -> dict:
        """Parameters that determine the numbers (no threads, no paths)."""
        return {"x": self.x, "A": self.A, "B": self.B, "r": self.r, "c": self.c, "d": self.d}


@dataclass
class PrimeRow:
    p: int
    N_r: int
    H_rp: int
    hits: int  # box curves with trace r at p
    hits_coprime: int  # same, restricted to p not dividing ab


@dataclass
class AverageReport:
    kind: str
    config: dict
    mean: float
    prediction: float
    second_moment: float | None = None
    exceptional_count: int | None = None
    threshold: float | None = None
    error_budget: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    per_prime_rows: list[PrimeRow] = field(default_factory=list)
    timing: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("per_prime_rows")
        if d["threshold"] is not None and not math.isfinite(d["threshold"]):
            d["threshold"] = None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "N_r", "H_rp", "contrib"])
        scale = 4 * self.config["A"] * self.config["B"]
        for row in self.per_prime_rows:
            w.writerow([row.p, row.N_r, row.H_rp, repr(row.hits / scale)])
        return buf.getvalue()


def box_residue_count(residue: int, p: int, A: int) -> int:
    """#{a : |a| <= A, a = residue mod p}."""
    if A < 0:
        raise DomainError("A must be non-negative")
    return (A - residue) // p + (A + residue) // p + 1


def _residue_weights(p: int, A: int) -> np.ndarray:
    s = np.arange(p, dtype=np.int64)
    return (A - s) // p + (A + s) // p + 1


def curve_pi_r(a: int, b: int, x: int, r: int, exclude_divisors: bool = False) -> int:
    """Primes B(r) < p <= x where E(a, b) has good reduction and trace r.

    With ``exclude_divisors`` primes dividing a nonzero coefficient are
    skipped as well (for b = 0 that is p | a alone).
    """
    if 4 * a**3 + 27 * b**2 == 0:
        raise SingularCurveError(f"y^2 = x^3 + {a}x + {b} is singular over Q")
    n = 0
    for p in primes_above_B(x, r):
        if (4 * a**3 + 27 * b**2) % p == 0:
            continue
        if exclude_divisors and ((a and a % p == 0) or (b and b % p == 0)):
            continue
        if trace_of_frobenius(CurveParams(p, a, b)).r == r:
            n += 1
    return n


def _check_table_budget(x: int) -> None:
    if x > MAX_TABLE_PRIME:
        raise ResourceError(f"x = {x} needs trace tables beyond p = {MAX_TABLE_PRIME}")


def _mean_budget(cfg: ExperimentConfig) -> list[dict]:
    x, A, B, c = cfg.x, cfg.A, cfg.B, cfg.c
    lx = math.log(x)
    return [
        {"name": "(1/A+1/B) x log x", "value": (1 / A + 1 / B) * x * lx},
        {"name": "x^(5/4) log^3 x / sqrt(AB)", "value": x**1.25 * lx**3 / math.sqrt(A * B)},
        {"name": "sqrt(x) / log^c x", "value": math.sqrt(x) / lx**c},
    ]


def _moment_budget(cfg: ExperimentConfig) -> list[dict]:
    x, A, B, c = cfg.x, cfg.A, cfg.B, cfg.c
    lx = math.log(x)
    return [
        {"name": "(1/A+1/B) x^2", "value": (1 / A + 1 / B) * x * x},
        {"name": "x^(5/2) log^3 x / sqrt(AB)", "value": x**2.5 * lx**3 / math.sqrt(A * B)},
        {"name": "x / log^c x", "value": x / lx**c},
        {"name": "sqrt(x) log log (10AB)", "value": math.sqrt(x) * math.log(math.log(10 * A * B))},
    ]


def _prediction(cfg: ExperimentConfig) -> tuple[float, dict]:
    ph = pi_half(cfg.x).pi_half
    cr = euler_product_Cr(cfg.r, CR_TRUNCATION).value
    cr_inv = euler_product_Cr(cfg.r, CR_TRUNCATION, inverted=True).value
    return cr * ph, {"C_r": cr, "pi_half": ph, "prediction_inverted_divisor_factors": cr_inv * ph}


def _mean_row(cfg: ExperimentConfig, cache: TraceCache, p: int) -> PrimeRow:
    rec = cache.get(p, [cfg.r])
    member = rec.members[cfg.r]
    wa = _residue_weights(p, cfg.A)
    wb = _residue_weights(p, cfg.B)
    # Float products are exact: every partial sum is an integer below 2^53.
    m8 = member.view(np.uint8)
    per_row = np.dot(m8, wb.astype(np.float64))
    hits = int(np.dot(wa, per_row))
    # Residue 0 minus the nonzero multiples of p leaves a = 0 (resp. b = 0).
    wa[0] = wb[0] = 1
    coprime = int(np.dot(wa, np.dot(m8, wb.astype(np.float64))))
    return PrimeRow(p, rec.count(cfg.r), H_rp(cfg.r, p), hits, coprime)


def average_pi_r(config: ExperimentConfig, with_timing: bool = False) -> AverageReport:
    """(1/4AB) sum over the box of pi^r_{E(a,b)}(x), via residue classes."""
    t0 = time.perf_counter()
    warnings = config.validate()
    _check_table_budget(config.x)
    cache = TraceCache(config.cache_dir)
    primes = primes_above_B(config.x, config.r)
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        rows = list(pool.map(lambda p: _mean_row(config, cache, p), primes))
    cache.rebuild_index()

    scale = 4 * config.A * config.B
    mean = float(Fraction(sum(r.hits for r in rows), scale))
    mean_coprime = float(Fraction(sum(r.hits_coprime for r in rows), scale))
    prediction, diag = _prediction(config)
    diag.update(
        mean_excluding_p_divides_ab=mean_coprime,
        convention_difference=mean - mean_coprime,
        ratio_to_prediction=mean / prediction if prediction else None,
        prime_count=len(primes),
        B_r=B_of_r(config.r),
    )
    return AverageReport(
        kind="average",
        config=config.public(),
        mean=mean,
        prediction=prediction,
        error_budget=_mean_budget(config),
        warnings=warnings,
        diagnostics=diag,
        per_prime_rows=rows,
        timing={"seconds": time.perf_counter() - t0} if with_timing else None,
    )


def curve_pi_counts(config: ExperimentConfig) -> np.ndarray:
    """int32 array with pi^r_{E(a,b)}(x) at [a + A, b + B].

    Globally singular curves come out as 0: they have no good primes.
    """
    config.validate()
    _check_table_budget(config.x)
    na, nb = 2 * config.A + 1, 2 * config.B + 1
    if na * nb > MAX_BOX_CURVES:
        raise ResourceError(f"box of {na * nb} curves exceeds {MAX_BOX_CURVES}")
    cache = TraceCache(config.cache_dir)
    counts = np.zeros((na, nb), dtype=np.int32)
    a_vals = np.arange(-config.A, config.A + 1, dtype=np.int64)
    b_vals = np.arange(-config.B, config.B + 1, dtype=np.int64)
    chunk = max(1, -(-na // config.threads))
    spans = [(lo, min(na, lo + chunk)) for lo in range(0, na, chunk)]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        for p in primes_above_B(config.x, config.r):
            member = np.ascontiguousarray(cache.get(p, [config.r]).members[config.r], dtype=np.uint8)
            ares = a_vals % p
            bres = b_vals % p
            jobs = [
                pool.submit(_kernels.box_hits, member, ares[lo:hi], bres, counts[lo:hi])
                for lo, hi in spans
            ]
            for j in jobs:
                j.result()
    cache.rebuild_index()
    return counts


def _moment_stats(config: ExperimentConfig):
    counts = curve_pi_counts(config)
    values = np.bincount(counts.ravel())
    prediction, diag = _prediction(config)
    scale = 4 * config.A * config.B
    ks = np.nonzero(values)[0]
    mean = float(Fraction(int(np.dot(ks, values[ks])), scale))
    # Each curve contributes the double (k - prediction)^2; their sum is taken
    # exactly and rounded once, so no ordering or grouping can change it.
    second = float(
        sum(int(values[k]) * Fraction((int(k) - prediction) ** 2) for k in ks) / scale
    )
    return values, prediction, diag, mean, second


def second_moment(config: ExperimentConfig, with_timing: bool = False) -> AverageReport:
    """(1/4AB) sum over the box of |pi^r_{E(a,b)}(x) - C_r pi_{1/2}(x)|^2."""
    t0 = time.perf_counter()
    warnings = config.validate()
    values, prediction, diag, mean, second = _moment_stats(config)
    diag["pi_value_histogram"] = [int(v) for v in values]
    return AverageReport(
        kind="moment",
        config=config.public(),
        mean=mean,
        prediction=prediction,
        second_moment=second,
        error_budget=_moment_budget(config),
        warnings=warnings,
        diagnostics=diag,
        timing={"seconds": time.perf_counter() - t0} if with_timing else None,
    )


def exceptional_census(
    config: ExperimentConfig,
    d: float | None = None,
    threshold: float | None = None,
    with_timing: bool = False,
) -> AverageReport:
    """Count curves with |pi^r - C_r pi_{1/2}(x)| > sqrt(x)/log^c x.

    The fraction of exceptions is also reported against 1/log^d x, with the
    logarithm taken of x.
    """
    t0 = time.perf_counter()
    warnings = config.validate()
    d = config.d if d is None else d
    if d <= 2 * config.c:
        raise DomainError(f"need d > 2c, got d={d}, c={config.c}")
    if threshold is None:
        threshold = math.sqrt(config.x) / math.log(config.x) ** config.c
    values, prediction, diag, mean, second = _moment_stats(config)
    ks = np.arange(len(values))
    exceptional = int(values[np.abs(ks - prediction) > threshold].sum())
    total = (2 * config.A + 1) * (2 * config.B + 1)
    fraction = exceptional / total
    log_d = math.log(config.x) ** d
    diag.update(
        fraction=fraction,
        curves=total,
        log_base="x",
        reference_one_over_log_d=1 / log_d,
        fraction_times_log_d=fraction * log_d,
    )
    return AverageReport(
        kind="census",
        config={**config.public(), "d": d},
        mean=mean,
        prediction=prediction,
        second_moment=second,
        exceptional_count=exceptional,
        threshold=threshold,
        error_budget=_moment_budget(config),
        warnings=warnings,
        diagnostics=diag,
        timing={"seconds": time.perf_counter() - t0} if with_timing else None,
    )


def default_threads() -> int:
    return os.cpu_count() or 1
