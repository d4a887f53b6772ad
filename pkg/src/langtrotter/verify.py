"""Invariant checks run by ``langtrotter verify-all``.

Each check returns a CheckResult; ``run_all`` runs every check even after
a failure.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .arith import sieve_primes
from .characters import (
    box_count_via_characters,
    lemma5_check,
    polya_vinogradov_scan,
    supported_moduli,
)
from .classnum import H_rp
from .curves import (
    SINGULAR,
    CurveParams,
    are_isomorphic_criterion,
    compute_trace_table,
    hasse_range,
    iso_classes_with_trace,
    orbit_size,
    partition_classes,
    trace_table,
)
from .experiments import ExperimentConfig, average_pi_r, curve_pi_r

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": [str(f) for f in self.failures[:20]],
            "seconds": self.seconds,
        }


def _primes(lo: int, hi: int) -> list[int]:
    return [p for p in sieve_primes(hi) if p >= lo] if hi >= 2 else []


def check_trace_tables(max_p: int = 61) -> CheckResult:
    """Twist-route table equals brute point counts."""
    bad = []
    ps = _primes(5, max_p)
    for p in ps:
        if not np.array_equal(compute_trace_table(p), compute_trace_table(p, "brute")):
            bad.append(p)
    return CheckResult("trace_tables", not bad, len(ps), bad)


def check_class_number_identity(max_p: int = 61) -> CheckResult:
    """Isomorphism classes with trace r number H(r^2 - 4p) (1 <= |r|, p not | r)."""
    bad, n = [], 0
    for p in _primes(5, max_p):
        R = hasse_range(p)
        for r in range(-R, R + 1):
            if r == 0 or r % p == 0 or r * r == 4 * p:
                continue
            n += 1
            got = iso_classes_with_trace(p, r).class_count
            want = H_rp(r, p)
            if got != want:
                bad.append((p, r, got, want))
    return CheckResult("class_number_identity", not bad, n, bad)


def check_orbit_sizes(max_p: int = 61) -> CheckResult:
    bad, n = [], 0
    for p in _primes(5, max_p):
        table = trace_table(p)
        pairs = np.argwhere(table != SINGULAR)
        for (a, b), size in partition_classes(p, pairs):
            n += 1
            predicted = orbit_size(CurveParams(p, a, b))
            if predicted != size:
                bad.append((p, a, b, predicted, size))
    return CheckResult("orbit_sizes", not bad, n, bad)


def _orbit_labels(p: int) -> np.ndarray:
    """labels[a, b] = index of the class of (a, b); -1 when singular."""
    labels = np.full((p, p), -1, dtype=np.int64)
    mu = np.arange(1, p, dtype=np.int64)
    mu4 = mu**4 % p
    mu6 = mu4 * mu * mu % p
    k = 0
    for a in range(p):
        for b in range(p):
            if labels[a, b] >= 0 or (4 * a**3 + 27 * b * b) % p == 0:
                continue
            labels[mu4 * a % p, mu6 * b % p] = k
            k += 1
    return labels


def check_isomorphism_criterion(max_p: int = 23) -> CheckResult:
    """Residue criterion agrees with orbit membership on all pairs of unit curves."""
    bad, n = [], 0
    for p in _primes(5, max_p):
        labels = _orbit_labels(p)
        curves = [
            CurveParams(p, a, b) for a in range(1, p) for b in range(1, p) if labels[a, b] >= 0
        ]
        lab = [labels[c.a, c.b] for c in curves]
        for c1, l1 in zip(curves, lab):
            for c2, l2 in zip(curves, lab):
                n += 1
                if are_isomorphic_criterion(c1, c2) != (l1 == l2):
                    bad.append((p, c1.a, c1.b, c2.a, c2.b))
    return CheckResult("isomorphism_criterion", not bad, n, bad)


def check_orthogonality(seed: int = 0, trials: int = 25, rel_tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad, n = [], 0
    for q in (7, 13, 15, 35):
        for _ in range(trials):
            N = int(rng.integers(1, 4 * q))
            coeffs = rng.normal(size=N) + 1j * rng.normal(size=N)
            lhs, rhs = lemma5_check(q, coeffs)
            n += 1
            if abs(lhs - rhs) > rel_tol * max(abs(rhs), 1.0):
                bad.append((q, N, lhs, rhs))
    return CheckResult("character_orthogonality", not bad, n, bad)


def check_polya_vinogradov(max_q: int = 499) -> CheckResult:
    bad = []
    qs = supported_moduli(max_q)
    for q in qs:
        worst, bound = polya_vinogradov_scan(q)
        if worst > bound:
            bad.append((q, worst, bound))
    return CheckResult("polya_vinogradov", not bad, len(qs), bad)


def check_character_expansion(tol: float = 1e-6) -> CheckResult:
    bad, n = [], 0
    for p in (13, 17):
        R = hasse_range(p)
        for r in range(-R, R + 1):
            if r * r == 4 * p:
                continue
            for A, B in ((13, 13), (30, 25)):
                n += 1
                d = box_count_via_characters(p, r, A, B)
                if abs(d.total - d.direct) > tol or abs(d.M + d.E1 + d.E2 - d.total) > tol:
                    bad.append((p, r, A, B, d.total, d.direct))
    return CheckResult("character_expansion", not bad, n, bad)


def check_path_equivalence(x: int = 50, half_width: int = 10) -> CheckResult:
    """Residue-class mean equals the per-curve brute mean."""
    bad = []
    rs = (0, 1, 2, -1)
    for r in rs:
        cfg = ExperimentConfig(x=x, A=half_width, B=half_width, r=r)
        fast = average_pi_r(cfg)
        total = 0
        for a in range(-half_width, half_width + 1):
            for b in range(-half_width, half_width + 1):
                if 4 * a**3 + 27 * b * b != 0:
                    total += curve_pi_r(a, b, x, r)
        slow = total / (4 * half_width * half_width)
        if fast.mean != slow:
            bad.append((r, fast.mean, slow))
    return CheckResult("path_equivalence", not bad, len(rs), bad)


def run_all(max_p: int = 61) -> list[CheckResult]:
    checks = [
        lambda: check_trace_tables(max_p),
        lambda: check_class_number_identity(max_p),
        lambda: check_orbit_sizes(max_p),
        lambda: check_isomorphism_criterion(min(max_p, 23)),
        check_orthogonality,
        check_polya_vinogradov,
        check_character_expansion,
        check_path_equivalence,
    ]
    out = []
    for check in checks:
        t0 = time.perf_counter()
        res = check()
        res.seconds = time.perf_counter() - t0
        log.info("%s: %s (%d cases)", res.name, "ok" if res.passed else "FAILED", res.cases)
        out.append(res)
    return out


def summary_ok(results: list[CheckResult]) -> bool:
    return all(r.passed and r.cases > 0 for r in results)
