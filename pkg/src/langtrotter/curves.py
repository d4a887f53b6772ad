"""Short Weierstrass curves y^2 = x^3 + ax + b over F_p, p > 3.

Traces are point counts via Legendre sums. For whole-field statistics the
trace of every (a, b) is derived from the O(p) curves (c, c): a curve with
ab != 0 is the quadratic twist of (c, c), c = a^3/b^2, by a/b, so

    trace(a, b) = (ab/p) * trace(c, c).

Only the curves with a = 0 or b = 0 (j = 0, 1728) are counted separately.
That makes a full table O(p^2) instead of O(p^3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .arith import check_prime, legendre_table, primitive_root
from .errors import (
    CriterionInapplicableError,
    DomainError,
    InvalidModulusError,
    SingularCurveError,
)

SINGULAR = _kernels.SINGULAR


def _check_field(p: int) -> None:
    if p <= 3:
        raise InvalidModulusError(f"curves over F_{p} are not supported (need p > 3)")
    check_prime(p)


def hasse_range(p: int) -> int:
    """Largest integer r with r^2 <= 4p."""
    return math.isqrt(4 * p)


@dataclass(frozen=True)
class CurveParams:
    p: int
    a: int
    b: int

    def __post_init__(self):
        _check_field(self.p)
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    @property
    def discriminant(self) -> int:
        """4a^3 + 27b^2 mod p (zero iff singular)."""
        return (4 * self.a**3 + 27 * self.b**2) % self.p

    @property
    def singular(self) -> bool:
        return self.discriminant == 0

    def require_nonsingular(self) -> None:
        if self.singular:
            raise SingularCurveError(f"y^2 = x^3 + {self.a}x + {self.b} is singular mod {self.p}")


@dataclass(frozen=True)
class TraceResult:
    p: int
    r: int

    @property
    def points(self) -> int:
        return self.p + 1 - self.r


@dataclass
class TraceDistribution:
    p: int
    counts: dict[int, int]
    membership_r: int | None = None
    membership: np.ndarray | None = field(default=None, repr=False)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class IsoClassSummary:
    p: int
    r: int
    class_count: int
    nonzero_class_count: int
    representatives: list[tuple[int, int]]
    orbit_sizes: list[int]


@lru_cache(maxsize=64)
def _legendre_cached(p: int) -> np.ndarray:
    table = legendre_table(p)
    table.flags.writeable = False
    return table


def trace_of_frobenius(c: CurveParams) -> TraceResult:
    c.require_nonsingular()
    leg = _legendre_cached(c.p)
    r = _kernels.batch_traces(
        c.p, np.array([c.a], dtype=np.int64), np.array([c.b], dtype=np.int64), leg
    )[0]
    return TraceResult(c.p, int(r))


def orbit(c: CurveParams) -> set[tuple[int, int]]:
    """All (mu^4 a, mu^6 b), mu in F_p^*: the F_p-isomorphism class of c."""
    p = c.p
    return {(pow(m, 4, p) * c.a % p, pow(m, 6, p) * c.b % p) for m in range(1, p)}


def orbit_size(c: CurveParams) -> int:
    """Size of the isomorphism class of c, from its j = 0 / 1728 / generic case."""
    c.require_nonsingular()
    p = c.p
    if c.a == 0 and p % 3 == 1:
        return (p - 1) // 6
    if c.b == 0 and p % 4 == 1:
        return (p - 1) // 4
    return (p - 1) // 2


def are_isomorphic_direct(c1: CurveParams, c2: CurveParams) -> bool:
    """Search for m with c2 = (m^4 a, m^6 b)."""
    if c1.p != c2.p:
        raise DomainError(f"curves over different fields ({c1.p}, {c2.p})")
    c1.require_nonsingular()
    c2.require_nonsingular()
    p = c1.p
    for m in range(1, p):
        m2 = m * m % p
        m4 = m2 * m2 % p
        if m4 * c1.a % p == c2.a and m4 * m2 * c1.b % p == c2.b:
            return True
    return False


def are_isomorphic_criterion(c1: CurveParams, c2: CurveParams) -> bool:
    """Residue criterion for curves whose four coefficients are all units.

    p = 1 mod 4: c/a is a fourth power and (c/a)^3 = (d/b)^2.
    p = 3 mod 4: c/a and d/b are squares and (c/a)^3 = (d/b)^2.
    """
    if c1.p != c2.p:
        raise DomainError(f"curves over different fields ({c1.p}, {c2.p})")
    p = c1.p
    a, b, c, d = c1.a, c1.b, c2.a, c2.b
    if a * b * c * d % p == 0:
        raise CriterionInapplicableError("criterion needs a, b, c, d all nonzero mod p")
    c1.require_nonsingular()
    c2.require_nonsingular()
    s = c * pow(a, -1, p) % p
    t = d * pow(b, -1, p) % p
    if pow(s, 3, p) != t * t % p:
        return False
    if p % 4 == 1:
        return pow(s, (p - 1) >> 2, p) == 1
    half = (p - 1) >> 1
    return pow(s, half, p) == 1 and pow(t, half, p) == 1


def _edge_traces(p: int, leg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Traces of (a, 0) and (0, b) for a, b in [1, p).

    (a, 0) ~ (mu^4 a, 0), so with a = g^i the trace depends on i mod
    gcd(4, p - 1) only; likewise (0, b) on j mod gcd(6, p - 1).
    """
    g = primitive_root(p)
    n = p - 1
    powers = np.empty(n, dtype=np.int64)
    powers[0] = 1
    for k in range(1, n):
        powers[k] = powers[k - 1] * g % p
    ind = np.empty(p, dtype=np.int64)
    ind[powers] = np.arange(n)
    units = np.arange(1, p)
    out = []
    for k, put in ((math.gcd(4, n), 0), (math.gcd(6, n), 1)):
        reps = powers[:k]
        coeffs = [reps, np.zeros(k, dtype=np.int64)]
        if put:
            coeffs.reverse()
        small = _kernels.batch_traces(p, coeffs[0], coeffs[1], leg)
        out.append(small[ind[units] % k])
    return out[0], out[1]


def compute_trace_table(p: int, method: str = "fast") -> np.ndarray:
    """int16 array T with T[a, b] = trace of (a, b), SINGULAR where singular.

    ``method="brute"`` counts points on all p^2 curves (O(p^3)); it exists
    as the independent check of the twist route.
    """
    _check_field(p)
    leg = _legendre_cached(p)
    table = np.empty((p, p), dtype=np.int16)
    if method == "brute":
        a, b = np.divmod(np.arange(p * p, dtype=np.int64), p)
        table[:] = _kernels.batch_traces(p, a, b, leg).reshape(p, p)
        disc = (4 * a**3 + 27 * b**2) % p
        table.reshape(-1)[disc == 0] = SINGULAR
        return table
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")

    c = np.arange(p, dtype=np.int64)
    tau = _kernels.batch_traces(p, c, c, leg)
    # (c, c) is singular iff 4c + 27 = 0 (c = 0 never reaches the lookup).
    tau[-27 * pow(4, -1, p) % p] = SINGULAR
    _kernels.fill_trace_table(p, primitive_root(p), tau, table)
    along_a, along_b = _edge_traces(p, leg)
    table[1:, 0] = along_a
    table[0, 1:] = along_b
    table[0, 0] = SINGULAR
    return table


@lru_cache(maxsize=8)
def trace_table(p: int) -> np.ndarray:
    """Cached read-only fast-path trace table."""
    table = compute_trace_table(p)
    table.flags.writeable = False
    return table


def histogram_from_table(table: np.ndarray) -> dict[int, int]:
    R = hasse_range(table.shape[0])
    counts = _kernels.trace_histogram(np.ascontiguousarray(table), R)
    return {r - R: int(n) for r, n in enumerate(counts) if n}


def trace_distribution(
    p: int, membership_for: int | None = None, method: str = "fast"
) -> TraceDistribution:
    table = trace_table(p) if method == "fast" else compute_trace_table(p, method)
    member = None
    if membership_for is not None:
        member = table == membership_for
    return TraceDistribution(p, histogram_from_table(table), membership_for, member)


def _orbit_multipliers(p: int) -> tuple[np.ndarray, np.ndarray]:
    mu = np.arange(1, p, dtype=np.int64)
    mu2 = mu * mu % p
    mu4 = mu2 * mu2 % p
    return mu4, mu4 * mu2 % p


def partition_classes(p: int, pairs: np.ndarray) -> list[tuple[tuple[int, int], int]]:
    """Split nonsingular pairs (rows of an (n, 2) array) into isomorphism classes.

    Returns (lexicographically smallest member, orbit size) per class. The
    pairs must be a union of whole classes, e.g. all curves with one trace.
    """
    mu4, mu6 = _orbit_multipliers(p)
    seen = np.zeros((p, p), dtype=bool)
    classes = []
    for a, b in sorted(map(tuple, pairs.tolist())):
        if seen[a, b]:
            continue
        oa = mu4 * a % p
        ob = mu6 * b % p
        seen[oa, ob] = True
        classes.append(((a, b), len(np.unique(oa * p + ob))))
    return classes


def iso_classes_with_trace(p: int, r: int, table: np.ndarray | None = None) -> IsoClassSummary:
    _check_field(p)
    if r * r > 4 * p:
        raise DomainError(f"trace {r} is outside the Hasse interval for p = {p}")
    if table is None:
        table = trace_table(p)
    classes = partition_classes(p, np.argwhere(table == r))
    reps = [rep for rep, _ in classes if rep[0] and rep[1]]
    return IsoClassSummary(
        p=p,
        r=r,
        class_count=len(classes),
        nonzero_class_count=len(reps),
        representatives=reps,
        orbit_sizes=[size for _, size in classes],
    )


def special_class_count(p: int) -> int:
    """Classes containing a curve with a = 0 or b = 0 (at most 10)."""
    _check_field(p)
    units = np.arange(1, p, dtype=np.int64)
    zeros = np.zeros(p - 1, dtype=np.int64)
    pairs = np.concatenate([np.stack([zeros, units], 1), np.stack([units, zeros], 1)])
    return len(partition_classes(p, pairs))
