"""The average constant C_r, the comparison integral pi_{1/2}(x) and B(r)."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import sieve_primes
from .errors import DomainError


@dataclass(frozen=True)
class ConstantValue:
    r: int
    value: float
    truncation_prime: int
    tail_bound: float
    truncated: float  # the product over l <= truncation_prime


@dataclass(frozen=True)
class ComparisonPoint:
    x: float
    pi_half: float
    quadrature_error: float


def euler_factor(l: int, r: int, inverted: bool = False) -> float:
    """Local factor at the prime l; every l divides r = 0.

    ``inverted`` uses (1 - 1/l^2)^(-1) at l | r, the normalisation under
    which the class-number sums of ``lemma3_partial_sum`` converge to C_r
    for even r as well.
    """
    if r % l == 0:
        f = 1.0 - 1.0 / (l * l)
        return 1.0 / f if inverted else f
    return l * (l * l - l - 1) / ((l - 1) * (l * l - 1))


def euler_product_Cr(
    r: int, truncation_prime: int = 10**6, inverted: bool = False
) -> ConstantValue:
    """C_r = (2/pi) prod_{l | r} (1 - 1/l^2) prod_{l not | r} l(l^2-l-1)/((l-1)(l^2-1)).

    The product is evaluated as a sum of logs. For r = 0 every factor is
    1 - 1/l^2, so the exact value (2/pi)/zeta(2) = 12/pi^3 is returned and
    the truncated product is kept in ``truncated`` for comparison
    (pi/3 = (2/pi) zeta(2) with ``inverted``).
    """
    if truncation_prime < 3:
        raise DomainError("truncation prime must be at least 3")
    logs = [math.log(euler_factor(l, r, inverted)) for l in sieve_primes(truncation_prime)]
    truncated = 2.0 / math.pi * math.exp(math.fsum(logs))
    # |log factor| <= 2/l^2 for every l, and sum_{n > T} 2/n^2 < 2/T.
    tail = 2.0 / truncation_prime
    if r == 0:
        value = math.pi / 3.0 if inverted else 12.0 / math.pi**3
    else:
        value = truncated
    return ConstantValue(r, value, truncation_prime, tail, truncated)


def B_of_r(r: int) -> float:
    """max(3, r, r^2/4); sums run over primes strictly above it."""
    return max(3.0, float(r), r * r / 4.0)


def _simpson(a, fa, fm, b, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a: float, b: float, rel_tol: float = 1e-12, max_depth: int = 60):
    """Integrate a smooth f over [a, b]; returns (value, error estimate)."""
    if a == b:
        return 0.0, 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(a, fa, fm, b, fb)
    tol = rel_tol * abs(whole) if whole else rel_tol
    total, err = [], []
    stack = [(a, fa, m, fm, b, fb, whole, tol, 0)]
    while stack:
        a, fa, m, fm, b, fb, whole, tol, depth = stack.pop()
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = _simpson(a, fa, flm, m, fm)
        right = _simpson(m, fm, frm, b, fb)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * tol:
            total.append(left + right + delta / 15.0)
            err.append(abs(delta) / 15.0)
        else:
            stack.append((m, fm, rm, frm, b, fb, right, tol / 2, depth + 1))
            stack.append((a, fa, lm, flm, m, fm, left, tol / 2, depth + 1))
    return math.fsum(total), math.fsum(err)


def _half_integrand(u: float) -> float:
    # dt / (2 sqrt(t) log t) with t = u^2.
    return 0.5 / math.log(u)


def pi_half_between(lo: float, hi: float) -> tuple[float, float]:
    """Integral of dt/(2 sqrt(t) log t) over [lo, hi], lo >= 2."""
    if lo < 2 or hi < lo:
        raise DomainError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    return adaptive_simpson(_half_integrand, math.sqrt(lo), math.sqrt(hi))


def pi_half(x: float) -> ComparisonPoint:
    if x < 2:
        raise DomainError(f"pi_half needs x >= 2, got {x}")
    value, err = pi_half_between(2.0, x)
    return ComparisonPoint(x, value, err)


@dataclass(frozen=True)
class ClassNumberSum:
    x: int
    r: int
    total: float
    prediction: float
    ratio: float
    prime_count: int


def lemma3_partial_sum(
    x: int, r: int, truncation_prime: int = 10**5, inverted: bool = False
) -> ClassNumberSum:
    """sum_{B(r) < p <= x} H(r^2 - 4p) / (2p) against C_r * pi_{1/2}(x)."""
    from .classnum import H_rp, primes_above_B

    primes = primes_above_B(x, r)
    total = math.fsum(H_rp(r, p) / (2 * p) for p in primes)
    prediction = euler_product_Cr(r, truncation_prime, inverted).value * pi_half(max(x, 2)).pi_half
    ratio = total / prediction if primes and prediction else 0.0
    return ClassNumberSum(x, r, total, prediction, ratio, len(primes))
