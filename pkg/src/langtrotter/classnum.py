"""Form class numbers h(d) and Kronecker class numbers H(D) for D < 0."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .analytic import B_of_r
from .arith import sieve_primes
from .errors import InvalidDiscriminantError

# Memo shared by kronecker_H and the experiment cache. Entries are only ever
# added with identical values, so concurrent inserts are harmless.
_H_MEMO: dict[int, int] = {}
_h_memo: dict[int, int] = {}


@dataclass(frozen=True)
class FormClassCount:
    d: int
    h: int


@dataclass(frozen=True)
class ClassNumberRecord:
    D: int
    H: int
    decomposition: tuple[tuple[int, int, int], ...]  # (conductor f, D/f^2, h(D/f^2))


def _check_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminantError(f"{d} is not a negative discriminant (= 0, 1 mod 4)")


def _h(d: int) -> int:
    h = _h_memo.get(d)
    if h is None:
        h = _h_memo[d] = int(_kernels.class_number(d))
    return h


def form_class_number(d: int) -> FormClassCount:
    """Count primitive reduced forms (a, b, c), b^2 - 4ac = d.

    Reduced means |b| <= a <= c, with b >= 0 when |b| = a or a = c. No
    weighting of the forms with extra automorphisms at d = -3, -4.
    """
    _check_discriminant(d)
    return FormClassCount(d, _h(d))


def conductors(D: int) -> list[int]:
    """All f >= 1 with f^2 | D and D/f^2 a discriminant."""
    return [
        f
        for f in range(1, math.isqrt(-D) + 1)
        if D % (f * f) == 0 and (D // (f * f)) % 4 in (0, 1)
    ]


def kronecker_H(D: int) -> ClassNumberRecord:
    _check_discriminant(D)
    parts = tuple((f, D // (f * f), _h(D // (f * f))) for f in conductors(D))
    H = sum(h for _, _, h in parts)
    _H_MEMO[D] = H
    return ClassNumberRecord(D, H, parts)


def H_value(D: int) -> int:
    """Memoised H(D) without the decomposition."""
    H = _H_MEMO.get(D)
    if H is None:
        H = kronecker_H(D).H
    return H


def H_rp(r: int, p: int) -> int:
    return H_value(r * r - 4 * p)


def primes_above_B(x: int, r: int) -> list[int]:
    """Primes p with B(r) < p <= x."""
    if x < 2:
        return []
    cut = B_of_r(r)
    return [p for p in sieve_primes(x) if p > cut]


@dataclass
class GrowthRow:
    name: str
    total: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.total / self.bound if self.bound else 0.0


def lemma8_diagnostics(x: int, r: int) -> list[GrowthRow]:
    """The four H_{r,p} sums over B(r) < p <= x against their growth rates.

    Rows: sum H^(1/2) vs x^(5/4), sum H/sqrt(p) vs x, sum H/p vs sqrt(x),
    sum H/p^2 vs 1.
    """
    primes = primes_above_B(x, r)
    H = [H_rp(r, p) for p in primes]
    sums = [
        math.fsum(math.sqrt(h) for h in H),
        math.fsum(h / math.sqrt(p) for h, p in zip(H, primes)),
        math.fsum(h / p for h, p in zip(H, primes)),
        math.fsum(h / (p * p) for h, p in zip(H, primes)),
    ]
    bounds = [x**1.25, float(x), math.sqrt(x), 1.0]
    names = ["sqrt_H", "H_over_sqrt_p", "H_over_p", "H_over_p2"]
    return [GrowthRow(n, s, b) for n, s, b in zip(names, sums, bounds)]
