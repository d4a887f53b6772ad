"""Primes, inverses and residue symbols modulo a prime p < 2**31."""
from __future__ import annotations

import math
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from .errors import DomainError, EmptyRangeError, InvalidModulusError, NoInverseError

if TYPE_CHECKING:
    from .characters import CharacterTable

MAX_MODULUS = 2**31

# Exact fourth roots of unity indexed by exponent mod 4.
UNIT_ROOTS = (1 + 0j, 1j, -1 + 0j, -1j)


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit, ascending."""
    if limit < 2:
        raise EmptyRangeError(f"no primes below {limit}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for n in range(2, math.isqrt(limit) + 1):
        if flags[n]:
            flags[n * n :: n] = False
    return np.flatnonzero(flags).tolist()


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    # Deterministic Miller-Rabin for n < 3.4e14.
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in (2, 3, 5, 7, 11, 13, 17):
        if w % n == 0:
            continue
        y = pow(w, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int, *, odd: bool = True) -> None:
    if p >= MAX_MODULUS:
        raise InvalidModulusError(f"modulus {p} exceeds 2**31")
    if not is_prime(p) or (odd and p == 2):
        raise InvalidModulusError(f"{p} is not an {'odd ' if odd else ''}prime")


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=1024)
def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^*."""
    check_prime(p, odd=False)
    if p == 2:
        return 1
    cofactors = [(p - 1) // l for l in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, e, p) != 1 for e in cofactors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def mod_inv(a: int, p: int) -> int:
    check_prime(p, odd=False)
    if a % p == 0:
        raise NoInverseError(f"{a} is not invertible mod {p}")
    return pow(a, -1, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    check_prime(p)
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def legendre_table(p: int) -> np.ndarray:
    """int8 array L with L[n] = (n/p) for 0 <= n < p."""
    table = np.full(p, -1, dtype=np.int8)
    x = np.arange(p, dtype=np.int64)
    table[x * x % p] = 1
    table[0] = 0
    return table


def quartic_symbol(a: int, p: int, table: CharacterTable | None = None) -> complex:
    """Biquadratic residue symbol (a/p)_4 for p = 1 mod 4.

    Normalised so that the table's primitive root maps to i. Without a
    table the smallest primitive root is used, which is what
    ``build_character_table`` picks as well.
    """
    check_prime(p)
    if p % 4 != 1:
        raise InvalidModulusError(f"quartic symbol needs p = 1 mod 4, got {p}")
    if a % p == 0:
        return 0j
    if table is not None:
        if table.q != p:
            raise InvalidModulusError(f"table is for modulus {table.q}, not {p}")
        return UNIT_ROOTS[int(table.index[a % p]) % 4]
    g = primitive_root(p)
    # a^((p-1)/4) = g^(ind(a)(p-1)/4) = i^ind(a) under g -> i.
    t = pow(a % p, (p - 1) // 4, p)
    gi = pow(g, (p - 1) // 4, p)
    for k in range(4):
        if pow(gi, k, p) == t:
            return UNIT_ROOTS[k]
    raise AssertionError("unreachable")


def is_quartic_residue(a: int, p: int) -> bool:
    check_prime(p)
    if p % 4 != 1:
        raise InvalidModulusError(f"quartic residues are tested for p = 1 mod 4, got {p}")
    if a % p == 0:
        raise DomainError(f"{p} divides {a}")
    return pow(a % p, (p - 1) // 4, p) == 1
