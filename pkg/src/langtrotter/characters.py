"""Dirichlet characters mod q (q prime, or q = q1*q2 with q1 != q2 odd primes).

Characters are dense complex value tables over [0, q). For prime q the
character with label m sends the smallest primitive root g to
exp(2 pi i m / (q - 1)); for q = q1*q2 the label is a pair (m1, m2) and the
value is the product of the two prime-modulus characters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import check_prime, factorize, is_prime, primitive_root
from .errors import DomainError, InvalidModulusError


@dataclass(frozen=True)
class CharacterTable:
    q: int
    phi: int
    values: np.ndarray = field(repr=False)  # shape (phi, q)
    labels: tuple
    principal_index: int
    generators: tuple[int, ...]
    index: np.ndarray = field(repr=False)  # discrete log base g (prime q only; -1 at 0)

    @property
    def characters(self) -> np.ndarray:
        return self.values

    def label_index(self, label) -> int:
        return self.labels.index(label)


def _discrete_log(p: int, g: int) -> np.ndarray:
    ind = np.full(p, -1, dtype=np.int64)
    x = 1
    for k in range(p - 1):
        ind[x] = k
        x = x * g % p
    return ind


def _prime_values(p: int, ind: np.ndarray) -> np.ndarray:
    n = p - 1
    m = np.arange(n, dtype=np.int64)[:, None]
    expo = (m * ind[None, :]) % n
    vals = np.exp(2j * np.pi * expo / n)
    vals[:, 0] = 0
    return vals


def is_supported_modulus(q: int) -> bool:
    if q < 3:
        return False
    if is_prime(q):
        return True
    f = factorize(q)
    return len(f) == 2 and all(e == 1 for e in f.values()) and 2 not in f


def supported_moduli(limit: int) -> list[int]:
    return [q for q in range(3, limit + 1) if is_supported_modulus(q)]


@lru_cache(maxsize=256)
def build_character_table(q: int) -> CharacterTable:
    if not is_supported_modulus(q):
        raise InvalidModulusError(
            f"characters are built for primes >= 3 and products of two distinct odd primes, not {q}"
        )
    if is_prime(q):
        check_prime(q)
        g = primitive_root(q)
        ind = _discrete_log(q, g)
        vals = _prime_values(q, ind)
        vals.flags.writeable = False
        return CharacterTable(q, q - 1, vals, tuple(range(q - 1)), 0, (g,), ind)

    q1, q2 = sorted(factorize(q))
    t1, t2 = build_character_table(q1), build_character_table(q2)
    n = np.arange(q)
    vals = (t1.values[:, None, n % q1] * t2.values[None, :, n % q2]).reshape(-1, q)
    vals.flags.writeable = False
    labels = tuple((m1, m2) for m1 in t1.labels for m2 in t2.labels)
    gens = t1.generators + t2.generators
    return CharacterTable(
        q, t1.phi * t2.phi, vals, labels, 0, gens, np.full(q, -1, dtype=np.int64)
    )


def principal_character(table: CharacterTable) -> np.ndarray:
    return table.values[table.principal_index]


def char_sum(chi: np.ndarray, N: int) -> complex:
    """sum_{1 <= n <= N} chi(n) for a value row of length q."""
    q = len(chi)
    full, rest = divmod(N, q)
    total = full * chi.sum() + chi[1 : rest + 1].sum()
    return complex(total)


def lemma5_check(q: int, coefficients) -> tuple[float, float]:
    """Both sides of the large-sieve style orthogonality identity.

    lhs = sum_chi |sum_{n <= N} a_n chi(n)|^2
    rhs = phi(q) sum_{(a, q) = 1} |sum_{n = a mod q} a_n|^2
    where coefficients[0] is a_1.
    """
    table = build_character_table(q)
    a = np.asarray(coefficients, dtype=complex)
    res = np.arange(1, len(a) + 1) % q
    sums = table.values[:, res] @ a
    lhs = float(np.sum(np.abs(sums) ** 2))
    buckets = np.zeros(q, dtype=complex)
    np.add.at(buckets, res, a)
    coprime = np.gcd(np.arange(q), q) == 1
    rhs = float(table.phi * np.sum(np.abs(buckets[coprime]) ** 2))
    return lhs, rhs


def _prefix_sums(table: CharacterTable, N: int) -> np.ndarray:
    """sum_{n <= N} chi(n) for every character."""
    q = table.q
    full, rest = divmod(N, q)
    return full * table.values.sum(axis=1) + table.values[:, 1 : rest + 1].sum(axis=1)


def fourth_moment_ratio(q: int, N: int) -> tuple[float, float]:
    """(sum_{chi != chi_0} |sum_{n <= N} chi(n)|^4,  that / (N^2 q log^6 q))."""
    table = build_character_table(q)
    s = np.delete(_prefix_sums(table, N), table.principal_index)
    moment = float(np.sum(np.abs(s) ** 4))
    scale = N * N * q * math.log(q) ** 6
    return moment, (moment / scale if scale else 0.0)


def polya_vinogradov_scan(q: int) -> tuple[float, float]:
    """Max of |sum_{n <= N} chi(n)| over non-principal chi and 1 <= N <= q,
    with the bound sqrt(q) log q."""
    table = build_character_table(q)
    vals = np.delete(table.values, table.principal_index, axis=0)
    worst = float(np.abs(np.cumsum(vals[:, 1:], axis=1)).max()) if len(vals) else 0.0
    return worst, math.sqrt(q) * math.log(q)


@dataclass
class BoxCountDecomposition:
    p: int
    r: int
    A: int
    B: int
    total: float
    M: float
    E1: float
    E2: float
    direct: int
    nonzero_classes: int
    main_term_closed_form: float  # I * #{a coprime} * #{b coprime} / (2(p-1))
    max_imag: float

    @property
    def residual(self) -> float:
        return abs(self.total - self.direct)


def _box_residue_counts(p: int, A: int) -> np.ndarray:
    return np.bincount(np.arange(-A, A + 1) % p, minlength=p).astype(np.int64)


def box_count_via_characters(p: int, r: int, A: int, B: int) -> BoxCountDecomposition:
    """Count |a| <= A, |b| <= B with p not dividing ab and trace r, via characters.

    Uses a representative (u_j, v_j) of each class with u_j v_j != 0 and
    detects isomorphism to it by the quartic symbol of a/u_j (k = 1..4) and
    the full character sum over a^3 u_j^-3 b^-2 v_j^2. The (k, chi) terms are
    split by whether psi^k chi^3 and chi^2 are principal: both (M), one
    (E1), neither (E2).
    """
    from .curves import SINGULAR, iso_classes_with_trace, trace_table

    check_prime(p)
    if p % 4 != 1:
        raise InvalidModulusError(f"the character expansion is implemented for p = 1 mod 4, got {p}")
    if A < 1 or B < 1:
        raise DomainError("box half-widths must be at least 1")
    table = build_character_table(p)
    summary = iso_classes_with_trace(p, r)
    n = p - 1
    quarter = n // 4
    ind = table.index

    cnt_a = _box_residue_counts(p, A)
    cnt_b = _box_residue_counts(p, B)
    sum_a = table.values @ cnt_a  # label t -> sum_{|a| <= A} chi_t(a)
    sum_b = table.values @ cnt_b

    reps = np.array(summary.representatives, dtype=np.int64).reshape(-1, 2)
    iu, iv = ind[reps[:, 0]], ind[reps[:, 1]]
    zeta = np.exp(2j * np.pi * np.arange(n) / n)

    M = E1 = E2 = 0j
    for k in range(1, 5):
        for m in range(n):
            coef = zeta[((-k * quarter - 3 * m) * iu + 2 * m * iv) % n].sum()
            ta = (k * quarter + 3 * m) % n
            tb = (-2 * m) % n
            term = coef * sum_a[ta] * sum_b[tb]
            p1, p2 = ta == 0, tb == 0
            if p1 and p2:
                M += term
            elif p1 or p2:
                E1 += term
            else:
                E2 += term
    scale = 4 * n
    M, E1, E2 = M / scale, E1 / scale, E2 / scale
    total = M + E1 + E2

    traces = trace_table(p)
    hit = (traces == r) & (traces != SINGULAR)
    hit[0, :] = False
    hit[:, 0] = False
    direct = int(cnt_a @ hit.astype(np.int64) @ cnt_b)
    I = summary.nonzero_class_count
    closed = I * (cnt_a[1:].sum()) * (cnt_b[1:].sum()) / (2 * n)
    return BoxCountDecomposition(
        p=p,
        r=r,
        A=A,
        B=B,
        total=float(total.real),
        M=float(M.real),
        E1=float(E1.real),
        E2=float(E2.real),
        direct=direct,
        nonzero_classes=I,
        main_term_closed_form=float(closed),
        max_imag=float(max(abs(x.imag) for x in (M, E1, E2, total))),
    )
