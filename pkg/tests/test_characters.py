import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langtrotter.arith import legendre
from langtrotter.characters import (
    box_count_via_characters,
    build_character_table,
    char_sum,
    fourth_moment_ratio,
    is_supported_modulus,
    lemma5_check,
    polya_vinogradov_scan,
    principal_character,
    supported_moduli,
)
from langtrotter.curves import SINGULAR, hasse_range, trace_table
from langtrotter.errors import DomainError, InvalidModulusError

import oracles


def test_q5_matches_generator_construction():
    t = build_character_table(5)
    assert t.phi == 4 and t.values.shape == (4, 5)
    assert np.allclose(t.values, np.array(oracles.characters_prime(5)))


@pytest.mark.parametrize("q", [3, 7, 11, 23, 101])
def test_prime_tables_against_oracle(q):
    assert np.allclose(build_character_table(q).values, np.array(oracles.characters_prime(q)))


def test_column_orthogonality_q7():
    t = build_character_table(7)
    col = t.values.sum(axis=0)
    assert abs(col[1] - 6) < 1e-12
    assert np.allclose(col[2:], 0) and col[0] == 0


def test_q15_crt():
    t = build_character_table(15)
    assert t.phi == 8 and len(t.labels) == 8
    c3, c5 = oracles.characters_prime(3), oracles.characters_prime(5)
    for i, (m1, m2) in enumerate(t.labels):
        want = [c3[m1][n % 3] * c5[m2][n % 5] for n in range(15)]
        assert np.allclose(t.values[i], want)


@pytest.mark.parametrize("q", [5, 13, 15, 35, 77])
def test_characters_are_multiplicative(q):
    t = build_character_table(q)
    for row in t.values:
        for a in range(q):
            for b in range(0, q, 3):
                assert abs(row[a * b % q] - row[a] * row[b]) < 1e-9
    assert np.allclose(principal_character(t), [math.gcd(n, q) == 1 for n in range(q)])


def test_supported_moduli():
    assert not is_supported_modulus(9)
    assert not is_supported_modulus(6)
    assert not is_supported_modulus(105)
    assert is_supported_modulus(35)
    assert supported_moduli(16) == [3, 5, 7, 11, 13, 15]
    with pytest.raises(InvalidModulusError):
        build_character_table(45)


def test_char_sum_examples():
    t7 = build_character_table(7)
    assert abs(char_sum(principal_character(t7), 7) - 6) < 1e-12
    for q in (7, 15):
        t = build_character_table(q)
        for i, row in enumerate(t.values):
            if i != t.principal_index:
                assert abs(char_sum(row, q)) < 1e-9
    leg = np.array([legendre(n, 7) for n in range(7)], dtype=complex)
    assert abs(char_sum(leg, 3) - 1) < 1e-12
    legendre_row = next(row for row in t7.values if np.allclose(row, leg))
    assert abs(char_sum(legendre_row, 3) - 1) < 1e-12


def test_orthogonality_examples():
    assert lemma5_check(7, np.zeros(10)) == (0.0, 0.0)
    lhs, rhs = lemma5_check(5, np.ones(20))
    assert abs(lhs - rhs) <= 1e-9 * rhs


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([7, 13, 15]),
    st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False), min_size=1, max_size=60),
)
def test_orthogonality_random(q, coeffs):
    lhs, rhs = lemma5_check(q, coeffs)
    assert abs(lhs - rhs) <= 1e-9 * max(rhs, 1.0)


def test_fourth_moment_examples():
    moment, _ = fourth_moment_ratio(3, 1)
    assert abs(moment - 1) < 1e-12
    moment, _ = fourth_moment_ratio(13, 13)
    assert moment < 1e-20


def test_polya_vinogradov_examples():
    worst, bound = polya_vinogradov_scan(5)
    t = build_character_table(5)
    brute = max(
        abs(sum(t.values[i][1 : N + 1])) for i in range(1, 4) for N in range(1, 6)
    )
    assert abs(worst - brute) < 1e-12
    worst, bound = polya_vinogradov_scan(13)
    assert worst <= bound == math.sqrt(13) * math.log(13)


def _direct_box_count(p, r, A, B):
    t = trace_table(p)
    return sum(
        1
        for a in range(-A, A + 1)
        for b in range(-B, B + 1)
        if a % p and b % p and t[a % p, b % p] == r and t[a % p, b % p] != SINGULAR
    )


@pytest.mark.parametrize("p,r,A,B", [(13, 2, 13, 13), (17, 1, 30, 25), (17, -4, 30, 25)])
def test_box_count_examples(p, r, A, B):
    d = box_count_via_characters(p, r, A, B)
    want = _direct_box_count(p, r, A, B)
    assert d.direct == want
    assert abs(d.total - want) < 1e-6
    assert abs(d.M + d.E1 + d.E2 - d.total) < 1e-9
    assert abs(d.M - d.main_term_closed_form) < 1e-6
    assert d.max_imag < 1e-6


def test_box_count_all_r_p29():
    for r in range(-hasse_range(29), hasse_range(29) + 1):
        d = box_count_via_characters(29, r, 40, 40)
        assert abs(d.total - d.direct) < 1e-6


def test_box_count_rejects():
    with pytest.raises(DomainError):
        box_count_via_characters(13, 2, 0, 0)
    with pytest.raises(InvalidModulusError):
        box_count_via_characters(11, 2, 5, 5)
