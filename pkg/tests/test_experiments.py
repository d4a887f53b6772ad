import json
import math
import random
from fractions import Fraction

import jsonschema
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from langtrotter import experiments
from langtrotter.analytic import B_of_r
from langtrotter.curves import iso_classes_with_trace
from langtrotter.errors import DomainError, ResourceError, SingularCurveError
from langtrotter.experiments import (
    ExperimentConfig,
    average_pi_r,
    box_residue_count,
    curve_pi_counts,
    curve_pi_r,
    exceptional_census,
    second_moment,
)
from langtrotter.schema import REPORT_SCHEMA

import oracles


def _oracle_counts(x, A, B, r):
    """pi^r per curve from memoised brute point counts."""
    cut = B_of_r(r)
    primes = [p for p in oracles.primes_upto(x) if p > cut]
    hit = {}
    for p in primes:
        hit[p] = {
            (a, b)
            for a in range(p)
            for b in range(p)
            if oracles.nonsingular(p, a, b) and oracles.trace(p, a, b) == r
        }
    out = np.zeros((2 * A + 1, 2 * B + 1), dtype=np.int64)
    for a in range(-A, A + 1):
        for b in range(-B, B + 1):
            out[a + A, b + B] = sum((a % p, b % p) in hit[p] for p in primes)
    return out


def test_box_residue_count_examples():
    assert box_residue_count(0, 5, 10) == 5
    assert box_residue_count(2, 5, 10) == 4
    with pytest.raises(DomainError):
        box_residue_count(0, 5, -1)


@given(st.sampled_from([5, 7, 11, 101]), st.integers(0, 500))
def test_box_residue_count_partition(p, A):
    counts = [box_residue_count(s, p, A) for s in range(p)]
    assert sum(counts) == 2 * A + 1
    assert counts == [sum(1 for a in range(-A, A + 1) if a % p == s) for s in range(p)]


def test_config_validation():
    with pytest.raises(DomainError):
        ExperimentConfig(50, 0, 0, 1).validate()
    with pytest.raises(DomainError):
        ExperimentConfig(4, 5, 5, 1).validate()
    with pytest.raises(DomainError):
        ExperimentConfig(50, 5, 5, 1, threads=0).validate()
    assert ExperimentConfig(100, 20, 20, 1).validate() == [
        "AB > x^(3/2) = 1000 does not hold"
    ]
    assert len(ExperimentConfig(100, 5, 50, 1).validate()) == 2
    assert len(ExperimentConfig(100, 11, 100, 1).validate()) == 0
    assert ExperimentConfig(100, 40, 40, 1).validate() == []


@pytest.mark.parametrize("r", [0, 1, 2, -1, 3])
def test_average_path_equivalence(backend, r):
    A, B = 25, 18
    rep = average_pi_r(ExperimentConfig(50, A, B, r))
    want = _oracle_counts(50, A, B, r).sum()
    assert rep.mean == want / (4 * A * B)
    assert sum(row.hits for row in rep.per_prime_rows) == want


def test_average_empty_prime_range():
    rep = average_pi_r(ExperimentConfig(20, 10, 10, 9))
    assert rep.mean == 0 and rep.per_prime_rows == []


def test_average_rows_and_csv():
    rep = average_pi_r(ExperimentConfig(30, 10, 10, 1))
    assert [row.p for row in rep.per_prime_rows] == [5, 7, 11, 13, 17, 19, 23, 29]
    lines = rep.to_csv().splitlines()
    assert lines[0] == "p,N_r,H_rp,contrib"
    assert len(lines) == 9
    for row in rep.per_prime_rows:
        assert row.N_r == sum(iso_classes_with_trace(row.p, 1).orbit_sizes)
        assert row.H_rp == iso_classes_with_trace(row.p, 1).class_count


def test_curve_pi_r_examples():
    assert curve_pi_r(1, 1, 10, 5) == 0
    assert curve_pi_r(1, 0, 5, 2) == 1
    assert curve_pi_r(1, 0, 5, 2, exclude_divisors=True) == 1
    assert curve_pi_r(5, 0, 5, 2, exclude_divisors=True) == 0
    with pytest.raises(SingularCurveError):
        curve_pi_r(-3, 2, 50, 1)


def test_curve_pi_r_against_tables():
    rng = random.Random(7)
    x, r = 200, 1
    cfg_A = 60
    counts = curve_pi_counts(ExperimentConfig(x, cfg_A, cfg_A, r))
    for _ in range(100):
        a, b = rng.randint(-cfg_A, cfg_A), rng.randint(-cfg_A, cfg_A)
        if 4 * a**3 + 27 * b * b == 0:
            continue
        assert curve_pi_r(a, b, x, r) == counts[a + cfg_A, b + cfg_A]
        assert curve_pi_r(a, b, x, r) == oracles.curve_pi(a, b, x, r, B_of_r(r))


def test_curve_counts_against_oracle(backend):
    counts = curve_pi_counts(ExperimentConfig(50, 12, 15, 2, threads=3))
    assert np.array_equal(counts, _oracle_counts(50, 12, 15, 2))


def test_second_moment_against_oracle():
    cfg = ExperimentConfig(50, 10, 10, 1)
    rep = second_moment(cfg)
    pis = _oracle_counts(50, 10, 10, 1).ravel()
    want = math.fsum((float(v) - rep.prediction) ** 2 for v in pis) / 400
    assert math.isclose(rep.second_moment, want, rel_tol=1e-14)
    exact = sum(Fraction((float(v) - rep.prediction) ** 2) for v in pis) / 400
    assert rep.second_moment == float(exact)
    assert rep.mean == pis.sum() / 400
    # Cauchy-Schwarz
    assert rep.second_moment >= (rep.mean - rep.prediction) ** 2 - 1e-12


def test_second_moment_rejects_empty_box():
    with pytest.raises(DomainError):
        second_moment(ExperimentConfig(50, 0, 0, 1))


def test_census_threshold_infinite_and_monotone():
    cfg = ExperimentConfig(200, 40, 40, 1)
    assert exceptional_census(cfg, threshold=math.inf).exceptional_count == 0
    loose = exceptional_census(cfg)
    tight = exceptional_census(ExperimentConfig(200, 40, 40, 1, c=3.0, d=7.0))
    assert tight.diagnostics["fraction"] >= loose.diagnostics["fraction"]
    assert loose.exceptional_count <= 81 * 81
    with pytest.raises(DomainError):
        exceptional_census(cfg, d=2.0)


def test_reports_validate_against_schema():
    cfg = ExperimentConfig(60, 12, 12, 1)
    for rep in (
        average_pi_r(cfg, with_timing=True),
        second_moment(cfg),
        exceptional_census(cfg, threshold=math.inf),
    ):
        doc = json.loads(rep.to_json())
        jsonschema.validate(doc, REPORT_SCHEMA)
        assert json.loads(json.dumps(doc)) == doc


@pytest.mark.parametrize("threads", [2, 4, 8])
def test_thread_count_does_not_change_reports(threads):
    base = ExperimentConfig(120, 30, 30, 1)
    other = ExperimentConfig(120, 30, 30, 1, threads=threads)
    assert average_pi_r(base).to_json() == average_pi_r(other).to_json()
    assert second_moment(base).to_json() == second_moment(other).to_json()


def test_cache_round_trip_gives_same_report(tmp_path):
    cfg = ExperimentConfig(80, 20, 20, 2, cache_dir=str(tmp_path))
    first = average_pi_r(cfg).to_json()
    assert list(tmp_path.glob("p_*.bin"))
    second = average_pi_r(cfg).to_json()
    for f in tmp_path.glob("p_*.bin"):
        f.unlink()
    third = average_pi_r(cfg).to_json()
    assert first == second == third


def test_resource_limits(monkeypatch):
    with pytest.raises(ResourceError):
        average_pi_r(ExperimentConfig(experiments.MAX_TABLE_PRIME + 1, 10, 10, 1))
    monkeypatch.setattr(experiments, "MAX_BOX_CURVES", 100)
    with pytest.raises(ResourceError):
        curve_pi_counts(ExperimentConfig(50, 10, 10, 1))


def test_error_budget_names():
    rep = average_pi_r(ExperimentConfig(60, 12, 12, 1))
    assert [e["name"] for e in rep.error_budget] == [
        "(1/A+1/B) x log x",
        "x^(5/4) log^3 x / sqrt(AB)",
        "sqrt(x) / log^c x",
    ]
    assert rep.timing is None
