"""Verification suites, oracles, reports and the Monte Carlo layer."""

import dataclasses
from fractions import Fraction as F

import pytest

from probstirling.prob import prob_triangle, sj_moment
from probstirling.randomvars import RandomVar
from probstirling.special import triangle
from probstirling.verify import (
    check_orthogonality,
    eq_identities_pass,
    identity_suite,
    lah_closed,
    limit_suite,
    mc_check,
    moment_oracle,
    sample_rv,
    stirling1_deg_oracle,
    stirling1_oracle,
    stirling2_deg_incl_excl,
    stirling2_oracle,
    sum_power_moment,
)

LAM = F(1, 3)


# -- oracles ---------------------------------------------------------------------

def test_stirling_oracle_known_rows():
    s1, s2 = stirling1_oracle(5), stirling2_oracle(5)
    assert list(s1[4]) == [0, -6, 11, -6, 1]
    assert list(s2[4]) == [0, 1, 7, 6, 1]
    assert list(s2[5]) == [0, 1, 15, 25, 10, 1]


def test_degenerate_oracles_match_engine_tables():
    lam = F(1, 2)
    t1, t2 = triangle("s1", lam, 7), triangle("s2", lam, 7)
    deg1 = stirling1_deg_oracle(7, lam)
    for n in range(8):
        for k in range(n + 1):
            assert deg1[n][k] == t1.value(n, k)
            assert stirling2_deg_incl_excl(n, k, lam) == t2.value(n, k)


def test_lah_closed_oracle():
    assert lah_closed(4, 2) == 36
    assert lah_closed(0, 0) == 1
    assert lah_closed(3, 5) == 0


def test_moment_oracle_normal_recurrence():
    rv = RandomVar.normal(2, F(1, 4))
    # m_n = mu m_{n-1} + (n-1) sigma^2 m_{n-2}
    values = [moment_oracle(rv, n) for n in range(6)]
    for n in range(2, 6):
        assert values[n] == 2 * values[n - 1] + (n - 1) * F(1, 4) * values[n - 2]


def test_sum_power_moment_matches_engine():
    rv = RandomVar.geometric(F(1, 2))
    for j in range(4):
        for n in range(5):
            assert sum_power_moment(rv, j, n) == sj_moment(rv, 0, j, n)


# -- orthogonality ----------------------------------------------------------------

def test_orthogonality_deterministic_pair():
    report = check_orthogonality(triangle("s2", LAM, 10), triangle("s1", LAM, 10))
    assert report.passed


def test_orthogonality_probabilistic_pair():
    rv = RandomVar.poisson(2)
    report = check_orthogonality(
        prob_triangle(rv, LAM, "s2", 8), prob_triangle(rv, LAM, "s1", 8)
    )
    assert report.passed


def test_orthogonality_detects_corruption():
    t2 = prob_triangle(RandomVar.poisson(2), LAM, "s2", 6)
    rows = [list(r) for r in t2.rows]
    rows[4][2] += F(1, 7)
    corrupted = dataclasses.replace(
        t2, rows=tuple(tuple(r) for r in rows)
    )
    report = check_orthogonality(corrupted, prob_triangle(RandomVar.poisson(2), LAM, "s1", 6))
    assert report.failed
    first = report.failures()[0]
    assert first.first_failure is not None
    assert first.lhs is not None and first.rhs is not None


def test_orthogonality_rejects_mismatched_input():
    with pytest.raises(ValueError):
        check_orthogonality(triangle("s2", LAM, 6), triangle("s1", LAM, 5))
    with pytest.raises(ValueError):
        check_orthogonality(triangle("s2", LAM, 6), triangle("g", LAM, 6))


# -- identity suite ----------------------------------------------------------------

def test_identity_suite_passes_for_geometric():
    report = identity_suite(RandomVar.geometric(F(1, 3)), F(1, 2), 6)
    assert report.passed, [r.identity for r in report.failures()]


def test_identity_suite_rejects_zero_mean():
    with pytest.raises(ValueError):
        identity_suite(RandomVar.custom([F(1), F(0), F(1)]), 0, 2)


def test_perturbed_moment_fails_the_suite():
    report = identity_suite(
        RandomVar.geometric(F(1, 3)), F(1, 2), 5,
        moment_perturbation=(3, F(1, 7)),
    )
    assert report.failed
    assert any(r.identity == "mgf-vs-moments" for r in report.failures())


def test_report_serialization():
    report = identity_suite(RandomVar.bernoulli(F(1, 2)), 0, 3)
    payload = report.to_dict()
    assert payload["suite"] == "identity"
    assert payload["passed"] is True and payload["failed"] is False
    record = payload["records"][0]
    assert set(record) == {
        "identity", "rv", "lambda", "nmax", "status", "first_failure", "lhs", "rhs",
    }


def test_binomial_sum_identities_small():
    for _, lhs, rhs in eq_identities_pass(8):
        assert lhs == rhs


# -- limit suite --------------------------------------------------------------------

def test_limit_suite_passes():
    report = limit_suite(6)
    assert report.passed, [
        (r.identity, r.rv, r.first_failure) for r in report.failures()
    ]


# -- Monte Carlo ----------------------------------------------------------------------

def test_mc_pointmass_is_exact():
    est = mc_check(RandomVar.pointmass(1), F(1, 2), 3, 2, 10_000, 3)
    assert est.std_error == 0.0
    assert est.z == 0.0
    assert est.estimate == float(est.exact)


def test_mc_is_deterministic_per_seed():
    a = mc_check(RandomVar.poisson(2), F(1, 2), 3, 2, 50_000, 42)
    b = mc_check(RandomVar.poisson(2), F(1, 2), 3, 2, 50_000, 42)
    assert (a.estimate, a.std_error, a.z) == (b.estimate, b.std_error, b.z)
    c = mc_check(RandomVar.poisson(2), F(1, 2), 3, 2, 50_000, 43)
    assert c.estimate != a.estimate


def test_mc_z_is_small_for_correct_values():
    est = mc_check(RandomVar.bernoulli(F(1, 2)), 0, 1, 1, 100_000, 11)
    assert abs(est.z) <= 5
    assert est.exact == F(1, 2)


def test_mc_rejects_bad_input():
    with pytest.raises(ValueError):
        mc_check(RandomVar.custom([1, 1]), 0, 1, 1, 10_000, 0)
    with pytest.raises(ValueError):
        mc_check(RandomVar.poisson(2), 0, 1, 1, 10, 0)


def test_samplers_hit_their_means():
    import numpy as np

    rng = np.random.Generator(np.random.PCG64(7))
    size = 200_000
    for rv in (
        RandomVar.binomial(3, F(1, 2)),
        RandomVar.poisson(2),
        RandomVar.exponential(3),
        RandomVar.gamma(F(1, 2), 2),
        RandomVar.geometric(F(1, 3)),
        RandomVar.normal(1, 1),
        RandomVar.negbinomial(2, F(1, 2)),
        RandomVar.uniform01(),
    ):
        draws = sample_rv(rv, size, rng)
        err = abs(draws.mean() - float(rv.mean()))
        spread = draws.std(ddof=1) / size ** 0.5
        assert err <= 6 * spread, (rv.describe(), err, spread)


def test_mc_serialization_precision():
    est = mc_check(RandomVar.poisson(2), F(1, 2), 2, 1, 10_000, 5)
    payload = est.to_dict()
    assert payload["samples"] == 10_000
    assert payload["exact"] == str(est.exact)
    float(payload["estimate"])
    float(payload["z"])
