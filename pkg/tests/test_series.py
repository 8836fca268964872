"""Exact series arithmetic, composition, reversion and the extraction oracle."""

from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probstirling.series import (
    OrderMismatchError,
    Series,
    as_delta,
    coeff_egf,
    lagrange_extract,
)

ORDER = 8

small_rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


def series_strategy(order=ORDER):
    return st.lists(
        small_rationals, min_size=order + 1, max_size=order + 1
    ).map(Series)


def delta_strategy(order=ORDER):
    def build(c1, rest):
        return Series([F(0), c1] + rest)

    nonzero = small_rationals.filter(lambda q: q != 0)
    return st.builds(
        build,
        nonzero,
        st.lists(small_rationals, min_size=order - 1, max_size=order - 1),
    )


# -- ring operations ---------------------------------------------------------

def test_polynomial_square():
    f = Series([1, 1, 0])
    assert (f * f).coeffs == (F(1), F(2), F(1))


def test_geometric_series_division():
    one = Series.one(6)
    geo = one / Series([1, -1, 0, 0, 0, 0, 0])
    assert geo == Series([1] * 7)


def test_additive_identity():
    f = Series([3, F(1, 2), -2, 0, 5])
    assert f + Series.zero(4) == f


def test_scale_and_scalar_ops():
    f = Series([1, 2, 3])
    assert f.scale(F(1, 2)) == Series([F(1, 2), 1, F(3, 2)])
    assert 2 * f == f + f
    assert f / 2 == f.scale(F(1, 2))


def test_order_mismatch_is_an_error():
    with pytest.raises(OrderMismatchError):
        Series([1, 2]) + Series([1, 2, 3])
    with pytest.raises(OrderMismatchError):
        Series([1, 2]) * Series([1, 2, 3])


def test_division_by_delta_series_rejected():
    with pytest.raises(ValueError):
        Series([1, 1, 1]) / Series([0, 1, 1])


@settings(max_examples=60, deadline=None)
@given(series_strategy(), series_strategy())
def test_mul_commutes(f, g):
    assert f * g == g * f


@settings(max_examples=40, deadline=None)
@given(series_strategy(), series_strategy(), series_strategy())
def test_mul_associates(f, g, h):
    assert (f * g) * h == f * (g * h)


@settings(max_examples=60, deadline=None)
@given(series_strategy(), series_strategy().filter(lambda s: s.coeffs[0] != 0))
def test_div_is_right_inverse_of_mul(f, g):
    assert (f / g) * g == f


# -- composition and reversion ------------------------------------------------

def test_compose_monomial():
    f = Series([0, 0, 1, 0, 0])
    g = Series([0, 1, 1, 0, 0])
    assert f.compose(g) == Series([0, 0, 1, 2, 1])


def test_compose_log_with_exp_minus_one():
    t = Series.t(ORDER)
    log1p = t.log1p()
    exp_minus_one = t.exp() - Series.one(ORDER)
    assert log1p.compose(exp_minus_one) == t


def test_compose_identity_substitution():
    f = Series([2, -1, F(1, 3), 0, 4])
    assert f.compose(Series.t(4)) == f


def test_compose_rejects_nonzero_inner_constant():
    with pytest.raises(ValueError):
        Series([1, 1, 1]).compose(Series([1, 1, 0]))


def test_revert_identity():
    assert Series.t(6).revert() == Series.t(6)


def test_revert_mobius():
    # t/(1-t) reverts to t/(1+t); checked against the frozen alternating
    # coefficients and by composing both ways at order 16.
    n = 16
    f = Series([0] + [1] * n)
    fbar = f.revert()
    assert fbar == Series([0] + [(-1) ** (m - 1) for m in range(1, n + 1)])
    assert f.compose(fbar) == Series.t(n)
    assert fbar.compose(f) == Series.t(n)


def test_revert_requires_delta():
    with pytest.raises(ValueError):
        Series([1, 1, 1]).revert()
    with pytest.raises(ValueError):
        Series([0, 0, 1]).revert()
    with pytest.raises(ValueError):
        as_delta(Series([0, 0, 1]))


@settings(max_examples=40, deadline=None)
@given(delta_strategy())
def test_revert_round_trips(f):
    fbar = f.revert()
    t = Series.t(f.order)
    assert f.compose(fbar) == t
    assert fbar.compose(f) == t


# -- transcendental operations -------------------------------------------------

def test_log1p_egf_coefficients():
    lg = Series.t(ORDER).log1p()
    for n in range(1, ORDER + 1):
        assert lg.egf(n) == (-1) ** (n - 1) * factorial(n - 1)


def test_exp_log_round_trip():
    t = Series.t(10)
    assert (t.exp() - Series.one(10)).log1p() == t


@settings(max_examples=40, deadline=None)
@given(series_strategy().map(lambda s: Series([0] + list(s.coeffs[1:]))))
def test_exp_then_log_round_trips(f):
    assert (f.exp() - Series.one(f.order)).log1p() == f


def test_sqrt_squared():
    f = Series([1, 1] + [0] * 15)
    root = f.pow(F(1, 2))
    assert root * root == f


@settings(max_examples=40, deadline=None)
@given(
    series_strategy().map(lambda s: Series([1] + list(s.coeffs[1:]))),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)
def test_pow_is_additive_in_the_exponent(f, g1, g2):
    assert f.pow(g1) * f.pow(g2) == f.pow(g1 + g2)


def test_pow_negative_integer():
    f = Series([2, 1, 1, 0, 0])
    assert f.pow(-2) * f * f == Series.one(4)


def test_pow_of_delta_series():
    t = Series.t(6)
    assert t.pow(3) == Series([0, 0, 0, 1, 0, 0, 0])
    assert t.pow(0) == Series.one(6)
    assert t.pow(9) == Series.zero(6)
    with pytest.raises(ValueError):
        t.pow(F(1, 2))
    with pytest.raises(ValueError):
        t.pow(-1)


def test_pow_non_unit_constant_with_fractional_exponent_rejected():
    with pytest.raises(ValueError):
        Series([2, 1, 0]).pow(F(1, 2))


def test_exp_requires_zero_constant():
    with pytest.raises(ValueError):
        Series([1, 1]).exp()
    with pytest.raises(ValueError):
        Series([1, 1]).log1p()


# -- EGF access -----------------------------------------------------------------

def test_egf_of_exponential_is_all_ones():
    e = Series.t(ORDER).exp()
    assert [coeff_egf(e, n) for n in range(ORDER + 1)] == [1] * (ORDER + 1)


def test_egf_of_log_at_four():
    assert Series.t(6).log1p().egf(4) == -6


def test_egf_of_zero():
    assert coeff_egf(Series.zero(5), 3) == 0


def test_egf_out_of_range():
    with pytest.raises(ValueError):
        Series.zero(3).egf(4)


def test_from_egf_round_trip():
    values = [F(1), F(2), F(-3), F(5, 7)]
    s = Series.from_egf(values)
    assert [s.egf(n) for n in range(4)] == values


# -- Lagrange extraction oracle ---------------------------------------------------

def test_extraction_with_identity_reversion():
    g = Series([2, 1, 5, 0, 1, 2, 0, 0, 3])
    t = Series.t(ORDER)
    for n in range(ORDER + 1):
        assert lagrange_extract(g, t, n, None, "A") == g.coeff(n)


@settings(max_examples=30, deadline=None)
@given(delta_strategy())
def test_extraction_b_matches_reverted_powers(f):
    fbar = f.revert()
    power = Series.one(f.order)
    for k in range(1, 4):
        power = power * fbar
        for n in range(k, f.order + 1):
            assert lagrange_extract(None, f, n, k, "B") == power.coeff(n)


@settings(max_examples=30, deadline=None)
@given(delta_strategy(), series_strategy())
def test_extraction_a_matches_composition(f, g):
    comp = g.compose(f.revert())
    for n in range(f.order + 1):
        assert lagrange_extract(g, f, n, None, "A") == comp.coeff(n)


def test_extraction_c_matches_revert():
    f = Series([0, 1, 2, 3, 1, 0, 2, 1, 4])
    fbar = f.revert()
    for n in range(1, f.order + 1):
        assert lagrange_extract(None, f, n, None, "C") == fbar.coeff(n)


def test_extraction_preconditions():
    f = Series([0, 1, 1, 1])
    with pytest.raises(ValueError):
        lagrange_extract(None, f, 0, None, "C")
    with pytest.raises(ValueError):
        lagrange_extract(None, f, 2, 3, "B")
    with pytest.raises(ValueError):
        lagrange_extract(None, f, 2, 0, "B")
    with pytest.raises(ValueError):
        lagrange_extract(None, f, 9, None, "C")
    with pytest.raises(ValueError):
        lagrange_extract(None, f, 2, None, "D")
