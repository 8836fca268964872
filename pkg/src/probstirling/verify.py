"""Identity verification suites and Monte Carlo cross-checks.

Three layers live here:

* recurrence / closed-form / textbook-moment oracles that deliberately
  duplicate quantities the engine computes from generating functions, so
  every check compares two genuinely independent computation paths;
* the exact identity suites (`check_orthogonality`, `identity_suite`,
  `limit_suite`) producing structured :class:`VerificationReport` objects;
* a seeded Monte Carlo estimator (`mc_check`) that validates expectation
  semantics statistically.  Samplers are built from PCG64 uniform draws
  only, so results are reproducible bit for bit for a fixed seed.

Exact identities are compared rationally; the finitely-truncated numeric
closed forms are compared within 1e-9 relative tolerance and report
"inconclusive" (never "fail") when their partial sums have not stabilized
at the configured depth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Optional, Sequence

import numpy as np

from .closedforms import NumericResult, closed_form
from .prob import (
    bernoulli_from_mgf,
    mgf_deg,
    mgf_deg_neg,
    prob_log,
    prob_order_numbers,
    prob_triangle,
    schlomilch_sum,
    sj_moment,
)
from .randomvars import RandomVar, builtin_random_vars
from .series import Series, lagrange_extract
from .special import (
    Triangle,
    binom,
    deg_exp,
    deg_log,
    falling_factorial,
    order_numbers,
    partial_bell,
    rising_factorial,
    triangle,
    triangle_from_base,
)

__all__ = [
    "IdentityRecord",
    "VerificationReport",
    "MCEstimate",
    "DEFAULT_GAMMAS",
    "DEFAULT_LAMBDA_GRID",
    "NUMERIC_TOLERANCE",
    "stirling1_oracle",
    "stirling2_oracle",
    "stirling1_deg_oracle",
    "stirling2_deg_incl_excl",
    "rising_incl_excl",
    "lah_closed",
    "moment_oracle",
    "sum_power_moment",
    "check_orthogonality",
    "identity_suite",
    "limit_suite",
    "eq_identities_pass",
    "mc_check",
    "sample_rv",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

DEFAULT_GAMMAS = tuple(range(-3, 5))
DEFAULT_LAMBDA_GRID = (
    Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-1, 3), Fraction(2),
)
NUMERIC_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass
class IdentityRecord:
    identity: str
    rv: str
    lam: str
    nmax: int
    status: str                      # pass | fail | inconclusive
    first_failure: Optional[tuple] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "rv": self.rv,
            "lambda": self.lam,
            "nmax": self.nmax,
            "status": self.status,
            "first_failure": list(self.first_failure) if self.first_failure else None,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass
class VerificationReport:
    suite: str
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.records)

    @property
    def failed(self) -> bool:
        return any(r.status == "fail" for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if r.status == "fail"]

    def inconclusive(self) -> list:
        return [r for r in self.records if r.status == "inconclusive"]

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "failed": self.failed,
            "records": [r.to_dict() for r in self.records],
        }


@dataclass
class MCEstimate:
    target: str
    samples: int
    seed: int
    estimate: float
    std_error: float
    exact: Fraction
    z: float

    @property
    def within_band(self) -> bool:
        return abs(self.z) <= 5.0

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "samples": self.samples,
            "seed": self.seed,
            "estimate": format(self.estimate, ".12g"),
            "std_error": format(self.std_error, ".12g"),
            "exact": str(self.exact),
            "z": format(self.z, ".12g"),
        }


# ---------------------------------------------------------------------------
# Oracles: recurrences, closed forms, textbook moments
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def stirling1_oracle(nmax: int) -> tuple:
    """Signed first-kind Stirling table via s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)."""
    rows = [[_ONE]]
    for n in range(1, nmax + 1):
        prev = rows[-1]
        row = [_ZERO] * (n + 1)
        for k in range(n + 1):
            above_left = prev[k - 1] if k >= 1 else _ZERO
            above = prev[k] if k <= n - 1 else _ZERO
            row[k] = above_left - (n - 1) * above
        rows.append(row)
    return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def stirling2_oracle(nmax: int) -> tuple:
    """Second-kind Stirling table via S(n,k) = S(n-1,k-1) + k S(n-1,k)."""
    rows = [[_ONE]]
    for n in range(1, nmax + 1):
        prev = rows[-1]
        row = [_ZERO] * (n + 1)
        for k in range(n + 1):
            above_left = prev[k - 1] if k >= 1 else _ZERO
            above = prev[k] if k <= n - 1 else _ZERO
            row[k] = above_left + k * above
        rows.append(row)
    return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def stirling1_deg_oracle(nmax: int, lam: Fraction) -> tuple:
    """Degenerate first-kind table via S(n+1,k) = S(n,k-1) + (k lam - n) S(n,k)."""
    rows = [[_ONE]]
    for n in range(1, nmax + 1):
        prev = rows[-1]
        row = [_ZERO] * (n + 1)
        for k in range(n + 1):
            above_left = prev[k - 1] if k >= 1 else _ZERO
            above = prev[k] if k <= n - 1 else _ZERO
            row[k] = above_left + (k * lam - (n - 1)) * above
        rows.append(row)
    return tuple(tuple(r) for r in rows)


def stirling2_deg_incl_excl(n: int, k: int, lam: Fraction) -> Fraction:
    """Degenerate second-kind entry from the inclusion-exclusion sum."""
    total = _ZERO
    for j in range(k + 1):
        term = binom(k, j) * falling_factorial(j, n, lam)
        total += -term if (k - j) % 2 else term
    return total / factorial(k)


def rising_incl_excl(n: int, k: int, lam: Fraction) -> Fraction:
    """Rising-factorial connection entry from its inclusion-exclusion sum."""
    total = _ZERO
    for j in range(k + 1):
        term = binom(k, j) * rising_factorial(j, n, lam)
        total += -term if (k - j) % 2 else term
    return total / factorial(k)


def lah_closed(n: int, k: int) -> Fraction:
    """Lah numbers in closed form: n!/k! C(n-1, k-1)."""
    if not 0 <= k <= n:
        return _ZERO
    if n == 0:
        return _ONE
    return Fraction(factorial(n), factorial(k)) * binom(n - 1, k - 1)


def moment_oracle(rv: RandomVar, n: int) -> Fraction:
    """Raw moment E[Y^n] from textbook formulas, bypassing the series engine."""
    if n == 0:
        return _ONE
    kind = rv.kind
    if kind == "bernoulli":
        return rv.param("p")
    if kind == "binomial":
        m, p = rv.param("m"), rv.param("p")
        s2 = stirling2_oracle(n)
        return sum(
            (s2[n][i] * falling_factorial(m, i, 1) * p**i for i in range(1, n + 1)),
            _ZERO,
        )
    if kind == "poisson":
        alpha = rv.param("alpha")
        s2 = stirling2_oracle(n)
        return sum((s2[n][i] * alpha**i for i in range(1, n + 1)), _ZERO)
    if kind == "exponential":
        return factorial(n) / rv.param("alpha") ** n
    if kind == "gamma":
        return rising_factorial(rv.param("alpha"), n, 1) / rv.param("beta") ** n
    if kind == "geometric":
        p = rv.param("p")
        q = 1 - p
        s2 = stirling2_oracle(n)
        return sum(
            (s2[n][i] * factorial(i) * q ** (i - 1) / p**i for i in range(1, n + 1)),
            _ZERO,
        )
    if kind == "normal":
        mu, sigma2 = rv.param("mu"), rv.param("sigma2")
        prev2, prev1 = _ONE, mu
        for m in range(2, n + 1):
            prev2, prev1 = prev1, mu * prev1 + (m - 1) * sigma2 * prev2
        return prev1 if n >= 1 else prev2
    if kind == "negbinomial":
        r, p = rv.param("r"), rv.param("p")
        ratio = (1 - p) / p
        s2 = stirling2_oracle(n)
        return sum(
            (
                s2[n][i] * rising_factorial(r, i, 1) * ratio**i
                for i in range(1, n + 1)
            ),
            _ZERO,
        )
    if kind == "uniform01":
        return Fraction(1, n + 1)
    if kind == "pointmass":
        return rv.param("c") ** n
    if kind == "custom":
        if n >= len(rv.moments):
            raise ValueError(f"custom spec has no moment of order {n}")
        return rv.moments[n]
    raise ValueError(f"unknown random variable kind {kind!r}")


@lru_cache(maxsize=None)
def sum_power_moment(rv: RandomVar, j: int, n: int) -> Fraction:
    """E[(Y1 + ... + Yj)^n] by multinomial expansion over single-copy oracle moments."""
    if j == 0:
        return _ONE if n == 0 else _ZERO
    total = _ZERO
    for i in range(n + 1):
        total += binom(n, i) * moment_oracle(rv, i) * sum_power_moment(rv, j - 1, n - i)
    return total


# ---------------------------------------------------------------------------
# Record construction helpers
# ---------------------------------------------------------------------------

def _exact_record(identity: str, rv_desc: str, lam: Fraction, nmax: int,
                  pairs: Iterable[tuple]) -> IdentityRecord:
    for index, lhs, rhs in pairs:
        if lhs != rhs:
            return IdentityRecord(
                identity, rv_desc, str(lam), nmax, "fail",
                first_failure=tuple(index), lhs=str(lhs), rhs=str(rhs),
            )
    return IdentityRecord(identity, rv_desc, str(lam), nmax, "pass")


def _numeric_record(identity: str, rv_desc: str, lam: Fraction, nmax: int,
                    triples: Iterable[tuple],
                    tol: float = NUMERIC_TOLERANCE) -> IdentityRecord:
    saw_inconclusive = False
    first_inconclusive = None
    for index, exact, result in triples:
        if not isinstance(result, NumericResult):
            raise TypeError("numeric comparison expects a NumericResult")
        if not result.stabilized:
            if not saw_inconclusive:
                saw_inconclusive, first_inconclusive = True, (
                    tuple(index), float(exact), result,
                )
            continue
        e = float(exact)
        if abs(result.value - e) > tol * max(1.0, abs(e)):
            return IdentityRecord(
                identity, rv_desc, str(lam), nmax, "fail",
                first_failure=tuple(index),
                lhs=format(e, ".12g"), rhs=format(result.value, ".12g"),
            )
    if saw_inconclusive:
        index, e, result = first_inconclusive
        return IdentityRecord(
            identity, rv_desc, str(lam), nmax, "inconclusive",
            first_failure=index,
            lhs=format(e, ".12g"), rhs=format(result.value, ".12g"),
        )
    return IdentityRecord(identity, rv_desc, str(lam), nmax, "pass")


def _rational_sequence(seed: int, length: int) -> list:
    rng = random.Random(seed)
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(length)]


# ---------------------------------------------------------------------------
# Orthogonality suite
# ---------------------------------------------------------------------------

_INVERSE_FAMILY = {"s2": "s1", "prob-s2": "prob-s1", "h": "g", "prob-h": "prob-g"}


def check_orthogonality(t2: Triangle, t1: Triangle, seed: int = 20250801) -> VerificationReport:
    """Orthogonality and both inverse relations for a second/first-kind pair.

    The inverse relations are exercised on a seeded pseudo-random rational
    sequence, transformed one way and recovered through the other triangle.
    """
    if t2.nmax != t1.nmax:
        raise ValueError("triangles must share nmax")
    expected = _INVERSE_FAMILY.get(t2.family)
    if expected is None or t1.family != expected:
        raise ValueError(
            f"family {t1.family!r} is not the first-kind partner of {t2.family!r}"
        )
    nmax = t2.nmax
    rv_desc = dict(t2.params).get("rv", "-")
    lam = t2.lam
    report = VerificationReport("orthogonality")

    def left():
        for n in range(nmax + 1):
            for l in range(n + 1):
                total = sum(
                    (t2.value(n, k) * t1.value(k, l) for k in range(l, n + 1)), _ZERO
                )
                yield (n, l), total, (_ONE if n == l else _ZERO)

    def right():
        for n in range(nmax + 1):
            for l in range(n + 1):
                total = sum(
                    (t1.value(n, k) * t2.value(k, l) for k in range(l, n + 1)), _ZERO
                )
                yield (n, l), total, (_ONE if n == l else _ZERO)

    report.records.append(_exact_record("orthogonality-left", rv_desc, lam, nmax, left()))
    report.records.append(_exact_record("orthogonality-right", rv_desc, lam, nmax, right()))

    b = _rational_sequence(seed, nmax + 1)
    a = [
        sum((t2.value(n, k) * b[k] for k in range(n + 1)), _ZERO)
        for n in range(nmax + 1)
    ]
    recovered = (
        ((n,), sum((t1.value(n, k) * a[k] for k in range(n + 1)), _ZERO), b[n])
        for n in range(nmax + 1)
    )
    report.records.append(
        _exact_record("inversion-columns", rv_desc, lam, nmax, recovered)
    )

    a_t = [
        sum((t2.value(k, n) * b[k] for k in range(n, nmax + 1)), _ZERO)
        for n in range(nmax + 1)
    ]
    recovered_t = (
        ((n,), sum((t1.value(k, n) * a_t[k] for k in range(n, nmax + 1)), _ZERO), b[n])
        for n in range(nmax + 1)
    )
    report.records.append(
        _exact_record("inversion-rows", rv_desc, lam, nmax, recovered_t)
    )
    return report


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

def eq_identities_pass(nmax: int) -> Iterable[tuple]:
    """The two pure binomial-sum identities used by the Schlomilch derivation.

    Yields (index, lhs, rhs) for 1 <= n <= nmax (n = 0 makes the shared
    factor n/(n+j) an indeterminate 0/0 and is excluded).
    """
    for n in range(1, nmax + 1):
        for k in range(n + 1):
            for j in range(n - k + 1):
                lhs1 = sum(
                    (binom(n + i - 1, i) * binom(i, j) for i in range(j, n - k + 1)),
                    _ZERO,
                )
                rhs1 = Fraction(n, n + j) * binom(2 * n - k, n) * binom(n - k, j)
                yield (n, k, j, 1), lhs1, rhs1
                lhs2 = (
                    binom(n - 1, k - 1)
                    * binom(2 * n - k, n)
                    * Fraction(n, n + j)
                    * binom(n - k, j)
                    / binom(n - k + j, j)
                )
                rhs2 = binom(n + j - 1, n + j - k) * binom(2 * n - k, n - k - j)
                yield (n, k, j, 2), lhs2, rhs2


def _uniform_divided_power_pairs(lam: Fraction, nmax: int, t1: Triangle):
    """Divided powers of the uniform-distribution log via an extraction identity
    that only uses series in the classical exponential (no reversion)."""
    order = nmax + 2
    e = deg_exp(0, 1, order)
    v = (e - Series.one(order)).shift_down(1) - Series.one(order - 1)
    a_series = Series.one(order - 2) / v.shift_down(1)
    if lam == 0:
        log_e = Series.t(order - 1)
    else:
        log_e = (deg_exp(0, lam, order - 1) - Series.one(order - 1)) / lam
    w = log_e.shift_down(1) / v.shift_down(1)
    for k in range(nmax):
        dwk = w.pow(k).diff()
        for n in range(k + 1, nmax + 1):
            rhs_series = a_series.pow(n - k).truncate(order - 3) * dwk
            rhs = rhs_series.coeff(n - k - 1) / ((n - k) * factorial(k))
            lhs = t1.value(n, k) / factorial(n)
            yield (n, k), lhs, rhs


_FINITE_S1 = ("bernoulli", "binomial", "poisson", "exponential", "geometric", "uniform01")
_FINITE_S2 = (
    "bernoulli", "binomial", "poisson", "exponential", "gamma", "geometric",
    "normal", "uniform01",
)


def identity_suite(rv: RandomVar, lam, nmax: int,
                   gammas: Sequence[int] = DEFAULT_GAMMAS,
                   depth: int = 60,
                   moment_perturbation: Optional[tuple] = None) -> VerificationReport:
    """Run every supported identity for one (rv, lam) configuration.

    `gammas` must be integers (poles are skipped where an identity excludes
    them).  `moment_perturbation = (index, delta)` shifts one textbook-oracle
    moment and exists as a fault-injection hook for negative-control tests.
    """
    lam = Fraction(lam)
    mean = rv.mean()
    if mean == 0:
        raise ValueError(f"identity suite requires E[Y] != 0, got {rv.describe()}")
    gammas = tuple(int(g) for g in gammas)
    desc = rv.describe()
    nbig = 2 * nmax
    report = VerificationReport("identity")
    rec = report.records.append

    t2big = prob_triangle(rv, lam, "s2", nbig)
    t1 = prob_triangle(rv, lam, "s1", nmax)
    thbig = prob_triangle(rv, lam, "h", nbig)
    tg = prob_triangle(rv, lam, "g", nmax)
    log_series = prob_log(rv, lam, nmax)

    beta_cache: dict = {}

    def beta(gamma: int) -> Series:
        if gamma not in beta_cache:
            beta_cache[gamma] = prob_order_numbers(rv, lam, gamma, 0, "bernoulli", nmax)
        return beta_cache[gamma]

    falling_moments = [sj_moment(rv, lam, 1, i) for i in range(nmax + 3)]
    rising_moments = [sj_moment(rv, -lam, 1, i) for i in range(nmax + 2)]

    # orthogonality and inverse relations
    ortho = check_orthogonality(
        prob_triangle(rv, lam, "s2", nmax), t1
    )
    report.extend(ortho)

    # first-kind entries: reversion vs binomial-bernoulli bridge vs partial Bell
    def first_kind_three_way():
        for n in range(nmax + 1):
            for k in range(n + 1):
                engine = t1.value(n, k)
                bridge = binom(n - 1, k - 1) * beta(n).egf(n - k) if n else _ONE
                yield (n, k, 1), engine, bridge
                args = [beta(m).egf(m - 1) for m in range(1, n - k + 2)]
                yield (n, k, 2), engine, partial_bell(args, n, k)

    rec(_exact_record("first-kind-three-way", desc, lam, nmax, first_kind_three_way()))

    # second-kind entries: powers vs inclusion-exclusion vs partial Bell
    def second_kind_three_way():
        for n in range(nmax + 1):
            for k in range(n + 1):
                engine = t2big.value(n, k)
                incl = sum(
                    (
                        (-1 if (k - j) % 2 else 1) * binom(k, j) * sj_moment(rv, lam, j, n)
                        for j in range(k + 1)
                    ),
                    _ZERO,
                ) / factorial(k)
                yield (n, k, 1), engine, incl
                args = falling_moments[1: n - k + 2]
                yield (n, k, 2), engine, partial_bell(args, n, k)

    rec(_exact_record("second-kind-three-way", desc, lam, nmax, second_kind_three_way()))

    # moment series vs textbook moments (the one check a perturbed moment breaks)
    def mgf_vs_moments():
        s1c = stirling1_oracle(nmax)
        for n in range(nmax + 1):
            engine = falling_moments[n]
            total = _ZERO
            for k in range(n + 1):
                if s1c[n][k]:
                    m_k = moment_oracle(rv, k)
                    if moment_perturbation is not None and moment_perturbation[0] == k:
                        m_k += moment_perturbation[1]
                    total += s1c[n][k] * lam ** (n - k) * m_k
            yield (n,), engine, total

    rec(_exact_record("mgf-vs-moments", desc, lam, nmax, mgf_vs_moments()))

    # rising-factorial second kind: four independent expressions
    neg_mgf = mgf_deg_neg(rv, lam, max(nmax, 1))
    neg_t2 = triangle_from_base(
        (neg_mgf - Series.one(neg_mgf.order)).truncate(nmax), "neg-s2", lam, nmax
    )

    def rising_second_kind():
        for n in range(nmax + 1):
            sign = -1 if n % 2 else 1
            for k in range(n + 1):
                h = thbig.value(n, k)
                yield (n, k, 1), h, sign * neg_t2.value(n, k)
                incl = sum(
                    (
                        (-1 if (k - j) % 2 else 1)
                        * binom(k, j)
                        * sj_moment(rv, -lam, j, n)
                        for j in range(k + 1)
                    ),
                    _ZERO,
                ) / factorial(k)
                yield (n, k, 2), h, incl
                args = rising_moments[1: n - k + 2]
                yield (n, k, 3), h, partial_bell(args, n, k)

    rec(_exact_record("rising-second-kind-four-way", desc, lam, nmax, rising_second_kind()))

    # rising-factorial first kind: sign-flipped reversion of -Y, plus Bell forms
    neg_delta = neg_mgf - Series.one(neg_mgf.order)
    neg_t1 = triangle_from_base(neg_delta.revert().truncate(nmax), "neg-s1", lam, nmax)
    neg_beta_cache: dict = {}

    def neg_beta(gamma: int) -> Series:
        if gamma not in neg_beta_cache:
            neg_beta_cache[gamma] = bernoulli_from_mgf(
                mgf_deg_neg(rv, lam, nmax + 1), gamma
            )
        return neg_beta_cache[gamma]

    minus_lam_beta_cache: dict = {}

    def minus_lam_beta(gamma: int) -> Series:
        if gamma not in minus_lam_beta_cache:
            minus_lam_beta_cache[gamma] = bernoulli_from_mgf(
                mgf_deg(rv, -lam, nmax + 1), gamma
            )
        return minus_lam_beta_cache[gamma]

    def rising_first_kind():
        for n in range(nmax + 1):
            for k in range(n + 1):
                g = tg.value(n, k)
                sign = -1 if k % 2 else 1
                yield (n, k, 1), g, sign * neg_t1.value(n, k)
                args_neg = [-neg_beta(m).egf(m - 1) for m in range(1, n - k + 2)]
                yield (n, k, 2), g, partial_bell(args_neg, n, k)
                args_pos = [minus_lam_beta(m).egf(m - 1) for m in range(1, n - k + 2)]
                yield (n, k, 3), g, partial_bell(args_pos, n, k)
                bridge = (
                    sign * binom(n - 1, k - 1) * neg_beta(n).egf(n - k)
                    if n
                    else _ONE
                )
                yield (n, k, 4), g, bridge

    rec(_exact_record("rising-first-kind-multi-way", desc, lam, nmax, rising_first_kind()))

    # partial Bell of shifted falling moments vs second-kind sums
    # (m-th Bell argument is E[(Y)_{m+1,lam}] / (m+1), m = 1, 2, ...)
    shifted_args = [
        falling_moments[m + 1] / (m + 1) for m in range(1, nmax + 2)
    ]

    def shifted_bell():
        for n in range(nmax + 1):
            for k in range(n + 1):
                lhs = partial_bell(shifted_args[: n - k + 1], n, k)
                rhs = sum(
                    (
                        binom(n + k, k - j)
                        * Fraction(factorial(n), factorial(n + k))
                        * (-mean) ** (k - j)
                        * t2big.value(n + j, j)
                        for j in range(k + 1)
                    ),
                    _ZERO,
                )
                yield (n, k), lhs, rhs

    rec(_exact_record("shifted-bell-vs-second-kind", desc, lam, nmax, shifted_bell()))

    # higher-order Bernoulli numbers from the shifted Bell polynomials
    def bernoulli_from_bell():
        for gamma in gammas:
            for n in range(nmax + 1):
                lhs = beta(gamma).egf(n)
                rhs = sum(
                    (
                        falling_factorial(-gamma, k, 1)
                        * mean ** (-gamma - k)
                        * partial_bell(shifted_args[: n - k + 1], n, k)
                        for k in range(n + 1)
                    ),
                    _ZERO,
                )
                yield (gamma, n), lhs, rhs

    rec(_exact_record("bernoulli-from-shifted-bell", desc, lam, nmax, bernoulli_from_bell()))

    # higher-order Bernoulli numbers as a double sum over second-kind entries
    def bernoulli_double_sum():
        for gamma in gammas:
            for n in range(nmax + 1):
                lhs = beta(gamma).egf(n)
                rhs = _ZERO
                for k in range(n + 1):
                    for j in range(k + 1):
                        c = binom(gamma + k - 1, k) * binom(k, j) / binom(n + j, j)
                        if not c:
                            continue
                        term = c * mean ** (-gamma - j) * t2big.value(n + j, j)
                        rhs += -term if j % 2 else term
                yield (gamma, n), lhs, rhs

    rec(_exact_record("bernoulli-double-sum", desc, lam, nmax, bernoulli_double_sum()))

    # Schlomilch sums against the reversion-based triangles
    def schlomilch_pairs():
        for n in range(nmax + 1):
            for k in range(n + 1):
                yield (n, k), schlomilch_sum(mean, t2big.value, n, k), t1.value(n, k)

    rec(_exact_record("schlomilch", desc, lam, nmax, schlomilch_pairs()))

    def schlomilch_rising_pairs():
        for n in range(nmax + 1):
            for k in range(n + 1):
                yield (n, k), schlomilch_sum(mean, thbig.value, n, k), tg.value(n, k)

    rec(_exact_record("schlomilch-rising", desc, lam, nmax, schlomilch_rising_pairs()))

    # log coefficients from second-kind data only
    def log_from_second_kind():
        for n in range(1, nmax + 1):
            total = _ZERO
            for j in range(n):
                c = binom(2 * n - 1, n - 1 - j)
                if c:
                    term = c * mean ** (-(n + j)) * t2big.value(n - 1 + j, j)
                    total += -term if j % 2 else term
            yield (n,), log_series.egf(n), total

    rec(_exact_record("log-from-second-kind", desc, lam, nmax, log_from_second_kind()))

    # Daehee / Cauchy orders against first-kind sums and Bernoulli ratios
    def daehee_sum():
        for gamma in gammas:
            d = prob_order_numbers(rv, lam, gamma, 0, "daehee", nmax)
            for n in range(nmax + 1):
                rhs = sum(
                    (beta(gamma).egf(k) * t1.value(n, k) for k in range(n + 1)), _ZERO
                )
                yield (gamma, n), d.egf(n), rhs

    rec(_exact_record("daehee-from-first-kind", desc, lam, nmax, daehee_sum()))

    def cauchy_sum():
        for gamma in gammas:
            c = prob_order_numbers(rv, lam, gamma, 0, "cauchy", nmax)
            for n in range(nmax + 1):
                rhs = sum(
                    (beta(-gamma).egf(k) * t1.value(n, k) for k in range(n + 1)), _ZERO
                )
                yield (gamma, n), c.egf(n), rhs

    rec(_exact_record("cauchy-from-first-kind", desc, lam, nmax, cauchy_sum()))

    def daehee_ratio():
        for gamma in gammas:
            d = prob_order_numbers(rv, lam, gamma, 0, "daehee", nmax)
            for n in range(nmax + 1):
                if gamma == -n:
                    continue
                rhs = Fraction(gamma, gamma + n) * beta(n + gamma).egf(n)
                yield (gamma, n), d.egf(n), rhs

    rec(_exact_record("daehee-bernoulli-ratio", desc, lam, nmax, daehee_ratio()))

    def cauchy_ratio():
        for gamma in gammas:
            c = prob_order_numbers(rv, lam, gamma, 0, "cauchy", nmax)
            for n in range(nmax + 1):
                if gamma == n:
                    continue
                rhs = Fraction(gamma, gamma - n) * beta(n - gamma).egf(n)
                yield (gamma, n), c.egf(n), rhs

    rec(_exact_record("cauchy-bernoulli-ratio", desc, lam, nmax, cauchy_ratio()))

    # deterministic bridges at this lam: first-kind/Bernoulli and second-kind/Cauchy
    det_t1 = triangle("s1", lam, nmax)
    det_t2 = triangle("s2", lam, nmax)
    det_h = triangle("h", lam, nmax)
    det_lah = triangle("lah", _ZERO, nmax)
    e_delta = deg_exp(lam, 1, nmax + 1) - Series.one(nmax + 1)

    def first_kind_order_bridge():
        for n in range(1, nmax + 1):
            bern_n = order_numbers(lam, n, 0, "bernoulli", nmax)
            for k in range(n + 1):
                lhs = det_t1.value(n, k)
                yield (n, k, 1), lhs, binom(n - 1, k - 1) * bern_n.egf(n - k)
                if k >= 1:
                    extracted = lagrange_extract(None, e_delta, n, k, "B")
                    yield (n, k, 2), lhs, extracted * Fraction(
                        factorial(n), factorial(k)
                    )

    rec(_exact_record("first-kind-order-bridge", desc, lam, nmax, first_kind_order_bridge()))

    def second_kind_cauchy_bridge():
        for n in range(1, nmax + 1):
            cau_pos = order_numbers(lam, n, 0, "cauchy", nmax)
            cau_neg = order_numbers(-lam, n, 0, "cauchy", nmax)
            for k in range(n + 1):
                yield (n, k, 1), det_h.value(n, k), binom(n - 1, k - 1) * cau_neg.egf(n - k)
                yield (n, k, 2), det_t2.value(n, k), binom(n - 1, k - 1) * cau_pos.egf(n - k)

    rec(_exact_record("second-kind-cauchy-bridge", desc, lam, nmax, second_kind_cauchy_bridge()))

    det_s1c = stirling1_oracle(nmax)
    det_s2c = stirling2_oracle(nmax)

    def triangle_connections():
        for n in range(nmax + 1):
            for k in range(n + 1):
                rhs = _ZERO
                for l in range(k, n + 1):
                    term = det_s2c[l][k] * det_s1c[n][l] * lam ** (n - l)
                    rhs += -term if (n - l) % 2 else term
                yield (n, k, 1), det_h.value(n, k), rhs
                rhs2 = _ZERO
                for l in range(k, n + 1):
                    term = det_t1.value(n, l) * det_h.value(l, k)
                    rhs2 += -term if (n - l) % 2 else term
                yield (n, k, 2), det_lah.value(n, k), rhs2

    rec(_exact_record("triangle-connections", desc, lam, nmax, triangle_connections()))

    rec(_exact_record("binomial-sum-identities", desc, lam, nmax,
                      eq_identities_pass(min(nmax, 14))))

    # distribution-specific closed forms; each (rv, family) pair is either
    # entirely exact or entirely depth-truncated, so no per-entry dispatch
    if rv.kind in _FINITE_S2 or rv.kind == "negbinomial":
        ncap = min(nmax, 10)

        def s2_closed():
            for n in range(ncap + 1):
                for k in range(n + 1):
                    yield (n, k), t2big.value(n, k), closed_form(rv, lam, "s2", n, k, depth)

        if rv.kind in _FINITE_S2:
            rec(_exact_record("closed-form-s2", desc, lam, nmax, s2_closed()))
        else:
            rec(_numeric_record("closed-form-s2", desc, lam, nmax, s2_closed()))

        skip_infinite = rv.kind == "normal" and lam == 0  # printed forms need lam != 0
        if not skip_infinite:
            def s1_closed():
                for n in range(ncap + 1):
                    for k in range(n + 1):
                        yield (n, k), t1.value(n, k), closed_form(rv, lam, "s1", n, k, depth)

            if rv.kind in _FINITE_S1:
                rec(_exact_record("closed-form-s1", desc, lam, nmax, s1_closed()))
            else:
                rec(_numeric_record("closed-form-s1", desc, lam, nmax, s1_closed()))

            def log_closed():
                for n in range(1, ncap + 1):
                    yield (n,), log_series.egf(n), closed_form(rv, lam, "log", n, 0, depth)

            if rv.kind == "normal":
                rec(_numeric_record("closed-form-log", desc, lam, nmax, log_closed()))
            else:
                rec(_exact_record("closed-form-log", desc, lam, nmax, log_closed()))

    if rv.kind == "uniform01":
        rec(_exact_record("uniform-divided-power-lemma", desc, lam, nmax,
                          _uniform_divided_power_pairs(lam, nmax, t1)))

    # point mass at 1 must reduce every family to its deterministic counterpart
    if rv.kind == "pointmass" and rv.param("c") == 1:
        def reduction():
            for n in range(nmax + 1):
                for k in range(n + 1):
                    yield (n, k, 1), t1.value(n, k), det_t1.value(n, k)
                    yield (n, k, 2), t2big.value(n, k), det_t2.value(n, k)
                    yield (n, k, 3), thbig.value(n, k), det_h.value(n, k)
                    yield (n, k, 4), tg.value(n, k), triangle("g", lam, nmax).value(n, k)
            det_log = deg_log(lam, nmax)
            for n in range(nmax + 1):
                yield (n, 0, 5), log_series.egf(n), det_log.egf(n)

        rec(_exact_record("pointmass-reduction", desc, lam, nmax, reduction()))

    return report


# ---------------------------------------------------------------------------
# Limit suite
# ---------------------------------------------------------------------------

def limit_suite(nmax: int) -> VerificationReport:
    """Classical-limit checks: lam = 0 tables, the Lah specialization at
    lam = 1, step-one factorials, and the point-mass reductions."""
    report = VerificationReport("limits")
    rec = report.records.append

    s1c, s2c = stirling1_oracle(nmax), stirling2_oracle(nmax)
    pairs_all = [(n, k) for n in range(nmax + 1) for k in range(n + 1)]

    rec(_exact_record(
        "classical-s2-table", "-", _ZERO, nmax,
        (((n, k), triangle("s2", 0, nmax).value(n, k), s2c[n][k]) for n, k in pairs_all),
    ))
    rec(_exact_record(
        "classical-s1-table", "-", _ZERO, nmax,
        (((n, k), triangle("s1", 0, nmax).value(n, k), s1c[n][k]) for n, k in pairs_all),
    ))
    rec(_exact_record(
        "rising-limit-zero", "-", _ZERO, nmax,
        (((n, k), triangle("h", 0, nmax).value(n, k), s2c[n][k]) for n, k in pairs_all),
    ))
    rec(_exact_record(
        "rising-inverse-limit-zero", "-", _ZERO, nmax,
        (((n, k), triangle("g", 0, nmax).value(n, k), s1c[n][k]) for n, k in pairs_all),
    ))
    rec(_exact_record(
        "rising-limit-one-lah", "-", Fraction(1), nmax,
        (((n, k), triangle("h", 1, nmax).value(n, k), lah_closed(n, k)) for n, k in pairs_all),
    ))
    rec(_exact_record(
        "lah-closed-form", "-", _ZERO, nmax,
        (((n, k), triangle("lah", 0, nmax).value(n, k), lah_closed(n, k)) for n, k in pairs_all),
    ))

    x = Fraction(7, 2)
    rec(_exact_record(
        "falling-step-one", "-", Fraction(1), min(nmax, 8),
        (
            ((n,), falling_factorial(x, n, 1),
             Fraction(1) * _classical_falling(x, n))
            for n in range(min(nmax, 8) + 1)
        ),
    ))
    rec(_exact_record(
        "rising-step-one", "-", Fraction(1), min(nmax, 8),
        (
            ((n,), rising_factorial(x, n, 1), _classical_rising(x, n))
            for n in range(min(nmax, 8) + 1)
        ),
    ))

    for lam in (Fraction(1, 2), Fraction(-1, 3)):
        rec(_exact_record(
            "deg-s2-incl-excl", "-", lam, nmax,
            (
                ((n, k), triangle("s2", lam, nmax).value(n, k),
                 stirling2_deg_incl_excl(n, k, lam))
                for n, k in pairs_all
            ),
        ))
        rec(_exact_record(
            "rising-incl-excl", "-", lam, nmax,
            (
                ((n, k), triangle("h", lam, nmax).value(n, k),
                 rising_incl_excl(n, k, lam))
                for n, k in pairs_all
            ),
        ))
        deg1 = stirling1_deg_oracle(nmax, lam)
        rec(_exact_record(
            "deg-s1-recurrence", "-", lam, nmax,
            (
                ((n, k), triangle("s1", lam, nmax).value(n, k), deg1[n][k])
                for n, k in pairs_all
            ),
        ))

    # lam = 0 probabilistic second kind vs inclusion-exclusion on plain moments
    small = min(nmax, 8)
    for rv in builtin_random_vars():
        t2 = prob_triangle(rv, 0, "s2", small)

        def classical_prob(rv=rv, t2=t2):
            for n in range(small + 1):
                for k in range(n + 1):
                    incl = sum(
                        (
                            (-1 if (k - j) % 2 else 1)
                            * binom(k, j)
                            * sum_power_moment(rv, j, n)
                            for j in range(k + 1)
                        ),
                        _ZERO,
                    ) / factorial(k)
                    yield (n, k), t2.value(n, k), incl

        rec(_exact_record(
            "prob-classical-limit", rv.describe(), _ZERO, small, classical_prob()
        ))

    # point mass at 1: every probabilistic family collapses to the deterministic one
    pm = RandomVar.pointmass(1)
    for lam in (Fraction(0), Fraction(1, 2), Fraction(-1, 3)):
        cap = min(nmax, 10)

        def pm_pairs(lam=lam, cap=cap):
            for fam_prob, fam_det in (("s2", "s2"), ("s1", "s1"), ("h", "h"), ("g", "g")):
                tp = prob_triangle(pm, lam, fam_prob, cap)
                td = triangle(fam_det, lam, cap)
                for n in range(cap + 1):
                    for k in range(n + 1):
                        yield (n, k, fam_prob), tp.value(n, k), td.value(n, k)
            pl = prob_log(pm, lam, cap)
            dl = deg_log(lam, cap)
            for n in range(cap + 1):
                yield (n, 0, "log"), pl.coeff(n), dl.coeff(n)
            for gamma in (1, 2, -2):
                for family in ("bernoulli", "daehee", "cauchy"):
                    ps = prob_order_numbers(pm, lam, gamma, 0, family, cap)
                    ds = order_numbers(lam, gamma, 0, family, cap)
                    for n in range(cap + 1):
                        yield (n, gamma, family), ps.egf(n), ds.egf(n)

        rec(_exact_record("pointmass-reduction", pm.describe(), lam, cap, pm_pairs()))

    return report


def _classical_falling(x: Fraction, n: int) -> Fraction:
    out = _ONE
    for i in range(n):
        out *= x - i
    return out


def _classical_rising(x: Fraction, n: int) -> Fraction:
    out = _ONE
    for i in range(n):
        out *= x + i
    return out


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def sample_rv(rv: RandomVar, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized sampler built exclusively from PCG64 uniform draws.

    Every rejection loop draws full-width uniform arrays, so for a fixed seed
    the consumed stream (and hence the output) is identical across runs.
    """
    kind = rv.kind
    if kind == "pointmass":
        return np.full(size, float(rv.param("c")))
    if kind == "uniform01":
        return rng.random(size)
    if kind == "bernoulli":
        return (rng.random(size) < float(rv.param("p"))).astype(np.float64)
    if kind == "binomial":
        m, p = int(rv.param("m")), float(rv.param("p"))
        out = np.zeros(size)
        for _ in range(m):
            out += rng.random(size) < p
        return out
    if kind == "poisson":
        return _poisson_knuth(rng, float(rv.param("alpha")), size)
    if kind == "exponential":
        return -np.log1p(-rng.random(size)) / float(rv.param("alpha"))
    if kind == "gamma":
        shape, rate = float(rv.param("alpha")), float(rv.param("beta"))
        return _gamma_marsaglia_tsang(rng, shape, size) / rate
    if kind == "geometric":
        p = float(rv.param("p"))
        return np.floor(np.log1p(-rng.random(size)) / np.log1p(-p)) + 1.0
    if kind == "normal":
        mu, sigma2 = float(rv.param("mu")), float(rv.param("sigma2"))
        return mu + np.sqrt(sigma2) * _standard_normal(rng, size)
    if kind == "negbinomial":
        r, p = int(rv.param("r")), float(rv.param("p"))
        out = np.zeros(size)
        for _ in range(r):
            out += np.floor(np.log1p(-rng.random(size)) / np.log1p(-p))
        return out
    raise ValueError(f"{rv.describe()} is not samplable")


def _standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    u1 = rng.random(size)
    u2 = rng.random(size)
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def _poisson_knuth(rng: np.random.Generator, alpha: float, size: int) -> np.ndarray:
    limit = np.exp(-alpha)
    prod = np.ones(size)
    count = np.zeros(size)
    active = np.ones(size, dtype=bool)
    while active.any():
        prod = np.where(active, prod * rng.random(size), prod)
        count = np.where(active, count + 1.0, count)
        active &= prod > limit
    return count - 1.0


def _gamma_marsaglia_tsang(rng: np.random.Generator, shape: float, size: int) -> np.ndarray:
    boosted = shape < 1.0
    a = shape + 1.0 if boosted else shape
    d = a - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(size)
    need = np.ones(size, dtype=bool)
    while need.any():
        x = _standard_normal(rng, size)
        u = rng.random(size)
        v = (1.0 + c * x) ** 3
        with np.errstate(divide="ignore", invalid="ignore"):
            log_v = np.where(v > 0, np.log(np.where(v > 0, v, 1.0)), 0.0)
            log_u = np.log(np.where(u > 0, u, 1e-300))
        accept = need & (v > 0) & (log_u < 0.5 * x * x + d - d * v + d * log_v)
        out[accept] = d * v[accept]
        need &= ~accept
    if boosted:
        u = rng.random(size)
        out *= np.power(np.where(u > 0, u, 1e-300), 1.0 / shape)
    return out


def mc_check(rv: RandomVar, lam, n: int, j: int, samples: int, seed: int) -> MCEstimate:
    """Monte Carlo estimate of the degenerate falling-factorial moment of the
    j-fold i.i.d. sum, compared with the exact engine value as a z-score."""
    lam = Fraction(lam)
    if not rv.is_samplable:
        raise ValueError(f"{rv.describe()} is not samplable")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    rng = np.random.Generator(np.random.PCG64(seed))
    total = np.zeros(samples)
    for _ in range(j):
        total += sample_rv(rv, samples, rng)
    lam_f = float(lam)
    values = np.ones(samples)
    for i in range(n):
        values *= total - i * lam_f
    estimate = float(values.mean())
    std_error = float(values.std(ddof=1) / np.sqrt(samples))
    exact = sj_moment(rv, lam, j, n)
    if std_error == 0.0:
        z = 0.0 if estimate == float(exact) else float("inf")
    else:
        z = (estimate - float(exact)) / std_error
    target = f"E[(S_{j})_{{{n},{lam}}}] for {rv.describe()}"
    return MCEstimate(target, samples, seed, estimate, std_error, exact, z)
