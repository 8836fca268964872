"""Distribution-specific closed forms for the probabilistic triangles and logs.

For each of the nine named distributions, the second-kind entries, the
first-kind entries and the logarithm coefficients admit printed formulas in
terms of classical tables (Stirling, Lah, Frobenius-Euler, Bernoulli-Pade).
This module evaluates those formulas *literally*, without ever reverting a
series, so they can serve as an independent check of the reversion-based
engine in :mod:`probstirling.prob`.

Most formulas are finite sums of rationals and are returned as exact
`Fraction` values.  Four of them (gamma first kind; normal first kind and
log; negative-binomial both kinds) contain infinite sums over an auxiliary
index: those are evaluated as partial sums to a caller-chosen depth and
returned as :class:`NumericResult`, with a stabilization flag instead of a
convergence proof.  Partial sums are accumulated in exact rational
arithmetic wherever the terms are rational; floating point only enters for
the finitely many irrational scale factors of the negative-binomial first
kind (and for the final comparison value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Union

from .randomvars import RandomVar
from .series import Series
from .special import (
    binom,
    deg_log,
    falling_factorial,
    frobenius_euler,
    bernoulli_pade_a2,
    triangle,
)

__all__ = ["NumericResult", "closed_form", "uniform_first_kind"]

Scalar = Union[Fraction, int]
_ZERO = Fraction(0)
_ONE = Fraction(1)

_NAMED = (
    "bernoulli", "binomial", "poisson", "exponential", "gamma",
    "geometric", "normal", "negbinomial", "uniform01",
)


@dataclass(frozen=True)
class NumericResult:
    """Truncated evaluation of a printed infinite-sum formula.

    `stabilized` reports whether the partial sums moved by less than one part
    in 1e12 over the last five depth steps; an unstabilized value should be
    treated as inconclusive rather than wrong.
    """

    value: float
    depth: int
    stabilized: bool


def _rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


# ---------------------------------------------------------------------------
# Shared table access (bucketed so different requested sizes share a build)
# ---------------------------------------------------------------------------

def _tab(family: str, lam: Fraction, need: int):
    bucket = max(10, ((need + 29) // 30) * 30)
    return triangle(family, lam, bucket)


@lru_cache(maxsize=None)
def _fe_series(lam: Fraction, r: int, u: Fraction, order: int) -> Series:
    return frobenius_euler(lam, r, u, order)


@lru_cache(maxsize=None)
def _s1lam_columns(lam: Fraction, nmax: int, kmax: int) -> tuple:
    """Columns 0..kmax of the degenerate first-kind triangle, rows to nmax."""
    base = deg_log(lam, nmax)
    cols = []
    power = Series.one(nmax)
    for k in range(kmax + 1):
        if k:
            power = power * base
        kf = factorial(k)
        cols.append(tuple(power.egf(m) / kf for m in range(nmax + 1)))
    return tuple(cols)


# movement of the partial sums over five depth steps below this (relative)
# level implies a remaining tail far inside the 1e-9 comparison tolerance
# for the geometric-rate sums handled here
_STABILIZATION_RTOL = 1e-11


def _numeric(fn, depth: int) -> NumericResult:
    """Evaluate fn at `depth` and `depth - 5` and flag stabilization."""
    if depth < 10:
        raise ValueError("truncation depth must be >= 10")
    full = float(fn(depth))
    short = float(fn(depth - 5))
    stabilized = abs(full - short) <= _STABILIZATION_RTOL * max(1.0, abs(full))
    return NumericResult(full, depth, stabilized)


# ---------------------------------------------------------------------------
# Second-kind closed forms
# ---------------------------------------------------------------------------

def _s2_value(rv: RandomVar, lam: Fraction, n: int, k: int, depth: int):
    kind = rv.kind
    if kind == "bernoulli":
        return rv.param("p") ** k * _tab("s2", lam, n).value(n, k)
    if kind == "binomial":
        m, p = rv.param("m"), rv.param("p")
        s2c, s1c = _tab("s2", _ZERO, n), _tab("s1", _ZERO, n)
        s2l = _tab("s2", lam, n)
        total = _ZERO
        for j in range(k, n + 1):
            c_jk = s2c.value(j, k)
            if not c_jk:
                continue
            for i in range(j, n + 1):
                total += m**j * p**i * c_jk * s1c.value(i, j) * s2l.value(n, i)
        return total
    if kind == "poisson":
        alpha = rv.param("alpha")
        s2c, s2l = _tab("s2", _ZERO, n), _tab("s2", lam, n)
        return sum(
            (alpha**j * s2c.value(j, k) * s2l.value(n, j) for j in range(k, n + 1)),
            _ZERO,
        )
    if kind == "exponential":
        alpha = rv.param("alpha")
        s1c = _tab("s1", _ZERO, n)
        total = _ZERO
        for j in range(k, n + 1):
            c = binom(j, k) * falling_factorial(j - 1, j - k, 1)
            if c:
                total += c * alpha ** (-j) * lam ** (n - j) * s1c.value(n, j)
        return total
    if kind == "gamma":
        alpha, beta = rv.param("alpha"), rv.param("beta")
        s1c = _tab("s1", _ZERO, n)
        total = _ZERO
        for l in range(n + 1):
            s1v = s1c.value(n, l)
            if not s1v:
                continue
            for j in range(k + 1):
                sign = -1 if (k - j) % 2 else 1
                total += (
                    sign
                    * binom(k, j)
                    * falling_factorial(alpha * j + l - 1, l, 1)
                    * beta ** (-l)
                    * lam ** (n - l)
                    * s1v
                    / factorial(k)
                )
        return total
    if kind == "geometric":
        p = rv.param("p")
        u = 1 / (1 - p)
        total = _ZERO
        for j in range(k + 1):
            sign = -1 if j % 2 else 1
            total += sign * binom(k, j) * _fe_series(lam, j, u, n).egf(n)
        return total * (1 / (p - 1)) ** k / factorial(k)
    if kind == "normal":
        mu, sigma2 = rv.param("mu"), rv.param("sigma2")
        s2c, s1c = _tab("s2", _ZERO, n), _tab("s1", _ZERO, n)
        total = _ZERO
        for m in range(k, n + 1):
            s1v = s1c.value(n, m)
            if not s1v:
                continue
            for j in range(k, m + 1):
                c = binom(j, m - j)
                if not c:
                    continue
                total += (
                    Fraction(factorial(m), factorial(j))
                    * c
                    * mu ** (2 * j - m)
                    * (sigma2 / 2) ** (m - j)
                    * lam ** (n - m)
                    * s2c.value(j, k)
                    * s1v
                )
        return total
    if kind == "negbinomial":
        return _numeric(
            lambda d: _nb_s2_partial(rv.param("p"), int(rv.param("r")), lam, n, k, d),
            depth,
        )
    if kind == "uniform01":
        s2c, s1c = _tab("s2", _ZERO, 2 * n), _tab("s1", _ZERO, n)
        total = _ZERO
        for m in range(n + 1):
            s1v = s1c.value(n, m)
            if not s1v:
                continue
            for j in range(k + 1):
                sign = -1 if (k - j) % 2 else 1
                total += (
                    sign
                    * binom(k, j)
                    / binom(m + j, j)
                    * lam ** (n - m)
                    * s2c.value(m + j, j)
                    * s1v
                )
        return total / factorial(k)
    raise ValueError(f"no second-kind closed form for {kind!r}")


# ---------------------------------------------------------------------------
# First-kind closed forms
# ---------------------------------------------------------------------------

def _s1_value(rv: RandomVar, lam: Fraction, n: int, k: int, depth: int):
    kind = rv.kind
    if kind == "bernoulli":
        return rv.param("p") ** (-n) * _tab("s1", lam, n).value(n, k)
    if kind == "binomial":
        m, p = rv.param("m"), rv.param("p")
        s2c, s1c = _tab("s2", _ZERO, n), _tab("s1", _ZERO, n)
        s1l = _tab("s1", lam, n)
        total = _ZERO
        for j in range(k, n + 1):
            s1lv = s1l.value(j, k)
            if not s1lv:
                continue
            for i in range(j, n + 1):
                total += (
                    p ** (-j) * m ** (-i) * s2c.value(i, j) * s1c.value(n, i) * s1lv
                )
        return total
    if kind == "poisson":
        alpha = rv.param("alpha")
        s1c, s1l = _tab("s1", _ZERO, n), _tab("s1", lam, n)
        return sum(
            (alpha ** (-j) * s1l.value(j, k) * s1c.value(n, j) for j in range(k, n + 1)),
            _ZERO,
        )
    if kind == "exponential":
        alpha = rv.param("alpha")
        s2c, lah = _tab("s2", _ZERO, n), _tab("lah", _ZERO, n)
        total = _ZERO
        for j in range(k, n + 1):
            sign = -1 if (n - j) % 2 else 1
            total += (
                sign * lah.value(n, j) * alpha**j * lam ** (j - k) * s2c.value(j, k)
            )
        return total
    if kind == "gamma":
        alpha, beta = rv.param("alpha"), rv.param("beta")
        return _numeric(lambda d: _gamma_s1_partial(alpha, beta, lam, n, k, d), depth)
    if kind == "geometric":
        p = rv.param("p")
        lah, s1l = _tab("lah", _ZERO, n), _tab("s1", lam, n)
        return sum(
            (
                lah.value(n, j) * p**j * (p - 1) ** (n - j) * s1l.value(j, k)
                for j in range(k, n + 1)
            ),
            _ZERO,
        )
    if kind == "normal":
        if lam == 0:
            raise ValueError("the printed normal first-kind formula needs lam != 0")
        mu, sigma2 = rv.param("mu"), rv.param("sigma2")
        return _numeric(
            lambda d: _normal_s1_partial(mu, sigma2, lam, n, k, d), depth
        )
    if kind == "negbinomial":
        p, r = rv.param("p"), int(rv.param("r"))
        return _numeric(lambda d: _nb_s1_partial(p, r, lam, n, k, d), depth)
    if kind == "uniform01":
        return uniform_first_kind(lam, n, k)
    raise ValueError(f"no first-kind closed form for {kind!r}")


# ---------------------------------------------------------------------------
# Logarithm closed forms
# ---------------------------------------------------------------------------

def _deg_log_of_exp(exponent: Series, lam: Fraction) -> Series:
    """log_lam(e^{A(t)}) for a delta exponent A: (e^{lam A} - 1)/lam, or A itself."""
    if lam == 0:
        return exponent
    order = exponent.order
    return (exponent.scale(lam).exp() - Series.one(order)) / lam


def _deg_log_of_unit(r: Series, lam: Fraction) -> Series:
    """log_lam of a series with unit constant term: (r**lam - 1)/lam."""
    order = r.order
    if lam == 0:
        return (r - Series.one(order)).log1p()
    return (r.pow(lam) - Series.one(order)) / lam


@lru_cache(maxsize=None)
def _log_series(rv: RandomVar, lam: Fraction, order: int) -> Series:
    kind = rv.kind
    one, t = Series.one(order), Series.t(order)
    if kind == "bernoulli":
        return deg_log(lam, order).compose(t.scale(1 / rv.param("p")))
    if kind == "binomial":
        m, p = rv.param("m"), rv.param("p")
        inner = ((one + t).pow(1 / m) - one).scale(1 / p)
        return deg_log(lam, order).compose(inner)
    if kind == "poisson":
        return deg_log(lam, order).compose(t.log1p().scale(1 / rv.param("alpha")))
    if kind == "exponential":
        alpha = rv.param("alpha")
        exponent = (t * (one + t).pow(-1)).scale(alpha)
        return _deg_log_of_exp(exponent, lam)
    if kind == "gamma":
        alpha, beta = rv.param("alpha"), rv.param("beta")
        exponent = (one - (one + t).pow(-1 / alpha)).scale(beta)
        return _deg_log_of_exp(exponent, lam)
    if kind == "geometric":
        p = rv.param("p")
        ratio = (one + t) / (one + t.scale(1 - p))
        return _deg_log_of_unit(ratio, lam)
    if kind == "negbinomial":
        r, p = int(rv.param("r")), rv.param("p")
        ratio = (one - (one + t).pow(Fraction(-1, r)).scale(p)).scale(1 / (1 - p))
        return _deg_log_of_unit(ratio, lam)
    raise ValueError(f"no exact log pipeline for {kind!r}")


def _log_value(rv: RandomVar, lam: Fraction, n: int, depth: int):
    if n == 0:
        return _ZERO
    kind = rv.kind
    if kind == "normal":
        if lam == 0:
            raise ValueError("the printed normal log formula needs lam != 0")
        mu, sigma2 = rv.param("mu"), rv.param("sigma2")
        return _numeric(lambda d: _normal_log_partial(mu, sigma2, lam, n, d), depth)
    if kind == "uniform01":
        return uniform_first_kind(lam, n, 1)
    order = max(8, ((n + 7) // 8) * 8)
    return _log_series(rv, lam, order).egf(n)


# ---------------------------------------------------------------------------
# Infinite-sum partials (exact rational unless noted)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gamma_inner(alpha: Fraction, n: int, l: int) -> Fraction:
    total = _ZERO
    for j in range(l + 1):
        term = binom(l, j) * falling_factorial(Fraction(-j) / alpha, n, 1)
        total += -term if j % 2 else term
    return total


@lru_cache(maxsize=None)
def _gamma_s1_partial(alpha: Fraction, beta: Fraction, lam: Fraction,
                      n: int, k: int, depth: int) -> Fraction:
    s2c = _tab("s2", _ZERO, depth)
    total = _ZERO
    for l in range(k, depth + 1):
        s2v = s2c.value(l, k)
        if not s2v:
            continue
        total += (
            _gamma_inner(alpha, n, l)
            * beta**l
            * lam ** (l - k)
            * s2v
            / factorial(l)
        )
    return total


@lru_cache(maxsize=None)
def _normal_v(j: int, m: int) -> Fraction:
    """Alternating inner sum over l of C(j,l) (l/2)_m."""
    total = _ZERO
    for l in range(j + 1):
        term = binom(j, l) * falling_factorial(Fraction(l, 2), m, 1)
        total += -term if l % 2 else term
    return total


@lru_cache(maxsize=None)
def _normal_w(mu: Fraction, sigma2: Fraction, lam: Fraction,
              k: int, m: int, depth: int) -> Fraction:
    ratio = lam * mu / sigma2
    s2c = _tab("s2", _ZERO, depth)
    total = _ZERO
    for j in range(k, depth + 1):
        s2v = s2c.value(j, k)
        if not s2v:
            continue
        term = ratio**j * s2v * _normal_v(j, m) / factorial(j)
        total += -term if j % 2 else term
    return total


def _normal_s1_partial(mu: Fraction, sigma2: Fraction, lam: Fraction,
                       n: int, k: int, depth: int) -> Fraction:
    s1c = _tab("s1", _ZERO, n)
    total = _ZERO
    for m in range(n + 1):
        s1v = s1c.value(n, m)
        if not s1v:
            continue
        total += (
            s1v * 2**m * (sigma2 / mu**2) ** m * _normal_w(mu, sigma2, lam, k, m, depth)
        )
    return total / lam**k


def _normal_log_partial(mu: Fraction, sigma2: Fraction, lam: Fraction,
                        n: int, depth: int) -> Fraction:
    ratio = lam * mu / sigma2
    s1c = _tab("s1", _ZERO, n)
    total = _ZERO
    for m in range(n + 1):
        s1v = s1c.value(n, m)
        if not s1v:
            continue
        u = _ZERO
        for j in range(1, depth + 1):
            v1 = _normal_v(j, m) - (_ONE if m == 0 else _ZERO)  # drop the l = 0 term
            if not v1:
                continue
            term = ratio**j * v1 / factorial(j)
            u += -term if j % 2 else term
        total += s1v * 2**m * (sigma2 / mu**2) ** m * u
    return total / lam


@lru_cache(maxsize=None)
def _nb_inner2(p: Fraction, r: int, k: int, m: int) -> Fraction:
    s2c = _tab("s2", _ZERO, m)
    total = _ZERO
    for l in range(min(m, k) + 1):
        s2v = s2c.value(m, l)
        if s2v:
            total += (p**r - 1) ** (k - l) * p ** (r * l) * s2v / factorial(k - l)
    return total


@lru_cache(maxsize=None)
def _nb_ak(p: Fraction, r: int, k: int, j: int, depth: int) -> Fraction:
    s1c = _tab("s1", _ZERO, depth)
    total = _ZERO
    for m in range(j + 1):
        s1v = s1c.value(j, m)
        if s1v:
            total += (-r) ** m * s1v * _nb_inner2(p, r, k, m)
    return total


def _nb_s2_partial(p: Fraction, r: int, lam: Fraction,
                   n: int, k: int, depth: int) -> Fraction:
    total = _ZERO
    for j in range(depth + 1):
        a = _nb_ak(p, r, k, j, ((depth + 29) // 30) * 30)
        if a:
            total += (p - 1) ** j * falling_factorial(j, n, lam) * a / factorial(j)
    return total


@lru_cache(maxsize=None)
def _nb_s1_inner(p: Fraction, r: int, lam: Fraction,
                 n: int, l: int, kmax: int, depth: int) -> Fraction:
    cols = _s1lam_columns(lam, ((depth + 29) // 30) * 30, kmax)
    total = _ZERO
    for m in range(l, depth + 1):
        s1v = cols[l][m]
        if not s1v:
            continue
        term = (
            p**m * falling_factorial(Fraction(-m, r), n, 1) * s1v / factorial(m)
        )
        total += -term if m % 2 else term
    return total


def _nb_s1_partial(p: Fraction, r: int, lam: Fraction,
                   n: int, k: int, depth: int) -> float:
    # The scale factors (1/(1-p))**(lam l) and log_lam(1/(1-p))**(k-l) are
    # irrational for fractional lam, so this partial sum is a float.
    q = 1 / (1 - p)
    qf, lamf = float(q), float(lam)
    log_lam_q = math.log(qf) if lam == 0 else (qf**lamf - 1.0) / lamf
    total = 0.0
    for l in range(k + 1):
        inner = _nb_s1_inner(p, r, lam, n, l, k, depth)
        if not inner:
            continue
        scale = qf ** (lamf * l) * log_lam_q ** (k - l) / factorial(k - l)
        total += float(inner) * scale
    return total


# ---------------------------------------------------------------------------
# Uniform first kind: multinomial convolution over Bernoulli-Pade numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _a2_values(nmax: int) -> tuple:
    series = bernoulli_pade_a2(nmax)
    return tuple(series.egf(i) for i in range(nmax + 1))


@lru_cache(maxsize=None)
def _uni_m(parts: int, m: int) -> Fraction:
    """Sum over compositions of m into `parts` parts of multinomial * A2 products."""
    if parts == 0:
        return _ONE if m == 0 else _ZERO
    a2 = _a2_values(max(10, m))
    total = _ZERO
    for j in range(m + 1):
        rest = _uni_m(parts - 1, m - j)
        if rest and a2[j]:
            total += binom(m, j) * a2[j] * rest
    return total


@lru_cache(maxsize=None)
def _uni_t(parts: int, s: int) -> Fraction:
    """Sum over compositions of s into `parts` parts of multinomial / prod(l_i + 1)."""
    if parts == 0:
        return _ONE if s == 0 else _ZERO
    total = _ZERO
    for l in range(s + 1):
        rest = _uni_t(parts - 1, s - l)
        if rest:
            total += binom(s, l) / (l + 1) * rest
    return total


def uniform_first_kind(lam: Scalar, n: int, k: int) -> Fraction:
    """First-kind entry for the uniform distribution on [0, 1], evaluated from
    the Bernoulli-Pade multinomial formula (no reversion involved)."""
    lam = _rat(lam)
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n == 0:
        return _ONE
    total = _ZERO
    for m in range(n - k + 1):
        mm = _uni_m(n, m)
        if not mm:
            continue
        s = n - k - m
        tt = _uni_t(k, s)
        if tt:
            total += (n - m) * binom(n - k, m) * mm * lam**s * tt
    return Fraction(2**n, n) * binom(n, k) * total


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

def closed_form(rv: RandomVar, lam: Scalar, family: str, n: int, k: int = 0,
                depth: int = 60):
    """Evaluate the printed closed form for one triangle entry or log coefficient.

    family "s2" / "s1": value at (n, k).  family "log": EGF coefficient at n
    (k is ignored).  Finite formulas return an exact Fraction; formulas with
    an infinite auxiliary sum return a :class:`NumericResult` truncated at
    `depth`.
    """
    lam = _rat(lam)
    if rv.kind not in _NAMED:
        raise ValueError(f"no closed forms for {rv.kind!r} (named distributions only)")
    if n < 0:
        raise ValueError("n must be >= 0")
    if family == "log":
        return _log_value(rv, lam, n, depth)
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if family == "s2":
        return _s2_value(rv, lam, n, k, depth)
    if family == "s1":
        return _s1_value(rv, lam, n, k, depth)
    raise ValueError(f"unknown closed-form family {family!r}")
