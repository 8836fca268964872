"""Deterministic special-number families over exact rationals.

Degenerate falling/rising factorials, degenerate exponential and logarithm
series, the Stirling-type triangles (first/second kind, Lah, and the
rising-falling "heterogeneous" connection triangles), partial Bell
polynomials, higher-order Bernoulli/Daehee/Cauchy numbers, and a couple of
auxiliary families (Bernoulli-Pade, degenerate Frobenius-Euler).

Triangles are always computed from their generating functions; closed-form
and recurrence-based duplicates live in :mod:`probstirling.verify` so the
two computation paths stay independent.  All functions are pure, and the
parameter lam = 0 selects the classical (non-degenerate) specialization
exactly, never as a numeric limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .series import Series, Scalar

__all__ = [
    "Triangle",
    "binom",
    "falling_factorial",
    "rising_factorial",
    "deg_exp",
    "deg_log",
    "log_deg_exp",
    "triangle",
    "triangle_from_base",
    "partial_bell",
    "order_numbers",
    "bernoulli_pade_a2",
    "frobenius_euler",
    "lah_bell",
    "hetero_bell",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

TRIANGLE_FAMILIES = ("s1", "s2", "lah", "h", "g")


def _rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


def binom(top: Scalar, k: int) -> Fraction:
    """Generalized binomial coefficient C(top, k), zero for k < 0."""
    if k < 0:
        return _ZERO
    top = _rat(top)
    num = _ONE
    for i in range(k):
        num *= top - i
    return num / factorial(k)


def falling_factorial(x: Scalar, n: int, lam: Scalar) -> Fraction:
    """x(x - lam)(x - 2 lam)...(x - (n-1) lam); the empty product is 1.

    lam = 1 gives the ordinary falling factorial, lam = 0 gives x**n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x, lam = _rat(x), _rat(lam)
    out = _ONE
    for i in range(n):
        out *= x - i * lam
    return out


def rising_factorial(x: Scalar, n: int, lam: Scalar) -> Fraction:
    """x(x + lam)(x + 2 lam)...(x + (n-1) lam), computed directly.

    Deliberately not reduced to a sign-flipped falling factorial, so the two
    can cross-check each other.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x, lam = _rat(x), _rat(lam)
    out = _ONE
    for i in range(n):
        out *= x + i * lam
    return out


def deg_exp(lam: Scalar, x: Scalar, order: int) -> Series:
    """Degenerate exponential (1 + lam t)^(x/lam) as a series.

    Coefficients come straight from the defining expansion with degenerate
    falling factorials, so lam = 0 yields exp(x t) without a special case.
    """
    lam, x = _rat(lam), _rat(x)
    return Series.from_egf(
        falling_factorial(x, n, lam) for n in range(order + 1)
    )


def deg_log(lam: Scalar, order: int) -> Series:
    """Degenerate logarithm of 1 + t: ((1 + t)**lam - 1) / lam.

    This is the compositional inverse of deg_exp(lam, 1, order) - 1; at
    lam = 0 it degenerates to log(1 + t).
    """
    lam = _rat(lam)
    t = Series.t(order)
    if lam == 0:
        return t.log1p()
    return ((Series.one(order) + t).pow(lam) - Series.one(order)) / lam


def log_deg_exp(lam: Scalar, order: int) -> Series:
    """log of the degenerate exponential: (1/lam) log(1 + lam t), or t at lam = 0."""
    lam = _rat(lam)
    t = Series.t(order)
    if lam == 0:
        return t
    return t.scale(lam).log1p() / lam


@dataclass(frozen=True)
class Triangle:
    """Lower-triangular table of exact rationals indexed by (n, k).

    Entries outside 0 <= k <= n <= nmax read as zero.  `params` carries
    family-specific metadata (e.g. the random-variable description for the
    probabilistic variants) as (name, text) pairs.
    """

    family: str
    lam: Fraction
    nmax: int
    rows: tuple
    params: tuple = ()

    def value(self, n: int, k: int) -> Fraction:
        if 0 <= k <= n <= self.nmax:
            return self.rows[n][k]
        return _ZERO

    def __getitem__(self, nk) -> Fraction:
        n, k = nk
        return self.value(n, k)

    def row(self, n: int) -> tuple:
        return self.rows[n]


def triangle_from_base(base: Series, family: str, lam: Scalar, nmax: int,
                       params: tuple = ()) -> Triangle:
    """Triangle whose (n, k) entry is the EGF coefficient of base**k / k! at n.

    `base` must be a delta series of order >= nmax.
    """
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if base.order < nmax:
        raise ValueError("base series order is smaller than nmax")
    if base.coeffs[0] != 0:
        raise ValueError("triangle base must have zero constant term")
    b = base.truncate(nmax)
    fact = [factorial(i) for i in range(nmax + 1)]
    rows = [[_ZERO] * (n + 1) for n in range(nmax + 1)]
    power = Series.one(nmax)
    for k in range(nmax + 1):
        if k:
            power = power * b
        for n in range(k, nmax + 1):
            c = power.coeff(n)
            if c:
                rows[n][k] = c * fact[n] / fact[k]
    return Triangle(family, _rat(lam), nmax, tuple(tuple(r) for r in rows), params)


def _base_series(family: str, lam: Fraction, order: int) -> Series:
    if family == "s2":
        return deg_exp(lam, 1, order) - Series.one(order)
    if family == "s1":
        return deg_log(lam, order)
    if family == "lah":
        # t / (1 - t)
        return Series([_ZERO] + [_ONE] * order)
    if family == "h":
        return deg_exp(-lam, 1, order) - Series.one(order)
    if family == "g":
        return deg_log(-lam, order)
    raise ValueError(f"unknown triangle family {family!r}")


def triangle(family: str, lam: Scalar, nmax: int) -> Triangle:
    """Stirling-type triangle computed from its generating function.

    family: "s2" / "s1" (degenerate Stirling, classical at lam = 0),
    "lah" (lam ignored), "h" / "g" (the rising-to-falling connection
    coefficients and their inverses).
    """
    return _triangle_cached(family, _rat(lam), nmax)


@lru_cache(maxsize=None)
def _triangle_cached(family: str, lam: Fraction, nmax: int) -> Triangle:
    if nmax >= 1:
        base = _base_series(family, lam, nmax)
    else:
        base = Series.zero(0)
        _base_series(family, lam, 1)  # still validate the family tag
    return triangle_from_base(base, family, lam, nmax)


def partial_bell(x: Sequence[Scalar], n: int, k: int) -> Fraction:
    """Partial Bell polynomial B_{n,k}(x1, ..., x_{n-k+1}).

    Computed as the EGF coefficient at n of (sum x_m t^m / m!)**k / k!.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if len(x) < n - k + 1:
        raise ValueError(f"need at least {n - k + 1} sequence entries, got {len(x)}")
    if n == 0:
        return _ONE
    if k == 0:
        return _ZERO
    coeffs = [_ZERO] * (n + 1)
    for m in range(1, n - k + 2):
        coeffs[m] = _rat(x[m - 1]) / factorial(m)
    power = Series(coeffs).pow(k)
    return power.egf(n) / factorial(k)


def order_numbers(lam: Scalar, gamma: Scalar, x: Scalar, family: str,
                  order: int) -> Series:
    """Series of higher-order degenerate Bernoulli, Daehee or Cauchy numbers.

    EGF coefficients of, respectively,

        bernoulli: (t / (e_lam(t) - 1))**gamma * e_lam(t)**x
        daehee:    (log_lam(1 + t) / t)**gamma
        cauchy:    (t / log_lam(1 + t))**gamma

    where e_lam / log_lam are the degenerate exponential and logarithm.  Both
    bases have unit constant term, so any rational gamma is valid.  The shift
    x is only defined for the bernoulli family.
    """
    lam, gamma, x = _rat(lam), _rat(gamma), _rat(x)
    if family == "bernoulli":
        e = deg_exp(lam, 1, order + 1)
        q = Series.one(order) / (e - Series.one(order + 1)).shift_down(1)
        result = q.pow(gamma)
        if x:
            result = result * deg_exp(lam, x, order)
        return result
    if x != 0:
        raise ValueError(f"the {family} family does not take a shift argument")
    log_over_t = deg_log(lam, order + 1).shift_down(1)
    if family == "daehee":
        return log_over_t.pow(gamma)
    if family == "cauchy":
        return (Series.one(order) / log_over_t).pow(gamma)
    raise ValueError(f"unknown order-number family {family!r}")


def bernoulli_pade_a2(order: int) -> Series:
    """Series (t^2/2!) / (e^t - 1 - t); its EGF coefficients start 1, -1/3, ..."""
    n = order + 2
    e = deg_exp(0, 1, n)
    den = (e - Series.one(n) - Series.t(n)).shift_down(2)
    return (Series.one(order) / den).scale(Fraction(1, 2))


def frobenius_euler(lam: Scalar, r: int, u: Scalar, order: int) -> Series:
    """Degenerate Frobenius-Euler numbers of order r: ((1-u)/(e_lam(t)-u))**r."""
    lam, u = _rat(lam), _rat(u)
    if u == 1:
        raise ValueError("parameter u must differ from 1")
    if r < 0 or not isinstance(r, int):
        raise ValueError("order r must be a nonnegative integer")
    den = deg_exp(lam, 1, order) - Series.constant(u, order)
    base = Series.constant(1 - u, order) / den
    return base.pow(r)


def lah_bell(x: Scalar, n: int) -> Fraction:
    """Lah-Bell polynomial value: sum_k L(n,k) x**k."""
    x = _rat(x)
    t = triangle("lah", 0, n)
    return sum((t.value(n, k) * x**k for k in range(n + 1)), _ZERO)


def hetero_bell(lam: Scalar, x: Scalar, n: int) -> Fraction:
    """Bell-type polynomial over the rising-connection triangle: sum_k H(n,k) x**k."""
    lam, x = _rat(lam), _rat(x)
    t = triangle("h", lam, n)
    return sum((t.value(n, k) * x**k for k in range(n + 1)), _ZERO)
