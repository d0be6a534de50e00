"""Exact rational arithmetic and the combinatorial primitives built on it.

Every probability on the certification path is an arbitrary-precision
rational.  Floating point is banned there: subspace masses underflow a
double long before the certificate becomes vacuous.  ``Rational`` is
gmpy2's mpq, which keeps the gcd-reduced, positive-denominator canonical
form on every construction and is fast enough for the convolution-heavy
table builds.
"""

from __future__ import annotations

import math

from gmpy2 import mpq

import mpmath

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def binomial(n: int, c: int) -> int:
    """C(n, c) as an exact integer; 0 outside the domain 0 <= c <= n."""
    if c < 0 or c > n:
        return 0
    return math.comb(n, c)


def binom_pmf(c: int, k: int, p: Rational) -> Rational:
    """Exact Binom(c; k, p) = C(k,c) p^c (1-p)^(k-c)."""
    p = mpq(p)
    if p < 0 or p > 1:
        raise ValueError(f"success probability {p} outside [0, 1]")
    if c < 0 or c > k:
        raise ValueError(f"count {c} outside [0, {k}]")
    return binomial(k, c) * p**c * (1 - p) ** (k - c)


def parse_rational(text: str) -> Rational:
    """Parse 'num/den', plain decimal, or scientific notation exactly."""
    try:
        return mpq(text.strip())
    except ValueError as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(q: Rational, digits: int = 12, exact: bool = False) -> str:
    """Render a rational for CSV output.

    ``exact`` emits the lossless 'num/den' form; otherwise a decimal string
    with ``digits`` significant digits.  mpmath does the decimal conversion
    so values far below double-precision range still print correctly.
    """
    q = mpq(q)
    if exact:
        return f"{q.numerator}/{q.denominator}"
    if q == 0:
        return "0"
    with mpmath.workprec(int(digits * 3.33) + 24):
        x = mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)
        return mpmath.nstr(x, digits)
