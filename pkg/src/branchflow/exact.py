"""Exact rational arithmetic plus shared integer tables.

Everything downstream assumes coefficients form an exact field: no floats
anywhere in the computational path.  ``Rational`` is gmpy2's mpq when that
extension is installed (noticeably faster on deep series products) and the
stdlib Fraction otherwise; the two are interchangeable members of
``numbers.Rational`` with identical string rendering.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

try:
    from gmpy2 import mpq as Rational

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rational = Fraction
    BACKEND = "fractions"

ZERO = Rational(0)
ONE = Rational(1)


def rational(value, denominator=None):
    """Coerce ints, strings like ``-7/3``, Fractions, or Rationals."""
    if denominator is not None:
        return Rational(value) / Rational(denominator)
    if isinstance(value, str):
        return Rational(Fraction(value))
    return Rational(value)


def rational_str(value) -> str:
    """Canonical ``num/den`` rendering (plain ``num`` when integral)."""
    return str(Rational(value))


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative argument {n}")
    return math.factorial(n)


def double_factorial(n: int) -> int:
    """n!! for n >= -1, with (-1)!! == 0!! == 1."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


_bernoulli_lock = threading.Lock()
_bernoulli_table: list = []


def bernoulli(n: int):
    """Bernoulli number B_n with the B_1 = -1/2 convention.

    Computed once as the reciprocal of (e^t - 1)/t in the series engine and
    cached; the table is extended in blocks under a lock so concurrent
    readers only ever observe fully written entries.
    """
    if n < 0:
        raise ValueError(f"Bernoulli number undefined for index {n}")
    if n >= len(_bernoulli_table):
        with _bernoulli_lock:
            if n >= len(_bernoulli_table):
                _fill_bernoulli(max(2 * n, 32))
    return _bernoulli_table[n]


def _fill_bernoulli(upto: int) -> None:
    # (e^t - 1)/t = sum t^k / (k+1)!; its reciprocal generates B_m / m!.
    from .series import ASCENDING, GradedSeries

    expm1_over_t = GradedSeries(
        ASCENDING,
        {k: Rational(1, factorial(k + 1)) for k in range(upto + 1)},
        prec=upto + 1,
    )
    gen = expm1_over_t.reciprocal()
    table = [gen.coefficient(m) * factorial(m) for m in range(upto + 1)]
    _bernoulli_table[:] = table
