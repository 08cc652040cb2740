"""Exact scalar coefficients.

All coefficients in this package are arbitrary-precision rationals, stored as
:class:`fractions.Fraction` (always in lowest terms, positive denominator).
This module provides the canonical "num/den" string form used by every file
format, so that serialized data is bit-exact.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction.

    Floats are rejected: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rational_str(q: Fraction) -> str:
    """Canonical string form: "3", "-1/2"."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
