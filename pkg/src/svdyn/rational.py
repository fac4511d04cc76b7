"""Helpers for the exact rational scalar used for every coordinate."""
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_rational(value: RationalLike) -> Fraction:
    """Convert an int, a ``p/q`` string or a Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, _RationalABC):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not a rational: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator: {value!r}")
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def pq(value: Fraction) -> str:
    """Always-``p/q`` rendering used by JSON reports."""
    return f"{value.numerator}/{value.denominator}"


def midpoint(a: Fraction, b: Fraction) -> Fraction:
    return (a + b) / 2
