"""Exact rational scalars.

``fractions.Fraction`` is the scalar type everywhere; this module only adds
the wire format ("p/q" strings) and a strict parser that refuses floats.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value) -> Fraction:
    """Parse an exact rational from an int or a ``"p/q"`` / ``"p"`` string.

    Floats and decimal strings are rejected: they cannot be trusted to be exact.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ParseError(f"not an exact rational string: {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator: {value!r}")
        return Fraction(num, den)
    raise ParseError(f"not a rational: {value!r} ({type(value).__name__})")


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
