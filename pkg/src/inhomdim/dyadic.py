"""Exact dyadic rationals p/2^m, backed by :class:`fractions.Fraction`.

Only parsing, formatting and exponent extraction live here; the arithmetic
itself is ``Fraction``'s.
"""

import re
from fractions import Fraction

_DYADIC_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")


def is_dyadic(x) -> bool:
    x = Fraction(x)
    den = x.denominator
    return den & (den - 1) == 0


def parse_dyadic(text) -> Fraction:
    """Parse ``"p/2^m"``, ``"p/q"``, a decimal string or a number.

    Raises ``ValueError`` if the value is not a dyadic rational.
    """
    if isinstance(text, str):
        m = _DYADIC_RE.match(text)
        if m:
            return Fraction(int(m.group(1)), 2 ** int(m.group(2)))
        value = Fraction(text.strip())
    else:
        value = Fraction(text)
    if not is_dyadic(value):
        raise ValueError(f"{text!r} is not a dyadic rational")
    return value


def dyadic_exponent(x) -> int:
    """Return m such that the reduced denominator of x is 2^m."""
    x = Fraction(x)
    if not is_dyadic(x):
        raise ValueError(f"{x} is not a dyadic rational")
    return x.denominator.bit_length() - 1


def format_dyadic(x, exponent=None) -> str:
    """Format as ``"p/2^m"``; ``exponent`` forces a (larger) common exponent."""
    x = Fraction(x)
    m = dyadic_exponent(x)
    if exponent is not None:
        if exponent < m:
            raise ValueError(f"{x} needs exponent >= {m}")
        m = exponent
    return f"{int(x * 2 ** m)}/2^{m}"
