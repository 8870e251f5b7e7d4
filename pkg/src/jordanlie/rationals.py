"""Exact rational scalars and their decimal-free string form.

All arithmetic in this package runs over ``fractions.Fraction``; floats are
never produced or accepted.  JSON carries rationals as ``"p/q"`` strings
(or ``"p"`` when the denominator is 1).
"""

from __future__ import annotations

from fractions import Fraction

Q = Fraction

ZERO = Q(0)
ONE = Q(1)
HALF = Q(1, 2)


def fmt(x: Fraction) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse(s: str) -> Fraction:
    """Parse a "p/q" or "p" string (integers only, no decimal points)."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Q(int(num), int(den))
    return Q(int(s))
