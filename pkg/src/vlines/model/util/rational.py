"""
Exact rationals for slopes and intercepts.

Command lines and documents spell them "NUM/DEN" or as integers. Floats are refused:
line membership must be decided exactly.
"""

from fractions import Fraction

from .mixin_arbitrary_type import ArbitraryTypeMixin


class Rational(ArbitraryTypeMixin, Fraction):
    @classmethod
    def validate(cls, v):
        # Fraction instances are already exact; keep them as plain Fractions.
        if isinstance(v, Fraction):
            return Fraction(v)
        return cls.coerce(v)

    @classmethod
    def coerce(cls, v):
        if isinstance(v, bool) or isinstance(v, float):
            raise TypeError(f"rational expected, got [{type(v).__name__}] {v!r}")
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            return parse_rational(v)
        raise TypeError(f"rational expected, got [{type(v).__name__}]")


def parse_rational(text: str) -> Fraction:
    """Parse "NUM/DEN" or an integer string."""

    body = text.strip()
    num, sep, den = body.partition("/")
    try:
        if not sep:
            return Fraction(int(num))
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r} (expected NUM/DEN or an integer)")
