"""Helpers for exact rational arithmetic.

All polytope-facing data in this package is kept as `fractions.Fraction`.
Floating-point numbers appear only at the quantum-evaluation boundary and are
converted with `rationalize` (continued fractions with a denominator cap)
before they touch any exact computation.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "parse_rational",
    "format_rational",
    "rationalize",
    "integerize",
    "primitive",
]


def parse_rational(value) -> Fraction:
    """Parse a rational from an int, a Fraction or a 'p/q' / 'p' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot parse rational from {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> str:
    """Render a Fraction as 'p/q', or 'p' when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rationalize(x: float, max_denominator: int = 10**6, tol: float = 1e-9) -> Fraction:
    """Round a float to a nearby rational via continued fractions.

    The denominator is capped at `max_denominator`; if no rational within
    `tol` of `x` exists under that cap, a ValueError is raised rather than
    silently feeding a bad approximation into an exact computation.
    """
    r = Fraction(x).limit_denominator(max_denominator)
    if abs(float(r) - x) > tol:
        raise ValueError(
            f"no rational with denominator <= {max_denominator} within {tol} of {x}"
        )
    return r


def integerize(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector.

    Primitive means the gcd of all entries is 1 (the zero vector stays zero).
    The scale factor is always positive, so inequality senses are preserved.
    """
    fracs = [Fraction(v) for v in vec]
    lcm = 1
    for f in fracs:
        lcm = lcm // gcd(lcm, f.denominator) * f.denominator
    ints = [int(f * lcm) for f in fracs]
    return primitive(ints)


def primitive(ints: Iterable[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (kept positive)."""
    ints = tuple(ints)
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g <= 1:
        return ints
    return tuple(v // g for v in ints)
