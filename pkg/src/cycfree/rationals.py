"""Exact rational backend.

gmpy2's mpq, when available, accelerates the word-level engines by a large
constant factor; arithmetic, comparisons and string forms match the stdlib
Fraction, which remains the fallback and the interchange type.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q

    HAVE_GMPY = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    HAVE_GMPY = False


def to_fraction(x):
    return Fraction(x.numerator, x.denominator)
