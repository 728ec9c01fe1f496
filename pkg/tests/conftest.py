import random
from fractions import Fraction

import pytest


@pytest.fixture
def rng():
    return random.Random(20260810)


def rational(rng, lo=-4, hi=4, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def univariate_moments(rng, order, unit=Fraction(1), lo=-4, hi=4, den=3):
    return [unit] + [rational(rng, lo, hi, den) for _ in range(order)]


def necklace_function(rng, lo=-4, hi=4, den=3):
    """Random word function constant on rotation classes (a tracial source)."""
    vals = {}

    def fn(word):
        word = tuple(word)
        n = len(word)
        rep = min(word[i:] + word[:i] for i in range(n))
        if rep not in vals:
            vals[rep] = rational(rng, lo, hi, den)
        return vals[rep]

    return fn
