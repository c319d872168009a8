"""Small numerical helpers shared by the analysis modules."""

from __future__ import annotations

import math
from fractions import Fraction

from scipy.special import log_ndtr

LN2 = math.log(2.0)


class ApproximationDomainError(ValueError):
    """Raised when an asymptotic formula is evaluated outside its domain."""


def ln_prob(x) -> float:
    """Natural log of a probability given as a Fraction, int or float.

    Fractions are handled through their integer numerator and denominator so
    values far below the double-precision range (1e-300 and smaller) still
    produce a finite logarithm.
    """
    if isinstance(x, Fraction):
        if x.numerator == 0:
            return -math.inf
        return math.log(x.numerator) - math.log(x.denominator)
    if x == 0:
        return -math.inf
    return math.log(x)


def log_erfc(x: float) -> float:
    # erfc(x) = 2 * Phi(-x * sqrt(2)); log_ndtr stays accurate deep in the tail
    return LN2 + float(log_ndtr(-x * math.sqrt(2.0)))


def as_fraction(p) -> Fraction:
    """Exact rational for a prior given as Fraction, int or float (0.1 -> 1/10)."""
    if isinstance(p, (Fraction, int)):
        return Fraction(p)
    return Fraction(repr(float(p)))
