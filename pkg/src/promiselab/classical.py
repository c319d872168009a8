"""Classical deciders: the promise-bound "stop at first disagreement" test and
proportion sampling with the quartile window.

The sampler reads k function values, counts zeros k0 and answers balanced iff
ceil(k/4) <= k0 <= floor(3k/4).  Every conditional probability is a finite
sum of rationals, so the exact path returns Fractions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ._numeric import ApproximationDomainError, as_fraction
from .oracle import PromiseCase, ProblemInstance


class SamplingModel(enum.Enum):
    WITH_REPLACEMENT = "with"
    WITHOUT_REPLACEMENT = "without"


@dataclass(frozen=True)
class ClassicalConditional:
    """P(B | case) for the four promise cases, B = "k0 inside the window"."""

    b_given_1a: Fraction
    b_given_1b: Fraction
    b_given_2a: Fraction
    b_given_2b: Fraction


def acceptance_window(k: int) -> tuple[int, int]:
    return -(-k // 4), (3 * k) // 4


def naive_classical_failure(N: int, k: int, p=Fraction(1, 2)) -> Fraction:
    """2p C(N/2, k) / C(N, k): k identical draws from an exactly balanced string."""
    if N % 2:
        raise ValueError(f"N must be even, got {N}")
    if not 1 <= k <= N:
        raise ValueError(f"k must satisfy 1 <= k <= N, got k={k}, N={N}")
    return 2 * as_fraction(p) * Fraction(comb(N // 2, k), comb(N, k))


def _window_mass(zeros: int, N: int, k: int, model: SamplingModel) -> Fraction:
    lo, hi = acceptance_window(k)
    if model is SamplingModel.WITH_REPLACEMENT:
        ones = N - zeros
        num = sum(comb(k, j) * zeros**j * ones ** (k - j) for j in range(lo, hi + 1))
        return Fraction(num, N**k)
    num = sum(comb(zeros, j) * comb(N - zeros, k - j) for j in range(lo, hi + 1))
    return Fraction(num, comb(N, k))


def classical_conditionals(
    inst: ProblemInstance, k: int, model: SamplingModel = SamplingModel.WITH_REPLACEMENT
) -> ClassicalConditional:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if model is SamplingModel.WITHOUT_REPLACEMENT and k > inst.N:
        raise ValueError(f"sampling without replacement needs k <= N, got k={k}, N={inst.N}")
    N, y = inst.N, inst.y
    return ClassicalConditional(
        *(_window_mass(case.zero_count(N, y), N, k, model) for case in PromiseCase)
    )


def classical_failure(
    inst: ProblemInstance, k: int, model: SamplingModel = SamplingModel.WITH_REPLACEMENT
) -> Fraction:
    c = classical_conditionals(inst, k, model)
    p = as_fraction(inst.p)
    half = Fraction(1, 2)
    return p * (1 - half * c.b_given_1a - half * c.b_given_1b) + (1 - p) * (
        half * c.b_given_2a + half * c.b_given_2b
    )


def classical_ln_failure_asymptotic(u: float, k: int) -> float:
    """Large-k expansion of ln P_fail keeping only the balanced-string term."""
    if not 0 <= u < 0.25:
        raise ApproximationDomainError(f"u={u!r} outside [0, 1/4)")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a = 1 - 4 * u
    b = 1 - 4 * u * u
    return (
        -(k / 8) * a * a / b
        - 0.5 * math.log(k)
        - 0.5 * math.log(a)
        + math.log(b)
        + 0.5 * math.log(8 / math.pi)
    )


def classical_leading_coefficient(u: float) -> float:
    return (1 - 4 * u) ** 2 / (8 * (1 - 4 * u * u))
