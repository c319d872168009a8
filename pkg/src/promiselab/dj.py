"""Deutsch-Jozsa failure probabilities when the promise is broken by y flips.

A single query errs with probability p_bal = (2y/N)**2 on a nearly balanced
string and p_con = 1 - (1 - 2y/N)**2 on a nearly constant one.  With k queries
the decision is a majority vote; ties count as failures.

Exact results are Fractions (all inputs are rational), so P_fail values far
below the double range are still available through :func:`ln_prob`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ._numeric import ApproximationDomainError, as_fraction, log_erfc, ln_prob
from .oracle import ProblemInstance


@dataclass(frozen=True)
class DjErrorPair:
    p_bal: Fraction
    p_con: Fraction


@dataclass(frozen=True)
class DjMajorityStats:
    k: int
    mu_bal: float
    mu_con: float
    var_bal: float
    var_con: float


def _check(inst: ProblemInstance):
    if 2 * inst.y > inst.N:
        raise ValueError(f"y={inst.y} exceeds N/2={inst.N // 2}")


def dj_single_errors(inst: ProblemInstance) -> DjErrorPair:
    _check(inst)
    N, y = inst.N, inst.y
    # y^2 2^(2-2n) and y 2^(2-n) - y^2 2^(2-2n) over the common denominator N^2
    return DjErrorPair(p_bal=Fraction(4 * y * y, N * N), p_con=Fraction(4 * y * (N - y), N * N))


def dj_single_failure(inst: ProblemInstance) -> Fraction:
    e = dj_single_errors(inst)
    p = as_fraction(inst.p)
    return p * e.p_bal + (1 - p) * e.p_con


def _tail_numerator(a: int, d: int, k: int) -> int:
    # sum_{r >= k/2} C(k, r) a^r (d - a)^(k - r); the value is this over d^k
    b = d - a
    return sum(comb(k, r) * a**r * b ** (k - r) for r in range((k + 1) // 2, k + 1))


def dj_majority_failure(inst: ProblemInstance, k: int) -> Fraction:
    """Exact probability that at least k/2 of k queries give the wrong answer."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check(inst)
    N, y = inst.N, inst.y
    d = N * N
    p = as_fraction(inst.p)
    den = d**k
    bal = Fraction(_tail_numerator(4 * y * y, d, k), den)
    con = Fraction(_tail_numerator(4 * y * (N - y), d, k), den)
    return p * bal + (1 - p) * con


def dj_majority_stats(inst: ProblemInstance, k: int) -> DjMajorityStats:
    e = dj_single_errors(inst)
    pb, pc = float(e.p_bal), float(e.p_con)
    return DjMajorityStats(
        k=k,
        mu_bal=k * pb,
        mu_con=k * pc,
        var_bal=k * pb * (1 - pb),
        var_con=k * pc * (1 - pc),
    )


def _ln_upper_tail_normal(k: int, mu: float, var: float) -> float:
    # ln( 1/2 erfc((k/2 - mu) / (sigma sqrt 2)) ); sigma = 0 is a point mass
    if var <= 0:
        return 0.0 if mu >= k / 2 else -math.inf
    x = (k / 2 - mu) / math.sqrt(2 * var)
    return log_erfc(x) - math.log(2)


def dj_ln_failure_normal(inst: ProblemInstance, k: int) -> float:
    """ln P_fail from the normal approximation to both majority-vote binomials."""
    s = dj_majority_stats(inst, k)
    p = float(inst.p)
    terms = []
    if p > 0:
        terms.append(math.log(p) + _ln_upper_tail_normal(k, s.mu_bal, s.var_bal))
    if p < 1:
        terms.append(math.log1p(-p) + _ln_upper_tail_normal(k, s.mu_con, s.var_con))
    top = max(terms)
    if top == -math.inf:
        return top
    return top + math.log(sum(math.exp(t - top) for t in terms))


def dj_ln_failure_con_normal(u: float, k: int) -> float:
    """ln of 1/4 erfc[(k/2 - mu_con)/(sigma_con sqrt 2)], the dominant term at p = 1/2."""
    pc = 4 * u * (1 - u)
    mu, var = k * pc, k * pc * (1 - pc)
    return math.log(0.5) + _ln_upper_tail_normal(k, mu, var)


def dj_ln_failure_asymptotic(u: float, k: int) -> float:
    """Large-k, small-u expansion of ln P_fail at p = 1/2, all six terms.

    Only meaningful while 1 - 8u(1-u) > 0 (single-query constant error below
    one half); beyond that the expression is still evaluated as written.
    """
    if not 0 < u < 0.5:
        raise ApproximationDomainError(f"u={u!r} outside (0, 1/2)")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    g = 1 - 8 * u * (1 - u)
    if abs(g) < 1e-12:
        raise ApproximationDomainError(f"1 - 8u(1-u) vanishes at u={u!r}")
    h = (1 - u) * (1 - 4 * u + 4 * u * u)
    return (
        -(k / 32) / u * g * g / h
        - 0.5 * math.log(k)
        + 0.5 * math.log(u)
        + 0.5 * math.log(h)
        - math.log(abs(g))
        + 0.5 * math.log(1 / math.pi)
    )


def dj_leading_coefficient(u: float) -> float:
    """Coefficient c(u) with ln P_fail ~ -k c(u)."""
    g = 1 - 8 * u * (1 - u)
    return g * g / (32 * u * (1 - u) * (1 - 2 * u) ** 2)


def dj_ln_majority_failure(inst: ProblemInstance, k: int) -> float:
    return ln_prob(dj_majority_failure(inst, k))
