"""Approximate oracle interrogation applied to the weakened promise.

The interrogation returns an N-bit guess F' whose number of wrong bits t has
distribution

    P(t | N, k) = 2^-N C(N, t) ( sum_j alpha_j K_j(t; N) / sqrt C(N, j) )^2

for the real amplitude profile alpha_j.  The decision rule counts zeros m0 in
F' and answers balanced iff |m0/N - 1/2| < alpha * sqrt((k/N)(1 - k/N)).
"""

from __future__ import annotations

import enum
import functools
import math
import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from ._numeric import LN2, ApproximationDomainError, log_erfc
from .krawtchouk import KrawtchoukTable, build_table
from .oracle import BALANCED_CASES, PromiseCase, ProblemInstance

NORMALIZATION_TOL = 1e-9


class DegenerateBranchWarning(RuntimeWarning):
    """The constant-string branch has zero spread (u = 0); a limit value was used."""


class Decision(enum.Enum):
    BALANCED = "balanced"
    CONSTANT = "constant"


@dataclass(frozen=True)
class AmplitudeProfile:
    k: int
    alpha: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=float)
        if a.shape != (self.k + 1,):
            raise ValueError(f"alpha must have k+1={self.k + 1} entries, got {a.shape}")
        norm = float(np.dot(a, a))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"amplitude profile not normalised: sum alpha^2 = {norm!r}")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.alpha)


@dataclass(frozen=True)
class ErrorCountDistribution:
    N: int
    k: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (self.N + 1,):
            raise ValueError("probs must cover t = 0..N")
        if np.any(p < 0):
            raise ValueError("negative probability in error-count distribution")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def mean(self) -> float:
        return float(np.dot(np.arange(self.N + 1), self.probs))

    def moment(self, order: int) -> float:
        return float(np.dot(np.arange(self.N + 1, dtype=float) ** order, self.probs))


@dataclass(frozen=True)
class CaseStats:
    case: PromiseCase
    mu: float
    var: float


@dataclass(frozen=True)
class InferenceRule:
    alpha_threshold: float = 1.0

    def __post_init__(self):
        if not self.alpha_threshold >= 0:
            raise ValueError(f"alpha_threshold must be >= 0, got {self.alpha_threshold!r}")


def profile_window(k: int) -> tuple[int, int]:
    """Indices j with nonzero weight: k - floor(sqrt k) + 1 .. k."""
    return k - math.isqrt(k) + 1, k


def amplitude_profile(k: int) -> AmplitudeProfile:
    """Uniform weights on the top floor(sqrt k) Hamming-weight levels.

    For perfect squares each weight is k**-0.25 and the norm is one
    automatically; otherwise the weights are 1/sqrt(width).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    lo, hi = profile_window(k)
    width = hi - lo + 1
    alpha = np.zeros(k + 1)
    alpha[lo : hi + 1] = k**-0.25 if width * width == k else 1 / math.sqrt(width)
    return AmplitudeProfile(k=k, alpha=alpha)


def moment_kernel_1(i: int, j: int, N: int) -> float:
    """sum_t t gamma_ij(N, t), from the recursion and orthogonality."""
    if i == j:
        return N / 2
    if i == j + 1:
        return -0.5 * math.sqrt(i * (N - i + 1))
    if i == j - 1:
        return -0.5 * math.sqrt((i + 1) * (N - i))
    return 0.0


def moment_kernel_2(i: int, j: int, N: int) -> float:
    """sum_t t^2 gamma_ij(N, t): five bands around the diagonal."""
    if i == j:
        return 0.25 * ((i + 1) * (N - i) + i * (N - i + 1) + N * N)
    if i == j + 1:
        return -0.5 * N * math.sqrt(i * (N - i + 1))
    if i == j - 1:
        return -0.5 * N * math.sqrt((i + 1) * (N - i))
    if i + 1 == j - 1:
        return 0.25 * math.sqrt((N - i) * (N - i - 1) * (i + 1) * (i + 2))
    if i - 1 == j + 1:
        return 0.25 * math.sqrt((N - i + 2) * (N - i + 1) * (i - 1) * i)
    return 0.0


@functools.lru_cache(maxsize=16)
def _table(N: int, degree: int) -> KrawtchoukTable:
    return build_table(N, degree)


@functools.lru_cache(maxsize=16)
def _log_binomials(N: int) -> np.ndarray:
    # exact integers built incrementally; math.comb per t is quadratic in N
    out = np.empty(N + 1)
    c = 1
    for t in range(N + 1):
        out[t] = math.log(c)
        c = c * (N - t) // (t + 1)
    return out


def _check_profile(N: int, k: int, profile: AmplitudeProfile | None) -> AmplitudeProfile:
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    if profile is None:
        return amplitude_profile(k)
    if profile.k != k:
        raise ValueError(f"profile is for k={profile.k}, not k={k}")
    return profile


def output_amplitudes(N: int, k: int, profile: AmplitudeProfile | None = None) -> np.ndarray:
    """Signed amplitude shared by every output string with t wrong bits, times sqrt C(N,t)."""
    profile = _check_profile(N, k, profile)
    support = profile.support
    table = _table(N, int(support.max()))
    lnC = _log_binomials(N)
    amp = np.zeros(N + 1)
    for j in support:
        logs, signs = table.log_abs_sign(int(j))
        # |K_j(t)| sqrt(C(N,t) / (2^N C(N,j))) <= 1, so the exponent is never positive
        amp += profile.alpha[j] * signs * np.exp(logs + 0.5 * (lnC - N * LN2 - lnC[j]))
    return amp


def error_count_distribution(
    N: int, k: int, profile: AmplitudeProfile | None = None
) -> ErrorCountDistribution:
    """Distribution of the number of wrong bits t = 0..N after k-query interrogation.

    Built from exact Krawtchouk integers converted through their logarithms.
    The result is not renormalised: a total off by more than 1e-9 raises.
    """
    if profile is None:
        return _default_distribution(N, k)
    probs = output_amplitudes(N, k, profile) ** 2
    return _finish(N, k, probs)


@functools.lru_cache(maxsize=32)
def _default_distribution(N: int, k: int) -> ErrorCountDistribution:
    return _finish(N, k, output_amplitudes(N, k) ** 2)


def _finish(N, k, probs) -> ErrorCountDistribution:
    total = float(math.fsum(probs))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ArithmeticError(f"P(t|N={N},k={k}) sums to {total!r}, not 1")
    return ErrorCountDistribution(N=N, k=k, probs=probs)


def error_count_distribution_exact(N: int, k: int) -> list:
    """P(t | N, k) as exact sympy numbers for the default profile (small N only)."""
    import sympy

    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    lo, hi = profile_window(k)
    w = sympy.sqrt(sympy.Rational(1, hi - lo + 1))
    table = build_table(N, hi)
    out = []
    for t in range(N + 1):
        s = sum(w * table[j, t] / sympy.sqrt(comb(N, j)) for j in range(lo, hi + 1))
        out.append(sympy.expand(sympy.Rational(comb(N, t), 2**N) * s**2))
    return out


def moments_of_t(N: int, k: int, profile: AmplitudeProfile | None = None) -> tuple[float, float]:
    """(E t, Var t) from the banded bilinear forms, without summing over t."""
    profile = _check_profile(N, k, profile)
    a = profile.alpha
    idx = [int(j) for j in profile.support]
    e1 = e2 = 0.0
    for i in idx:
        for j in range(max(0, i - 2), min(k, i + 2) + 1):
            if a[j] == 0:
                continue
            w = a[i] * a[j]
            e1 += w * moment_kernel_1(i, j, N)
            e2 += w * moment_kernel_2(i, j, N)
    return e1, e2 - e1 * e1


def expected_correct_bits(N: int, k: float) -> float:
    """Large-N approximation N/2 + sqrt(k (N - k)); k = 0 gives blind guessing."""
    if not 0 <= k <= N:
        raise ValueError(f"need 0 <= k <= N, got k={k}, N={N}")
    return N / 2 + math.sqrt(k * (N - k))


def _spread(N: int, k: int) -> float:
    r = k / N
    return math.sqrt(r * (1 - r))


def case_stats(inst: ProblemInstance, k: int, case: PromiseCase) -> CaseStats:
    """Normal-approximation mean and variance of the observed zero count m0."""
    N, u = inst.N, inst.u
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    c = _spread(N, k)
    if case.is_balanced:
        shift = 2 * u * c
        var = N * (1 - 4 * u * u) * (0.5 + c)
    else:
        shift = (1 - 2 * u) * c
        var = N * 4 * u * (1 - u) * (0.5 + c)
    sign = 1 if case in (PromiseCase.BALANCED_EXCESS_ZEROS, PromiseCase.CONSTANT_ZERO_BASE) else -1
    return CaseStats(case=case, mu=N * (0.5 + sign * shift), var=var)


def optimal_alpha(u: float) -> float:
    if not 0 <= u < 0.5:
        raise ValueError(f"u={u!r} outside [0, 1/2)")
    return 1 + 2 * u - 4 * u * u - 2 * math.sqrt(u * (1 - u) * (1 - 4 * u * u))


def f_squared(N: float, k: int) -> float:
    """(1 - k/N) / (1 + 2 sqrt((k/N)(1 - k/N))); N = inf gives the N >> k limit 1."""
    if math.isinf(N):
        return 1.0
    r = k / N
    return (1 - r) / (1 + 2 * math.sqrt(r * (1 - r)))


def _erf_arguments(u: float, N: float, k: int, alpha: float) -> tuple[float, float]:
    s = math.sqrt(k * f_squared(N, k))
    x_bal = s * (alpha - 2 * u) / math.sqrt(1 - 4 * u * u)
    x_con = s * (1 - alpha - 2 * u) / math.sqrt(4 * u - 4 * u * u)
    return x_bal, x_con


def wvd_ln_failure_at(u: float, N: float, k: int, alpha: float, p: float = 0.5) -> float:
    """ln P_fail = ln[ p/2 erfc(x_bal) + (1-p)/2 erfc(x_con) ] in the large-N normal model."""
    if not 0 <= u < 0.5:
        raise ApproximationDomainError(f"u={u!r} outside [0, 1/2)")
    terms = []
    if u == 0:
        warnings.warn(
            "u = 0: constant-string spread vanishes, using the single-term limit",
            DegenerateBranchWarning,
            stacklevel=3,
        )
        s = math.sqrt(k * f_squared(N, k))
        if p > 0:
            terms.append(math.log(p / 2) + log_erfc(s * alpha))
        if p < 1 and alpha > 1:
            terms.append(math.log1p(-p))
    else:
        x_bal, x_con = _erf_arguments(u, N, k, alpha)
        if p > 0:
            terms.append(math.log(p / 2) + log_erfc(x_bal))
        if p < 1:
            terms.append(math.log((1 - p) / 2) + log_erfc(x_con))
    if not terms:
        return -math.inf
    return float(np.logaddexp.reduce(terms))


def wvd_failure_at(u: float, N: float, k: int, alpha: float, p: float = 0.5) -> float:
    return math.exp(wvd_ln_failure_at(u, N, k, alpha, p))


def wvd_failure(inst: ProblemInstance, k: int, rule: InferenceRule) -> float:
    """Normal-model failure probability of the band rule on this instance.

    At p = 1/2 this is 1/2 - 1/4 erf(x_bal) - 1/4 erf(x_con) with
    x_bal ~ sqrt(k)(alpha - 2u) f / sqrt(1 - 4u^2) and
    x_con ~ sqrt(k)(1 - alpha - 2u) f / sqrt(4u - 4u^2).
    """
    if not 1 <= k <= inst.N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={inst.N}")
    return wvd_failure_at(inst.u, inst.N, k, rule.alpha_threshold, inst.p)


def wvd_leading_coefficient(u: float, f2: float = 1.0) -> float:
    a = optimal_alpha(u)
    return (a - 2 * u) ** 2 / (1 - 4 * u * u) * f2


def wvd_ln_failure_asymptotic(u: float, k: int, N: float = math.inf) -> float:
    """Leading term -k (alpha - 2u)^2 f(N,k)^2 / (1 - 4u^2) at the optimal alpha.

    The O(ln k) correction is dropped.
    """
    if not 0 <= u < 0.5:
        raise ApproximationDomainError(f"u={u!r} outside [0, 1/2)")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return -k * wvd_leading_coefficient(u, f_squared(N, k))


def infer(m0: int, N: int, k: int, rule: InferenceRule) -> Decision:
    """Band decision on the observed zero count; a boundary hit counts as constant."""
    if not 0 <= m0 <= N:
        raise ValueError(f"m0={m0} outside [0, N={N}]")
    d = 2 * m0 - N
    # |m0/N - 1/2| < alpha sqrt((k/N)(1-k/N))  <=>  (2 m0 - N)^2 < 4 alpha^2 k (N - k)
    if d * d < 4 * rule.alpha_threshold**2 * k * (N - k):
        return Decision.BALANCED
    return Decision.CONSTANT


def fixed_error_count(N: int, k: int) -> int:
    return int(math.floor(N / 2 - math.sqrt(k * (N - k)) + 0.5))


def _band_mass(ts: np.ndarray, N: int, n0: int, k: int, alpha: float):
    """For each t: (P(decide balanced), P(decide constant)) over m0* ~ Bin(N - t, n0/N)."""
    from scipy.stats import binom  # deferred: scipy.stats is slow to import

    R = 4 * alpha * alpha * k * (N - k)
    r = math.sqrt(R)
    m = N - ts
    c0 = 2 * ts - 2 * n0 - N  # 2 m0 - N = 4 s + c0
    lo = np.floor((-r - c0) / 4).astype(np.int64) + 1
    hi = np.ceil((r - c0) / 4).astype(np.int64) - 1

    def inside(s):
        d = (4 * s + c0).astype(float)
        return d * d < R

    # float rounding of r can misplace a boundary by one step; settle it on the integer test
    lo = np.where(inside(lo - 1), lo - 1, lo)
    lo = np.where(inside(lo), lo, lo + 1)
    hi = np.where(inside(hi + 1), hi + 1, hi)
    hi = np.where(inside(hi), hi, hi - 1)
    lo = np.maximum(lo, 0)
    hi = np.minimum(hi, m)
    q = n0 / N
    empty = hi < lo
    outside = np.where(empty, 1.0, binom.cdf(lo - 1, m, q) + binom.sf(hi, m, q))
    # take the difference on whichever side of the mean the band sits, to keep small masses accurate
    inside_mass = np.where(
        lo - 1 >= m * q,
        binom.sf(lo - 1, m, q) - binom.sf(hi, m, q),
        binom.cdf(hi, m, q) - binom.cdf(lo - 1, m, q),
    )
    inside_mass = np.where(empty, 0.0, np.clip(inside_mass, 0.0, 1.0))
    return inside_mass, np.clip(outside, 0.0, 1.0)


def wvd_failure_sampling_model(
    inst: ProblemInstance, k: int, rule: InferenceRule, fixed_m: bool = False
) -> float:
    """Failure probability of the band rule under the reduced sampling model, summed exactly.

    t ~ P(t | N, k) (or t fixed at N/2 - sqrt(k(N-k)) when ``fixed_m``),
    m = N - t correct bits, m0* ~ Binomial(m, N0/N) correct zeros and
    m0 = N - N0 - m + 2 m0*.  This is the distribution the Monte Carlo
    simulator samples from.
    """
    N = inst.N
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    if fixed_m:
        ts = np.array([fixed_error_count(N, k)])
        pt = np.array([1.0])
    else:
        pt = error_count_distribution(N, k).probs
        keep = pt > 0
        ts, pt = np.arange(N + 1)[keep], pt[keep]
    p = float(inst.p)
    total = 0.0
    for case in PromiseCase:
        bal, con = _band_mass(ts, N, case.zero_count(N, inst.y), k, rule.alpha_threshold)
        wrong = con if case in BALANCED_CASES else bal
        weight = 0.5 * (p if case.is_balanced else 1 - p)
        total += weight * float(np.dot(pt, wrong))
    return min(max(total, 0.0), 1.0)


def argmin_alpha(u: float, N: float, k: int, p: float = 0.5) -> float:
    """Threshold minimising the normal-model failure probability (bounded Brent search on ln P_fail)."""
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(
        lambda a: wvd_ln_failure_at(u, N, k, a, p),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.x)
