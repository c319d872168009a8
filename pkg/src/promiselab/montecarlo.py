"""Seeded Monte Carlo simulation of the three deciders, and a brute-force
statevector run of the interrogation circuit for tiny N.

Trials are grouped in fixed blocks; block b draws from a Philox stream keyed
by (seed, b), so the counts do not depend on how many workers run the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.stats import binomtest

from .classical import SamplingModel, acceptance_window
from .oracle import PromiseCase, ProblemInstance, dj_zero_amplitude, generate_oracle
from .wvd import (
    AmplitudeProfile,
    ErrorCountDistribution,
    InferenceRule,
    _finish,
    amplitude_profile,
    error_count_distribution,
    fixed_error_count,
)

BLOCK_SIZE = 1 << 14
MAX_STATEVECTOR_BITS = 16
_CASES = tuple(PromiseCase)


@dataclass(frozen=True)
class TrialReport:
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float
    seed: int

    def __post_init__(self):
        if self.trials < 1 or not 0 <= self.failures <= self.trials:
            raise ValueError(f"bad counts: {self.failures}/{self.trials}")
        if not self.ci_low <= self.rate <= self.ci_high:
            raise ValueError("rate outside its confidence interval")

    def standard_error(self, p: float | None = None) -> float:
        p = self.rate if p is None else p
        return math.sqrt(p * (1 - p) / self.trials)


def wilson_report(failures: int, trials: int, seed: int) -> TrialReport:
    ci = binomtest(failures, trials).proportion_ci(confidence_level=0.95, method="wilson")
    rate = failures / trials
    return TrialReport(
        trials=trials,
        failures=failures,
        rate=rate,
        ci_low=min(float(ci.low), rate),
        ci_high=max(float(ci.high), rate),
        seed=seed,
    )


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_blocks(trials: int, seed: int, count_block, workers: int) -> int:
    sizes = [min(BLOCK_SIZE, trials - start) for start in range(0, trials, BLOCK_SIZE)]

    def run(b):
        return count_block(block_rng(seed, b), sizes[b])

    if workers <= 1:
        return sum(run(b) for b in range(len(sizes)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, range(len(sizes))))


def _draw_cases(rng: np.random.Generator, size: int, p: float) -> np.ndarray:
    """Case index into PromiseCase order; balanced w.p. p, each sub-variant w.p. 1/2."""
    balanced = rng.random(size) < p
    variant_a = rng.random(size) < 0.5
    return np.where(balanced, np.where(variant_a, 0, 1), np.where(variant_a, 2, 3))


def _case_oracles(inst: ProblemInstance, seed: int):
    return [generate_oracle(inst, case, seed + i) for i, case in enumerate(_CASES)]


_TRUTH_BALANCED = np.array([c.is_balanced for c in _CASES])


def simulate_dj(inst: ProblemInstance, k: int, trials: int, seed: int, workers: int = 1) -> TrialReport:
    """Majority vote over k DJ runs on one oracle per trial; a tie counts as failure."""
    if k < 1 or trials < 1:
        raise ValueError("k and trials must be >= 1")
    wrong = []
    for case, s in zip(_CASES, _case_oracles(inst, seed)):
        p_zero = float(dj_zero_amplitude(s) ** 2)
        wrong.append(p_zero if case.is_balanced else 1.0 - p_zero)
    wrong = np.array(wrong)

    def count(rng, size):
        cases = _draw_cases(rng, size, inst.p)
        bad_votes = rng.binomial(k, wrong[cases])
        return int(np.count_nonzero(2 * bad_votes >= k))

    return wilson_report(_run_blocks(trials, seed, count, workers), trials, seed)


def simulate_classical(
    inst: ProblemInstance,
    k: int,
    model: SamplingModel,
    trials: int,
    seed: int,
    workers: int = 1,
) -> TrialReport:
    """Quartile-window sampler: zeros among k sampled positions decide the answer."""
    if k < 1 or trials < 1:
        raise ValueError("k and trials must be >= 1")
    if model is SamplingModel.WITHOUT_REPLACEMENT and k > inst.N:
        raise ValueError(f"sampling without replacement needs k <= N, got k={k}, N={inst.N}")
    N = inst.N
    zeros = np.array([s.n0 for s in _case_oracles(inst, seed)])
    lo, hi = acceptance_window(k)

    def count(rng, size):
        cases = _draw_cases(rng, size, inst.p)
        n0 = zeros[cases]
        if model is SamplingModel.WITH_REPLACEMENT:
            k0 = rng.binomial(k, n0 / N)
        else:
            k0 = rng.hypergeometric(n0, N - n0, k)
        says_balanced = (k0 >= lo) & (k0 <= hi)
        return int(np.count_nonzero(says_balanced != _TRUTH_BALANCED[cases]))

    return wilson_report(_run_blocks(trials, seed, count, workers), trials, seed)


def simulate_wvd(
    inst: ProblemInstance,
    k: int,
    rule: InferenceRule,
    trials: int,
    seed: int,
    fixed_m: bool = False,
    workers: int = 1,
) -> TrialReport:
    """Reduced sampling model of the interrogation decider.

    t wrong bits are drawn from P(t | N, k) (or fixed at the typical value),
    then m0* ~ Binomial(N - t, N0/N) correct zeros and
    m0 = N - N0 - m + 2 m0* observed zeros feed the band rule.
    """
    N = inst.N
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    zeros = np.array([s.n0 for s in _case_oracles(inst, seed)])
    cdf = None if fixed_m else np.cumsum(error_count_distribution(N, k).probs)
    t_fixed = fixed_error_count(N, k)
    R = 4 * rule.alpha_threshold**2 * k * (N - k)

    def count(rng, size):
        cases = _draw_cases(rng, size, inst.p)
        n0 = zeros[cases]
        if fixed_m:
            t = np.full(size, t_fixed)
        else:
            t = np.minimum(np.searchsorted(cdf, rng.random(size) * cdf[-1], side="right"), N)
        m = N - t
        m0_star = rng.binomial(m, n0 / N)
        m0 = np.clip(N - n0 - m + 2 * m0_star, 0, N)
        d = (2 * m0 - N).astype(float)
        says_balanced = d * d < R
        return int(np.count_nonzero(says_balanced != _TRUTH_BALANCED[cases]))

    return wilson_report(_run_blocks(trials, seed, count, workers), trials, seed)


def walsh_hadamard(state: np.ndarray) -> np.ndarray:
    """Apply H on every qubit of a 2**N state vector (normalised transform)."""
    a = np.array(state, dtype=float)
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0, :] + a[:, 1, :], a[:, 0, :] - a[:, 1, :]), axis=1) / math.sqrt(2)
        h *= 2
    return a.reshape(size)


def statevector_wvd_distribution(
    N: int,
    k: int,
    profile: AmplitudeProfile | None = None,
    oracle_bits=None,
) -> ErrorCountDistribution:
    """Brute-force interrogation circuit on all 2**N basis strings.

    Prepares the Hamming-weight windowed state, applies the query phase
    (-1)^(F.x) on weights <= k (the ancilla is folded into the phase), takes
    the N-fold Hadamard transform and bins the outcome probabilities by the
    number of bits in which the measured string differs from F.
    """
    if N > MAX_STATEVECTOR_BITS:
        raise ValueError(f"statevector simulation limited to N <= {MAX_STATEVECTOR_BITS}, got {N}")
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    profile = amplitude_profile(k) if profile is None else profile
    bits = np.zeros(N, dtype=np.int64) if oracle_bits is None else np.asarray(oracle_bits, dtype=np.int64)
    if bits.shape != (N,):
        raise ValueError("oracle_bits must hold N values")
    F = int(np.dot(bits, 1 << np.arange(N, dtype=np.int64)))

    xs = np.arange(1 << N, dtype=np.int64)
    weight = np.bitwise_count(xs).astype(np.int64)
    alpha = np.zeros(N + 1)
    alpha[: profile.k + 1] = profile.alpha[: N + 1]
    norms = np.array([math.sqrt(comb(N, j)) for j in range(N + 1)])
    psi = np.where(weight <= k, alpha[weight] / norms[weight], 0.0)
    phase = 1 - 2 * (np.bitwise_count(xs & F).astype(np.int64) & 1)
    psi = np.where(weight <= k, phase * psi, psi)

    out = walsh_hadamard(psi)
    before, after = float(np.dot(psi, psi)), float(np.dot(out, out))
    if abs(before - after) > 1e-12:
        raise ArithmeticError(f"Hadamard transform changed the norm: {before!r} -> {after!r}")
    errors = np.bitwise_count(xs ^ F).astype(np.int64)
    probs = np.bincount(errors, weights=out * out, minlength=N + 1)
    return _finish(N, k, probs)
