import math
from fractions import Fraction
from itertools import product

import pytest

from promiselab._numeric import ApproximationDomainError, ln_prob
from promiselab.dj import (
    dj_leading_coefficient,
    dj_ln_failure_asymptotic,
    dj_ln_failure_con_normal,
    dj_majority_failure,
    dj_single_errors,
    dj_single_failure,
)
from promiselab.oracle import ProblemInstance, PromiseCase, dj_zero_amplitude, generate_oracle


def test_single_errors_examples(inst):
    e = dj_single_errors(inst(4, 0))
    assert (e.p_bal, e.p_con) == (0, 0)
    e = dj_single_errors(inst(4, 2))
    assert (e.p_bal, e.p_con) == (Fraction(1, 16), Fraction(7, 16))
    e = dj_single_errors(inst(4, 8))
    assert (e.p_bal, e.p_con) == (1, 1)


def test_single_errors_match_generated_strings():
    inst = ProblemInstance(4, 2)
    e = dj_single_errors(inst)
    amp_bal = dj_zero_amplitude(generate_oracle(inst, PromiseCase.BALANCED_EXCESS_ONES, 0))
    amp_con = dj_zero_amplitude(generate_oracle(inst, PromiseCase.CONSTANT_ONE_BASE, 0))
    assert e.p_bal == amp_bal**2
    assert e.p_con == 1 - amp_con**2


def test_single_failure_examples(inst):
    assert dj_single_failure(inst(4, 2)) == Fraction(1, 4)
    assert dj_single_failure(inst(4, 2, p=1)) == Fraction(1, 16)
    assert dj_single_failure(inst(6, 0, p=0.3)) == 0


def test_majority_examples(inst):
    assert dj_majority_failure(inst(4, 2), 1) == Fraction(1, 4)
    assert dj_majority_failure(inst(4, 2), 3) == Fraction(856, 4096)
    assert dj_majority_failure(inst(7, 0), 11) == 0


def test_majority_brute_force():
    # enumerate every vote pattern of k=3 queries
    inst = ProblemInstance(4, 2)
    e = dj_single_errors(inst)
    total = Fraction(0)
    for q, p in ((e.p_bal, Fraction(1, 2)), (e.p_con, Fraction(1, 2))):
        for votes in product((0, 1), repeat=3):
            if 2 * sum(votes) >= 3:
                total += p * math.prod(q if v else 1 - q for v in votes)
    assert total == dj_majority_failure(inst, 3)


def test_half_prior_identity():
    for n in range(1, 21):
        N = 1 << n
        for y in {0, 1, N // 8, N // 4, N // 2 - 1, N // 2}:
            assert dj_single_failure(ProblemInstance(n, y)) == Fraction(y * 2, N)


def test_monotone_in_y():
    vals = [dj_single_failure(ProblemInstance(6, y)) for y in range(32)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_majority_amplification():
    inst = ProblemInstance(6, 5)
    vals = [dj_majority_failure(inst, k) for k in range(1, 40, 2)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_con_exceeds_bal_below_quarter():
    for y in range(1, 16):
        e = dj_single_errors(ProblemInstance(6, y))
        assert e.p_con > e.p_bal


def test_asymptotic_spot_value():
    assert dj_ln_failure_asymptotic(0.01, 100) == pytest.approx(-283.8, abs=0.05)


def test_asymptotic_scaling():
    u, k = 0.03, 500
    g = 1 - 8 * u * (1 - u)
    step = -(k / 32) / u * g * g / ((1 - u) * (1 - 2 * u) ** 2) - 0.5 * math.log(2)
    diff = dj_ln_failure_asymptotic(u, 2 * k) - dj_ln_failure_asymptotic(u, k)
    assert diff == pytest.approx(step, rel=1e-12)
    assert -k * dj_leading_coefficient(u) == pytest.approx(step + 0.5 * math.log(2), rel=1e-12)


def test_asymptotic_domain():
    with pytest.raises(ApproximationDomainError):
        dj_ln_failure_asymptotic(0.0, 10)
    with pytest.raises(ApproximationDomainError):
        dj_ln_failure_asymptotic((2 - math.sqrt(2)) / 4, 10)


def test_consistency_with_exact():
    # Gaussian-tail expansion vs exact binomial tail
    inst = ProblemInstance.from_u(14, 0.01)
    exact = ln_prob(dj_majority_failure(inst, 1001))
    rel = abs(dj_ln_failure_asymptotic(inst.u, 1001) - exact) / abs(exact)
    assert rel < 0.05


@pytest.mark.parametrize("u", [0.002, 0.01, 0.03, 0.049])
def test_normal_bridge(u):
    k = 1001
    inst = ProblemInstance.from_u(14, u)
    exact = ln_prob(dj_majority_failure(inst, k))
    approx = dj_ln_failure_con_normal(inst.u, k)
    assert abs(approx - exact) <= math.log(2)
