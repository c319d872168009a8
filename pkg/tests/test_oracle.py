from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promiselab.oracle import (
    OracleString,
    ProblemInstance,
    PromiseCase,
    dj_zero_amplitude,
    generate_oracle,
    zero_count,
)

A1a, A1b, A2a, A2b = PromiseCase


@pytest.mark.parametrize(
    "n, case, y, n0",
    [(3, A1a, 0, 4), (2, A2a, 1, 3), (4, A2b, 2, 2), (4, A1a, 3, 11)],
)
def test_generated_counts(n, case, y, n0):
    s = generate_oracle(ProblemInstance(n, y), case, seed=7)
    assert zero_count(s) == n0
    assert s.n1 == s.N - n0
    assert int(np.count_nonzero(s.bits == 0)) == n0


def test_zero_amplitude_examples():
    assert dj_zero_amplitude(OracleString.from_bits([0, 0, 0, 0])) == 1
    assert dj_zero_amplitude(OracleString.from_bits([0, 1] * 8)) == 0
    s = generate_oracle(ProblemInstance(4, 2), A2a, seed=1)
    assert dj_zero_amplitude(s) == Fraction(3, 4)


def test_zero_count_examples():
    assert zero_count(OracleString.from_bits([1] * 8)) == 0
    assert zero_count(OracleString.from_bits([0, 1] * 4)) == 4


def test_instance_validation():
    with pytest.raises(ValueError):
        ProblemInstance(4, 9)
    with pytest.raises(ValueError):
        ProblemInstance(0)
    with pytest.raises(ValueError):
        ProblemInstance(3, 1, p=1.5)
    assert ProblemInstance.from_u(12, 0.05).y == 205


def test_bits_roundtrip():
    bits = np.array([1, 0, 1, 1, 0, 0, 0, 1, 1, 0], dtype=np.uint8)
    s = OracleString.from_bits(bits)
    assert np.array_equal(s.bits, bits)
    assert len(s) == 10
    with pytest.raises(ValueError):
        OracleString.from_bits([0, 2])


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 10), frac=st.fractions(0, Fraction(1, 2)), case=st.sampled_from(list(PromiseCase)), seed=st.integers(0, 2**63))
def test_amplitude_magnitude_exact(n, frac, case, seed):
    N = 1 << n
    y = int(frac * N)
    s = generate_oracle(ProblemInstance(n, y), case, seed)
    want = Fraction(2 * y, N) if case.is_balanced else 1 - Fraction(2 * y, N)
    assert abs(dj_zero_amplitude(s)) == want


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**63), case=st.sampled_from(list(PromiseCase)))
def test_generation_is_pure(seed, case):
    inst = ProblemInstance(8, 17)
    a, b = generate_oracle(inst, case, seed), generate_oracle(inst, case, seed)
    assert np.array_equal(a.packed, b.packed)


def test_large_oracle_counts():
    s = generate_oracle(ProblemInstance(20, 1000), A1b, seed=3)
    assert s.n0 == (1 << 19) - 1000
