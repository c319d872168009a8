"""Problem instances and concrete oracle strings for the weakened promise.

A string of N = 2**n function values is either nearly balanced (N/2 +- y
zeros) or nearly constant (N - y or y zeros).  Every analytic formula in the
package is parameterised by a :class:`ProblemInstance`; the simulators also
build explicit :class:`OracleString` values from one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

MAX_ORACLE_BITS = 1 << 24


class PromiseCase(enum.Enum):
    """Which of the four weakened-promise families a string belongs to."""

    BALANCED_EXCESS_ZEROS = "1a"
    BALANCED_EXCESS_ONES = "1b"
    CONSTANT_ZERO_BASE = "2a"
    CONSTANT_ONE_BASE = "2b"

    @property
    def is_balanced(self) -> bool:
        return self in BALANCED_CASES

    def zero_count(self, N: int, y: int) -> int:
        if self is PromiseCase.BALANCED_EXCESS_ZEROS:
            return N // 2 + y
        if self is PromiseCase.BALANCED_EXCESS_ONES:
            return N // 2 - y
        if self is PromiseCase.CONSTANT_ZERO_BASE:
            return N - y
        return y


BALANCED_CASES = (PromiseCase.BALANCED_EXCESS_ZEROS, PromiseCase.BALANCED_EXCESS_ONES)
CONSTANT_CASES = (PromiseCase.CONSTANT_ZERO_BASE, PromiseCase.CONSTANT_ONE_BASE)


@dataclass(frozen=True)
class ProblemInstance:
    """n input bits, y promise-breaking flips, prior p that the string is balanced."""

    n: int
    y: int = 0
    p: float = 0.5
    N: int = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if int(self.y) != self.y or self.y < 0:
            raise ValueError(f"y must be a non-negative integer, got {self.y!r}")
        N = 1 << int(self.n)
        if 2 * self.y > N:
            raise ValueError(f"y={self.y} exceeds N/2={N // 2}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"prior p must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "N", N)

    @classmethod
    def from_u(cls, n: int, u: float, p: float = 0.5) -> "ProblemInstance":
        """Instance with y = round(u * N), halves rounded up."""
        N = 1 << n
        y = int(math.floor(u * N + 0.5))
        return cls(n=n, y=y, p=p)

    @property
    def u(self) -> float:
        return self.y / self.N

    @property
    def u_exact(self) -> Fraction:
        return Fraction(self.y, self.N)


@dataclass(frozen=True)
class OracleString:
    """Packed table of the N function values f(0) ... f(N-1)."""

    packed: np.ndarray
    N: int
    n0: int

    @classmethod
    def from_bits(cls, bits) -> "OracleString":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or np.any(bits > 1):
            raise ValueError("bits must be a 1-d array of 0/1 values")
        N = int(bits.size)
        n0 = N - int(np.count_nonzero(bits))
        packed = np.packbits(bits)
        packed.setflags(write=False)
        return cls(packed=packed, N=N, n0=n0)

    @property
    def bits(self) -> np.ndarray:
        return np.unpackbits(self.packed, count=self.N)

    @property
    def n1(self) -> int:
        return self.N - self.n0

    def __len__(self):
        return self.N


def generate_oracle(inst: ProblemInstance, case: PromiseCase, seed: int) -> OracleString:
    """Build a string of the given promise case with y flips at seeded random positions.

    Constant cases flip y distinct positions of the base value.  Balanced
    cases are built directly with N/2 + y (excess zeros) or N/2 - y zeros, so
    the net imbalance is exactly y.
    """
    N, y = inst.N, inst.y
    if 2 * y > N:
        raise ValueError(f"y={y} exceeds N/2={N // 2}")
    if case.is_balanced and N % 2:
        raise ValueError("balanced cases need an even N")
    if N > MAX_ORACLE_BITS:
        raise ValueError(f"N={N} exceeds the supported {MAX_ORACLE_BITS} bits")

    rng = np.random.default_rng(seed)
    n0 = case.zero_count(N, y)
    if case is PromiseCase.CONSTANT_ZERO_BASE:
        bits = np.zeros(N, dtype=np.uint8)
        bits[rng.choice(N, size=y, replace=False)] = 1
    elif case is PromiseCase.CONSTANT_ONE_BASE:
        bits = np.ones(N, dtype=np.uint8)
        bits[rng.choice(N, size=y, replace=False)] = 0
    else:
        bits = np.zeros(N, dtype=np.uint8)
        bits[rng.choice(N, size=N - n0, replace=False)] = 1

    s = OracleString.from_bits(bits)
    assert s.n0 == n0
    return s


def zero_count(s: OracleString) -> int:
    return s.n0


def dj_zero_amplitude(s: OracleString) -> Fraction:
    """Amplitude of |z=0> after the DJ circuit: (1/N) sum_x (-1)^f(x) = (n0 - n1)/N."""
    return Fraction(s.n0 - s.n1, s.N)


@dataclass(frozen=True)
class FailureEstimate:
    """Exact, asymptotic and empirical failure figures for one configuration."""

    exact: Optional[float] = None
    ln_asymptotic: Optional[float] = None
    empirical: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    trials: int = 0

    def __post_init__(self):
        for name in ("exact", "empirical", "ci_low", "ci_high"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 1:
                raise ValueError(f"{name}={v!r} is not a probability")
        if self.empirical is not None and self.ci_low is not None and self.ci_high is not None:
            if not self.ci_low <= self.empirical <= self.ci_high:
                raise ValueError("empirical rate lies outside its confidence interval")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
