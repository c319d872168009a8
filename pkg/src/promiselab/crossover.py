"""Crossover points where two deciders reach equal asymptotic failure rates.

Both comparisons reduce to equating leading coefficients c(u) in
ln P_fail ~ -k c(u); k cancels.  The difference has a second root past
u = (2 - sqrt 2)/4, where the DJ coefficient touches zero and turns back up,
so the solver takes the first sign change in the bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, newton

from .classical import classical_leading_coefficient
from .dj import dj_leading_coefficient
from .wvd import f_squared, wvd_leading_coefficient

DEFAULT_BRACKET = (0.001, 0.24)
SCAN_POINTS = 2000
RESIDUAL_TOL = 1e-10


class NoCrossoverError(ValueError):
    pass


@dataclass(frozen=True)
class CrossoverResult:
    pair: str
    u_star: float
    residual: float
    bracket: tuple[float, float]


def dj_classical_equation(u: float, k: float = 1.0) -> float:
    return k * dj_leading_coefficient(u) - k * classical_leading_coefficient(u)


def dj_wvd_equation(u: float, k: float = 1.0, f2: float = 1.0) -> float:
    return k * dj_leading_coefficient(u) - k * wvd_leading_coefficient(u, f2)


def find_first_root(g, lo: float, hi: float, pair: str = "") -> CrossoverResult:
    """Scan [lo, hi] for the first sign change of g, bisect it, then polish by secant."""
    grid = np.linspace(lo, hi, SCAN_POINTS + 1)
    values = np.array([g(u) for u in grid])
    flips = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)
    if flips.size == 0:
        raise NoCrossoverError(
            f"no sign change on [{lo}, {hi}]: g(lo)={values[0]!r}, g(hi)={values[-1]!r}"
        )
    a, b = float(grid[flips[0]]), float(grid[flips[0] + 1])
    u = bisect(g, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    try:
        polished = newton(g, u, x1=u + 1e-9, tol=1e-15, maxiter=20)
        if a <= polished <= b and abs(g(polished)) <= abs(g(u)):
            u = float(polished)
    except RuntimeError:
        pass
    residual = float(g(u))
    if not abs(residual) <= RESIDUAL_TOL:
        raise NoCrossoverError(f"root of {pair or 'equation'} left residual {residual!r}")
    # keep u strictly inside the reported bracket
    a = min(a, math.nextafter(u, -math.inf))
    b = max(b, math.nextafter(u, math.inf))
    return CrossoverResult(pair=pair, u_star=float(u), residual=residual, bracket=(a, b))


def solve_crossover_dj_classical(bracket=DEFAULT_BRACKET) -> CrossoverResult:
    return find_first_root(dj_classical_equation, *bracket, pair="dj-classical")


def solve_crossover_dj_wvd(bracket=DEFAULT_BRACKET, N: float | None = None, k: int | None = None) -> CrossoverResult:
    """DJ vs interrogation crossover; by default in the N >> k limit (f = 1).

    Passing both N and k uses the finite-size factor f(N, k)^2 instead.
    """
    f2 = 1.0 if N is None or k is None else f_squared(N, k)
    return find_first_root(lambda u: dj_wvd_equation(u, 1.0, f2), *bracket, pair="dj-wvd")
