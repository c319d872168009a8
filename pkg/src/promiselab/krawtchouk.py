"""Exact Krawtchouk polynomials K_j(t; N) = sum_r (-1)^r C(t, r) C(N - t, j - r).

Values are Python integers.  Tables are filled with the three-term recursion
(N - 2t) K_j = (j + 1) K_{j+1} + (N - j + 1) K_{j-1}, which divides exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np


def _check_index(name: str, v: int, N: int):
    if not 0 <= v <= N:
        raise ValueError(f"{name}={v} outside [0, N={N}]")


def krawtchouk_direct(j: int, t: int, N: int) -> int:
    _check_index("j", j, N)
    _check_index("t", t, N)
    return sum((-1) ** r * comb(t, r) * comb(N - t, j - r) for r in range(j + 1))


@dataclass(frozen=True)
class KrawtchoukTable:
    """Rows j = 0..degree of K_j(t; N), each a tuple over t = 0..N."""

    N: int
    values: tuple

    @property
    def degree(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, jt) -> int:
        j, t = jt
        return self.values[j][t]

    def row(self, j: int) -> tuple:
        return self.values[j]

    def log_abs_sign(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """(log|K_j(t)|, sign K_j(t)) over t; log is -inf where K_j(t) = 0."""
        row = self.values[j]
        logs = np.array([math.log(abs(v)) if v else -math.inf for v in row])
        signs = np.array([(v > 0) - (v < 0) for v in row], dtype=np.int8)
        return logs, signs


def build_table(N: int, max_degree: int | None = None) -> KrawtchoukTable:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    deg = N if max_degree is None else min(max_degree, N)
    ts = range(N + 1)
    rows = [tuple(1 for _ in ts)]
    if deg >= 1:
        rows.append(tuple(N - 2 * t for t in ts))
    for j in range(1, deg):
        prev, cur = rows[j - 1], rows[j]
        nxt = []
        for t in ts:
            num = (N - 2 * t) * cur[t] - (N - j + 1) * prev[t]
            q, rem = divmod(num, j + 1)
            if rem:
                raise ArithmeticError(f"recursion not integral at j={j}, t={t}")
            nxt.append(q)
        rows.append(tuple(nxt))
    return KrawtchoukTable(N=N, values=tuple(rows))


def recursion_residual(table: KrawtchoukTable, j: int, t: int) -> int:
    """(N - 2t) K_j - (j+1) K_{j+1} - (N - j + 1) K_{j-1}; the K_{-1} term is absent at j = 0."""
    N = table.N
    lower = table[j - 1, t] if j >= 1 else 0
    return (N - 2 * t) * table[j, t] - (j + 1) * table[j + 1, t] - (N - j + 1) * lower


def orthogonality_residual(i: int, j: int, N: int, table: KrawtchoukTable | None = None) -> int:
    """sum_t C(N,t) K_i(t) K_j(t) - 2^N C(N,j) delta_ij, exactly."""
    _check_index("i", i, N)
    _check_index("j", j, N)
    if table is None or table.N != N or table.degree < max(i, j):
        table = build_table(N, max(i, j))
    ri, rj = table.row(i), table.row(j)
    s = sum(comb(N, t) * ri[t] * rj[t] for t in range(N + 1))
    return s - (2**N * comb(N, j) if i == j else 0)
