"""Acceptance criteria.  Each test prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""

import math
import subprocess
import sys
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy

from promiselab._numeric import ln_prob
from promiselab.classical import SamplingModel, classical_failure, classical_ln_failure_asymptotic
from promiselab.dj import dj_ln_failure_asymptotic, dj_majority_failure
from promiselab.krawtchouk import build_table, orthogonality_residual, recursion_residual
from promiselab.montecarlo import simulate_classical, simulate_dj, simulate_wvd, statevector_wvd_distribution
from promiselab.oracle import ProblemInstance
from promiselab.sweep import SweepConfig, sweep_rows
from promiselab.wvd import (
    InferenceRule,
    argmin_alpha,
    error_count_distribution,
    error_count_distribution_exact,
    moments_of_t,
    optimal_alpha,
    wvd_failure_sampling_model,
)

W = SamplingModel.WITH_REPLACEMENT


def crit_1():
    out = {}
    slowest = 0.0
    for pair in ("dj-classical", "dj-wvd"):
        t = time.perf_counter()
        res = subprocess.run(
            [sys.executable, "-m", "promiselab.cli", "crossover", "--pair", pair],
            capture_output=True,
            text=True,
            check=True,
        )
        slowest = max(slowest, time.perf_counter() - t)
        out[pair] = float(res.stdout.splitlines()[1].split(",")[1])
    ok = 0.0968 <= out["dj-classical"] <= 0.0978 and 0.0494 <= out["dj-wvd"] <= 0.0504 and slowest < 1.0
    return ok, f"u*={out['dj-classical']:.6f}, {out['dj-wvd']:.6f}; slowest run {slowest:.2f}s"


def crit_2():
    t = time.perf_counter()
    worst = 0.0
    for N, k in ((8, 1), (8, 4), (16, 4)):
        a = error_count_distribution(N, k).probs
        b = statevector_wvd_distribution(N, k).probs
        worst = max(worst, float(np.abs(a - b).sum()))
    dt = time.perf_counter() - t
    return worst <= 1e-9 and dt < 10, f"max L1={worst:.2e} in {dt:.2f}s"


def crit_3():
    got = error_count_distribution_exact(8, 1)
    want = [sympy.Rational(comb(8, t) * (8 - 2 * t) ** 2, 2048) for t in range(9)]
    bad = [t for t in range(9) if not got[t].is_Rational or got[t] != want[t]]
    return not bad, f"mismatched t: {bad}"


def crit_4():
    worst_o = worst_r = 0
    for N in range(1, 33):
        tab = build_table(N)
        worst_o = max(worst_o, max(abs(orthogonality_residual(i, j, N, tab)) for i in range(N + 1) for j in range(N + 1)))
    for N in range(1, 65):
        tab = build_table(N)
        worst_r = max(worst_r, max(abs(recursion_residual(tab, j, t)) for j in range(N) for t in range(N + 1)))
    return worst_o == 0 and worst_r == 0, f"max |orthogonality|={worst_o}, max |recursion|={worst_r}"


def crit_5():
    N, k = 4096, 64
    e, v = moments_of_t(N, k)
    dev = abs(e - (N / 2 - math.sqrt(k * (N - k))))
    ok = dev <= 2 * math.sqrt(N) and v <= 5 * N
    return ok, f"|E(t)-pred|={dev:.1f} (<= {2 * math.sqrt(N):.0f}), Var(t)={v:.0f} = {v / N:.2f}N (<= 5N)"


AUDIT_N = range(4, 13)
AUDIT_U = (0.01, 0.05, 0.1)
AUDIT_K = (1, 3, 101)
AUDIT_TRIALS = 100_000


def audit_cells():
    seed = 1000
    for n in AUDIT_N:
        for u in AUDIT_U:
            inst = ProblemInstance.from_u(n, u)
            for k in AUDIT_K:
                for algo in ("dj", "classical", "wvd"):
                    if algo == "wvd" and k > inst.N:
                        continue
                    seed += 1
                    yield algo, inst, k, seed


def audit_cell(algo, inst, k, seed):
    if algo == "dj":
        exact = float(dj_majority_failure(inst, k))
        rep = simulate_dj(inst, k, AUDIT_TRIALS, seed)
    elif algo == "classical":
        exact = float(classical_failure(inst, k, W))
        rep = simulate_classical(inst, k, W, AUDIT_TRIALS, seed)
    else:
        rule = InferenceRule(optimal_alpha(inst.u))
        exact = wvd_failure_sampling_model(inst, k, rule)
        rep = simulate_wvd(inst, k, rule, AUDIT_TRIALS, seed)
    se = rep.standard_error(exact)
    ok = rep.rate == exact if se == 0 else abs(rep.rate - exact) <= 4 * se
    return ok, rep.rate, exact


def crit_6():
    t = time.perf_counter()
    cells = list(audit_cells())
    bad = []
    for cell in cells:
        ok, rate, exact = audit_cell(*cell)
        if not ok:
            algo, inst, k, _ = cell
            bad.append(f"{algo}(n={inst.n},y={inst.y},k={k}): {rate:.5f} vs {exact:.5f}")
    dt = time.perf_counter() - t
    frac = 1 - len(bad) / len(cells)
    detail = f"{len(cells) - len(bad)}/{len(cells)} cells within 4 SE ({frac:.1%}) in {dt:.0f}s"
    if bad:
        detail += "; outside: " + "; ".join(bad)
    return frac >= 0.99 and dt < 300, detail


def crit_7():
    k = 1001
    parts, ok = [], True
    for u in (0.01, 0.03, 0.05):
        inst = ProblemInstance.from_u(14, u)
        for name, exact, asym in (
            ("dj", ln_prob(dj_majority_failure(inst, k)), dj_ln_failure_asymptotic(inst.u, k)),
            ("classical", ln_prob(classical_failure(inst, k, W)), classical_ln_failure_asymptotic(inst.u, k)),
        ):
            rel = abs(asym - exact) / abs(exact)
            ok &= rel < 0.05
            parts.append(f"{name}@{u}={rel:.3f}")
    return ok, "relative errors " + ", ".join(parts)


def crit_8():
    shifts = {u: abs(argmin_alpha(u, 1 << 20, 1024) - optimal_alpha(u)) for u in (0.02, 0.05, 0.1, 0.2)}
    worst = max(shifts.values())
    return worst <= 1e-3, "argmin shifts " + ", ".join(f"{u}: {s:.1e}" for u, s in shifts.items())


def crit_9():
    by = {}
    for r in sweep_rows(SweepConfig()):
        by.setdefault(r.inst.u, {})[r.algorithm] = r.ln_pfail / r.k
    bad = []
    for u, v in sorted(by.items()):
        if u < 0.0494 and not v["dj"] < v["wvd"] < v["classical"]:
            bad.append(u)
        elif u > 0.0504 and not v["wvd"] < v["dj"]:
            bad.append(u)
        elif not v["wvd"] < v["classical"]:
            bad.append(u)
    return not bad, f"{len(by)} grid points, {len(bad)} out of order {bad[:5]}"


def crit_10():
    dj = dj_majority_failure(ProblemInstance(4, 2, 0.5), 3)
    cl = classical_failure(ProblemInstance(4, 0, 0.5), 4, W)
    return dj == Fraction(856, 4096) and cl == Fraction(1, 16), f"dj={dj}, classical={cl}"


CRITERIA = {
    1: ("crossover reproduction", crit_1),
    2: ("oracle equivalence", crit_2),
    3: ("closed form at N=8, k=1", crit_3),
    4: ("exact Krawtchouk identities", crit_4),
    5: ("moment asymptotics", crit_5),
    6: ("Monte Carlo agreement", crit_6),
    7: ("asymptotic-vs-exact bridge", crit_7),
    8: ("optimal threshold", crit_8),
    9: ("default sweep ordering", crit_9),
    10: ("hand-derived spot values", crit_10),
}


def line(num, ok, detail):
    name = CRITERIA[num][0]
    return f"{'PASS' if ok else 'FAIL'} criterion {num} ({name}): {detail}"


@pytest.mark.parametrize("num", sorted(CRITERIA), ids=lambda n: f"criterion_{n}")
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num][1]()
    with capsys.disabled():
        print("\n" + line(num, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for num in sorted(CRITERIA):
        ok, detail = CRITERIA[num][1]()
        failures += not ok
        print(line(num, ok, detail), flush=True)
    sys.exit(1 if failures else 0)
