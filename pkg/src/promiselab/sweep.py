"""Parameter sweeps of ln P_fail / k over the weakening u = y/N, written as CSV."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import ApproximationDomainError, ln_prob
from .classical import SamplingModel, classical_failure, classical_ln_failure_asymptotic
from .dj import dj_ln_failure_asymptotic, dj_ln_failure_con_normal, dj_majority_failure
from .montecarlo import simulate_classical, simulate_dj, simulate_wvd
from .oracle import ProblemInstance
from .wvd import InferenceRule, optimal_alpha, wvd_failure_sampling_model, wvd_ln_failure_asymptotic

log = logging.getLogger(__name__)

COLUMNS = (
    "algorithm", "mode", "n", "N", "k", "y", "u", "p",
    "p_fail", "ln_pfail", "ln_pfail_per_k", "trials", "ci_low", "ci_high", "seed",
)
ALGORITHMS = ("classical", "dj", "wvd")
MODES = ("asymptotic", "exact", "montecarlo")
MAX_EXACT_WVD_N = 1 << 14


@dataclass(frozen=True)
class SweepConfig:
    n: int = 40
    k: tuple = (1_000_000,)
    u_min: float = 0.005
    u_max: float = 0.24
    u_steps: int = 100
    p: float = 0.5
    algorithms: tuple = ALGORITHMS
    modes: tuple = ("asymptotic",)
    trials: int = 100_000
    seed: int = 0
    out: Optional[str] = None
    sampling: SamplingModel = SamplingModel.WITH_REPLACEMENT
    y: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        if self.y is None:
            if not 0 <= self.u_min <= self.u_max < 0.5:
                raise ValueError(f"u-range [{self.u_min}, {self.u_max}] must lie in [0, 1/2)")
            if self.u_steps < 1 or (self.u_steps == 1 and self.u_min != self.u_max):
                raise ValueError("u_steps must be >= 2 for a range (1 for a single point)")
        if not self.algorithms or set(self.algorithms) - set(ALGORITHMS):
            raise ValueError(f"algorithms must be a non-empty subset of {ALGORITHMS}")
        if not self.modes or set(self.modes) - set(MODES):
            raise ValueError(f"modes must be a non-empty subset of {MODES}")
        if not self.k or any(int(k) != k or k < 1 for k in self.k):
            raise ValueError("k must be a non-empty list of positive integers")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")

    def instances(self) -> list[ProblemInstance]:
        if self.y is not None:
            return [ProblemInstance(self.n, self.y, self.p)]
        us = np.linspace(self.u_min, self.u_max, self.u_steps) if self.u_steps > 1 else [self.u_min]
        seen, out = set(), []
        for u in us:
            inst = ProblemInstance.from_u(self.n, float(u), self.p)
            if inst.y not in seen:
                seen.add(inst.y)
                out.append(inst)
        return out


@dataclass
class Row:
    algorithm: str
    mode: str
    inst: ProblemInstance
    k: int
    p_fail: Optional[float] = None
    ln_pfail: Optional[float] = None
    trials: Optional[int] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    seed: Optional[int] = None

    def values(self) -> dict:
        ln = self.ln_pfail
        return {
            "algorithm": self.algorithm,
            "mode": self.mode,
            "n": self.inst.n,
            "N": self.inst.N,
            "k": self.k,
            "y": self.inst.y,
            "u": self.inst.u,
            "p": float(self.inst.p),
            "p_fail": self.p_fail,
            "ln_pfail": ln,
            "ln_pfail_per_k": None if ln is None else ln / self.k,
            "trials": self.trials,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "seed": self.seed,
        }


def _exact(algo: str, inst: ProblemInstance, k: int, cfg: SweepConfig):
    if algo == "dj":
        prob = dj_majority_failure(inst, k)
    elif algo == "classical":
        prob = classical_failure(inst, k, cfg.sampling)
    else:
        if inst.N > MAX_EXACT_WVD_N:
            raise ValueError(f"exact WVD mode needs N <= {MAX_EXACT_WVD_N}")
        rule = InferenceRule(optimal_alpha(inst.u))
        prob = wvd_failure_sampling_model(inst, k, rule)
    ln = ln_prob(prob)
    return float(prob), ln


def dj_sweep_ln_asymptotic(u: float, k: int) -> float:
    """Six-term expansion while the single-query constant error is below 1/2,
    the normal-approximation tail beyond (where the expansion no longer applies)."""
    if u == 0:
        return -math.inf
    if 1 - 8 * u * (1 - u) > 0:
        return dj_ln_failure_asymptotic(u, k)
    return dj_ln_failure_con_normal(u, k)


def _asymptotic(algo: str, inst: ProblemInstance, k: int):
    u = inst.u
    if algo == "dj":
        ln = dj_sweep_ln_asymptotic(u, k)
    elif algo == "classical":
        ln = classical_ln_failure_asymptotic(u, k)
    else:
        ln = wvd_ln_failure_asymptotic(u, k, inst.N)
    return math.exp(ln), ln


def _montecarlo(algo: str, inst: ProblemInstance, k: int, cfg: SweepConfig):
    if algo == "dj":
        return simulate_dj(inst, k, cfg.trials, cfg.seed)
    if algo == "classical":
        return simulate_classical(inst, k, cfg.sampling, cfg.trials, cfg.seed)
    rule = InferenceRule(optimal_alpha(inst.u))
    return simulate_wvd(inst, k, rule, cfg.trials, cfg.seed)


def evaluate_point(algo: str, mode: str, inst: ProblemInstance, k: int, cfg: SweepConfig) -> Optional[Row]:
    """One CSV row, or None when the combination lies outside every formula's domain."""
    row = Row(algorithm=algo, mode=mode, inst=inst, k=k)
    try:
        if mode == "exact":
            row.p_fail, row.ln_pfail = _exact(algo, inst, k, cfg)
        elif mode == "asymptotic":
            row.p_fail, row.ln_pfail = _asymptotic(algo, inst, k)
        else:
            rep = _montecarlo(algo, inst, k, cfg)
            row.p_fail, row.ln_pfail = rep.rate, ln_prob(rep.rate)
            row.trials, row.ci_low, row.ci_high, row.seed = rep.trials, rep.ci_low, rep.ci_high, rep.seed
    except (ApproximationDomainError, ValueError) as exc:
        log.info("skipping %s/%s at y=%d k=%d: %s", algo, mode, inst.y, k, exc)
        return None
    return row


def _evaluate(args):
    return evaluate_point(*args)


def sweep_rows(cfg: SweepConfig) -> list[Row]:
    jobs = [
        (algo, mode, inst, int(k), cfg)
        for algo in cfg.algorithms
        for mode in cfg.modes
        for inst in cfg.instances()
        for k in cfg.k
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_evaluate, jobs, chunksize=8))
    else:
        rows = [_evaluate(j) for j in jobs]
    rows = [r for r in rows if r is not None]
    rows.sort(key=lambda r: (r.algorithm, r.inst.y, r.k, MODES.index(r.mode)))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return repr(float(v))
    return str(v)


def write_csv(rows, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        vals = r.values()
        w.writerow([_fmt(vals[c]) for c in COLUMNS])


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def sweep(cfg: SweepConfig) -> str:
    """Evaluate the grid and write it to ``cfg.out`` (if set); returns the CSV text."""
    text = rows_to_csv(sweep_rows(cfg))
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def with_overrides(cfg: SweepConfig, **changes) -> SweepConfig:
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None})
