"""Command-line front end.  Every subcommand writes UTF-8 CSV (or a check
report for ``validate``).  Exit codes: 0 ok, 1 invariant failure, 2 usage error."""

from __future__ import annotations

import argparse
import csv
import logging
import sys

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2

# key -> parser for values read from --config files
CONFIG_KEYS = {
    "n": int,
    "y": int,
    "u": str,
    "k": str,
    "p": float,
    "algo": str,
    "trials": int,
    "seed": int,
    "out": str,
    "sampling": str,
    "workers": int,
    "modes": str,
    "pair": str,
}


class UsageError(Exception):
    pass


def read_config(path: str) -> dict:
    """Line-oriented ``key = value`` file; blank lines and ``#`` comments ignored."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected 'key = value' with key in {sorted(CONFIG_KEYS)}")
        try:
            out[key] = CONFIG_KEYS[key](value.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}") from exc
    return out


def parse_u(text: str) -> tuple[float, float, int]:
    """``0.05`` or ``min:max:steps``."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            u = float(parts[0])
            return u, u, 1
        if len(parts) == 3:
            return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        pass
    raise UsageError(f"--u expects a value or min:max:steps, got {text!r}")


def parse_k(text: str) -> tuple[int, ...]:
    try:
        ks = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        ks = ()
    if not ks:
        raise UsageError(f"--k expects a comma-separated list of integers, got {text!r}")
    return ks


def parse_algo(text: str) -> tuple[str, ...]:
    from .sweep import ALGORITHMS

    if text == "all":
        return ALGORITHMS
    algos = tuple(a.strip() for a in text.split(","))
    if not set(algos) <= set(ALGORITHMS):
        raise UsageError(f"--algo must be one of dj, classical, wvd, all; got {text!r}")
    return algos


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("problem")
    g.add_argument("--n", type=int, help="input bits; N = 2**n")
    g.add_argument("--y", type=int, help="number of flipped bits (overrides --u)")
    g.add_argument("--u", help="weakening y/N: a value or min:max:steps")
    g.add_argument("--k", help="comma-separated query counts")
    g.add_argument("--p", type=float, help="prior probability of a balanced instance")
    g.add_argument("--algo", help="dj, classical, wvd or all")
    g.add_argument("--sampling", choices=("with", "without"), help="classical sampling model")
    r = p.add_argument_group("run")
    r.add_argument("--trials", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--workers", type=int)
    r.add_argument("--out", help="output path (default stdout)")
    r.add_argument("--config", help="key = value file; flags win over it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promiselab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("exact", "exact failure probabilities"),
        ("asymptotic", "large-k asymptotic failure probabilities"),
        ("mc", "Monte Carlo estimates with Wilson intervals"),
    ):
        _add_common(sub.add_parser(name, help=help_text))

    sp = sub.add_parser("sweep", help="grid over u and k in one or more modes")
    _add_common(sp)
    sp.add_argument("--modes", help="comma list of exact, asymptotic, montecarlo")

    wd = sub.add_parser("wvd-dist", help="error-count distribution P(t | N, k)")
    _add_common(wd)
    wd.add_argument("--statevector", action="store_true", help="brute-force circuit (N <= 16)")

    cp = sub.add_parser("crossover", help="solve for the crossover weakening u*")
    _add_common(cp)
    cp.add_argument("--pair", choices=("dj-classical", "dj-wvd", "all"))
    cp.add_argument("--finite-n", action="store_true", help="use f(N, k) from --n and --k for dj-wvd")
    cp.add_argument("--bracket", help="lo:hi search interval")

    vp = sub.add_parser("validate", help="run the invariant suite")
    vp.add_argument("--tight", action="store_true", help="report checks limited by a 1e-12 tolerance")
    vp.add_argument("--window-shift", type=int, default=0, help=argparse.SUPPRESS)
    return parser


def merged(args: argparse.Namespace) -> dict:
    """Flag values over config-file values; unset keys are absent."""
    values = read_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return values


def sweep_config(values: dict, modes: tuple[str, ...]):
    from .classical import SamplingModel
    from .sweep import SweepConfig

    kw = {"modes": modes}
    for key in ("n", "y", "p", "trials", "seed", "out", "workers"):
        if key in values:
            kw[key] = values[key]
    if "u" in values:
        kw["u_min"], kw["u_max"], kw["u_steps"] = parse_u(values["u"])
    if "k" in values:
        kw["k"] = parse_k(values["k"])
    if "algo" in values:
        kw["algorithms"] = parse_algo(values["algo"])
    if "sampling" in values:
        kw["sampling"] = SamplingModel(values["sampling"])
    try:
        return SweepConfig(**kw)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _open_out(path):
    if not path:
        return sys.stdout
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_sweep(args, values, modes) -> int:
    from .sweep import sweep_rows, write_csv

    cfg = sweep_config(values, modes)
    fh = _open_out(cfg.out)
    try:
        write_csv(sweep_rows(cfg), fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_wvd_dist(args, values) -> int:
    from .wvd import error_count_distribution

    n = values.get("n")
    ks = parse_k(values["k"]) if "k" in values else None
    if n is None or ks is None or len(ks) != 1:
        raise UsageError("wvd-dist needs --n and a single --k")
    N, k = 1 << n, ks[0]
    try:
        if args.statevector:
            from .montecarlo import statevector_wvd_distribution

            dist = statevector_wvd_distribution(N, k)
        else:
            dist = error_count_distribution(N, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fh = _open_out(values.get("out"))
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("N", "k", "t", "prob"))
        for t, prob in enumerate(dist.probs):
            w.writerow((N, k, t, repr(float(prob))))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_crossover(args, values) -> int:
    from .crossover import DEFAULT_BRACKET, NoCrossoverError, solve_crossover_dj_classical, solve_crossover_dj_wvd

    pair = values.get("pair") or "all"
    bracket = DEFAULT_BRACKET
    if args.bracket:
        try:
            lo, hi = (float(x) for x in args.bracket.split(":"))
        except ValueError as exc:
            raise UsageError(f"--bracket expects lo:hi, got {args.bracket!r}") from exc
        bracket = (lo, hi)
    N = k = None
    if args.finite_n:
        if "n" not in values or "k" not in values:
            raise UsageError("--finite-n needs --n and --k")
        N, k = 1 << values["n"], parse_k(values["k"])[0]
    results = []
    try:
        if pair in ("dj-classical", "all"):
            results.append(solve_crossover_dj_classical(bracket))
        if pair in ("dj-wvd", "all"):
            results.append(solve_crossover_dj_wvd(bracket, N=N, k=k))
    except NoCrossoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    fh = _open_out(values.get("out"))
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("pair", "u_star", "residual", "bracket_lo", "bracket_hi"))
        for r in results:
            w.writerow((r.pair, repr(r.u_star), repr(r.residual), repr(r.bracket[0]), repr(r.bracket[1])))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validate import run_validate

    results = run_validate(tight=args.tight, window_shift=args.window_shift)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_INVARIANT if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "validate":
            return cmd_validate(args)
        values = merged(args)
        if args.command in ("exact", "asymptotic"):
            return cmd_sweep(args, values, (args.command,))
        if args.command == "mc":
            return cmd_sweep(args, values, ("montecarlo",))
        if args.command == "sweep":
            modes = tuple(m.strip() for m in values.get("modes", "asymptotic").split(","))
            return cmd_sweep(args, values, modes)
        if args.command == "wvd-dist":
            return cmd_wvd_dist(args, values)
        return cmd_crossover(args, values)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
