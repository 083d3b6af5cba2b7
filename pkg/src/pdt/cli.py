"""Command-line front end.

Exit codes: 0 success, 1 configuration or usage error, 2 protocol abort,
3 audit failure. ``PDT_SEED`` in the environment overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .audit import (BudgetExceeded, TinyConfig, announcement_tv, enumerate_joint,
                    monte_carlo_stats, privacy_report)
from .protocol import MUTATIONS, Database, RunSeeds, run_protocol, run_record
from .randomness import derive_rng, derive_seed
from .rates import InfeasibleParameters, ProtocolParams, exact, rate_bounds, size_plan

EXIT_OK, EXIT_CONFIG, EXIT_ABORT, EXIT_AUDIT = 0, 1, 2, 3

from .schemas import SWEEP_COLUMNS

TV_TOLERANCE = 1e-12


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the configuration code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def probability(text: str) -> float:
    try:
        value = float(exact(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text!r}")
    return value


def rational(text: str):
    try:
        value = exact(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text!r}")
    return value


def grid(text: str) -> list[float]:
    values = [v for v in text.replace(" ", "").split(",") if v]
    if not values:
        raise argparse.ArgumentTypeError("grid must be non-empty")
    out = []
    for v in values:
        p = probability(v)
        if not 0 < p < 1:
            raise argparse.ArgumentTypeError(f"grid values must lie in (0, 1): {v!r}")
        out.append(p)
    return out


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def effective_seed(args) -> int:
    env = os.environ.get("PDT_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PDT_SEED is not an integer: {env!r}") from None
    return args.seed


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _params(args) -> ProtocolParams:
    return ProtocolParams(n=args.n, N=args.N, eps1=args.eps1, eps2=args.eps2, delta=args.delta)


# --- subcommands ---------------------------------------------------------------

def cmd_capacity(args) -> int:
    bounds = rate_bounds(args.eps1, args.eps2, args.N)
    emit({"eps1": args.eps1, "eps2": args.eps2, "N": args.N, **bounds.to_dict()})
    return EXIT_OK


def cmd_plan(args) -> int:
    params = _params(args)
    emit({"params": params.to_dict(), "plan": size_plan(params).to_dict()})
    return EXIT_OK


def cmd_run(args) -> int:
    params = _params(args)
    plan = size_plan(params)
    seed = effective_seed(args)
    rng = derive_rng(seed, "inputs")
    u = int(rng.integers(0, params.N)) if args.u is None else args.u
    w = int(rng.integers(0, params.N)) if args.w is None else args.w
    for name, c in (("u", u), ("w", w)):
        if not 0 <= c < params.N:
            raise UsageError(f"--{name} must lie in [0, {params.N})")
    db = Database(rng.integers(0, 2, size=(params.N, plan.m_total), dtype=np.uint8))
    out = run_protocol(params, db, u, w, RunSeeds.from_master(seed), plan=plan)
    rec = run_record(out, dump=args.dump)
    rec["seed"] = seed
    if out.completed:
        rec["decoded_correctly"] = bool(np.array_equal(out.k_hat_u, db.files[u])
                                        and np.array_equal(out.k_hat_w, db.files[w]))
    emit(rec)
    return EXIT_OK if out.completed else EXIT_ABORT


def sweep_point(task) -> dict:
    eps1, eps2, N, n, delta, trials, seed = task
    bounds = rate_bounds(eps1, eps2, N)
    row = {"eps1": eps1, "eps2": eps2, "N": N, "n": n, "delta": delta, "trials": trials,
           "abort_rate": "", "decode_error_rate": "", "mean_rate": "",
           "r_lb": bounds.r_lb, "r_ub": bounds.r_ub,
           "c2p": "" if bounds.c2p is None else bounds.c2p}
    try:
        params = ProtocolParams(n=n, N=N, eps1=eps1, eps2=eps2, delta=delta)
    except InfeasibleParameters:
        return row
    stats = monte_carlo_stats(params, trials, seed)
    row.update(abort_rate=stats.abort_rate, decode_error_rate=stats.decode_error_rate,
               mean_rate=stats.mean_achieved_rate)
    return row


def cmd_sweep(args) -> int:
    if not args.eps1_grid or not args.eps2_grid:
        raise UsageError("grids must be non-empty")
    seed = effective_seed(args)
    points = [(e1, e2) for e1 in args.eps1_grid for e2 in args.eps2_grid]
    tasks = [(e1, e2, args.N, args.n, args.delta, args.trials, derive_seed(seed, "sweep", i))
             for i, (e1, e2) in enumerate(points)]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(sweep_point, tasks))
    else:
        rows = [sweep_point(t) for t in tasks]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\r\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


def cmd_audit(args) -> int:
    high = args.m_ddot > 0
    cfg = TinyConfig(n=args.n, N=args.N, eps1=args.eps1, eps2=args.eps2, m=args.m,
                     size_L=args.size_L, size_Lt=args.size_Lt, include_high_erasure=high,
                     size_C=args.size_C, size_Ct=args.size_Ct, m_ddot=args.m_ddot,
                     mutation=args.mutate, budget=args.budget)
    try:
        joint = enumerate_joint(cfg)
    except BudgetExceeded as exc:
        emit({"error": "budget-exceeded", "detail": str(exc)})
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = privacy_report(cfg, joint)
    out = report.to_dict()
    tv = {party: announcement_tv(joint, party) for party in ("Bob", "Cathy")}
    out["announcement_tv"] = tv
    out["all_pass"] = report.all_pass and max(tv.values()) <= TV_TOLERANCE
    if args.table:
        print(f"{'condition':<8} {'value (bits)':>14}  pass  description")
        for e in report.entries:
            print(f"{e.id:<8} {e.value:>14.3e}  {'yes' if e.passed else 'NO ':<4}  "
                  f"{e.description}")
        print(f"P(J=1) = {report.p_complete:.6g}, mass = {report.mass!r}, "
              f"announcement TV Bob {tv['Bob']:.3g} Cathy {tv['Cathy']:.3g}")
    else:
        emit(out)
    return EXIT_OK if out["all_pass"] else EXIT_AUDIT


# --- parser --------------------------------------------------------------------

def _protocol_flags(p, n_default=100_000):
    p.add_argument("--n", type=positive_int, default=n_default, help="block length")
    p.add_argument("--N", type=positive_int, default=2, help="number of files")
    p.add_argument("--eps1", type=probability, default=0.5, help="erasure probability to Bob")
    p.add_argument("--eps2", type=probability, default=0.5,
                   help="erasure probability to Cathy")
    p.add_argument("--delta", type=float, default=0.01, help="slack")


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="pdt", description="Private data transfer over erasure channels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("capacity", help="print capacity and rate bounds")
    p.add_argument("--eps1", type=probability, required=True)
    p.add_argument("--eps2", type=probability, required=True)
    p.add_argument("--N", type=positive_int, default=2)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("plan", help="print the deterministic size plan")
    _protocol_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", help="execute one protocol run")
    _protocol_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--u", type=int, default=None, help="Bob's choice (default: drawn)")
    p.add_argument("--w", type=int, default=None, help="Cathy's choice (default: drawn)")
    p.add_argument("--dump", action="store_true", help="include payloads and sequences")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="Monte Carlo over a grid of erasure probabilities")
    p.add_argument("--eps1-grid", type=grid, required=True, help="comma-separated values")
    p.add_argument("--eps2-grid", type=grid, required=True, help="comma-separated values")
    p.add_argument("--N", type=positive_int, default=2)
    p.add_argument("--n", type=positive_int, default=10_000)
    p.add_argument("--delta", type=float, default=0.02)
    p.add_argument("--trials", type=positive_int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=positive_int, default=1)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", help="exact privacy audit at a tiny block length")
    p.add_argument("--n", type=positive_int, default=4)
    p.add_argument("--N", type=positive_int, default=2)
    p.add_argument("--eps1", type=rational, default=exact("1/2"))
    p.add_argument("--eps2", type=rational, default=exact("1/2"))
    p.add_argument("--m", type=positive_int, default=1, help="bits per file")
    p.add_argument("--size-L", dest="size_L", type=positive_int, default=1)
    p.add_argument("--size-Lt", dest="size_Lt", type=positive_int, default=1)
    p.add_argument("--size-C", dest="size_C", type=int, default=0)
    p.add_argument("--size-Ct", dest="size_Ct", type=int, default=0)
    p.add_argument("--m-ddot", dest="m_ddot", type=int, default=0,
                   help="bits per file sent through the OT phase")
    p.add_argument("--mutate", choices=MUTATIONS, default=None)
    p.add_argument("--budget", type=float, default=1e9)
    p.add_argument("--table", action="store_true", help="print a table instead of JSON")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "budget"):
        args.budget = int(args.budget)
    try:
        return args.func(args)
    except (InfeasibleParameters, UsageError, ValueError) as exc:
        detail = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, InfeasibleParameters):
            detail["invariant"] = exc.invariant
        print(json.dumps(detail), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
