"""Command-line interface.

Exit codes: 0 success, 1 internal or verification failure, 2 usage error
or infeasible input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from ._backend import BACKEND
from .chain import (expected_steps_to_absorption, expected_successes_per_round, fundamental_matrix,
                    stationary_distribution)
from .config import InfeasibleError, SystemConfig, parse_epsilon
from .model import build_transition_matrix
from .oracle import BudgetExceededError
from .simulator import DEFAULT_ROUND_CAP, run_batch, run_error_channel
from .sweep import SweepSpec, run_sweep
from .verify import DEFAULT_EPSILONS, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def decimal(x) -> str:
    return "" if x is None else format(float(x), ".12g")


def exact(x):
    return str(x) if isinstance(x, (Fraction, int)) else None


def number(x):
    """JSON form of a value: exact rational string and 12-significant-digit decimal."""
    if x is None:
        return None
    return {"exact": exact(x), "decimal": float(decimal(x))}


def eps_text(eps) -> str:
    return str(eps) if isinstance(eps, Fraction) else repr(eps)


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _config(args, epsilon=None) -> SystemConfig:
    eps = args.epsilon if epsilon is None else epsilon
    return SystemConfig(args.slots, args.stations, eps)


def cmd_matrix(args) -> str:
    config = _config(args)
    matrix = build_transition_matrix(config)
    n = config.N
    if args.format == "json":
        return _json({
            "B": config.B, "N": n, "epsilon": eps_text(config.error_prob), "exact": matrix.exact,
            "entries": [[number(p) for p in row] for row in matrix.entries],
        })
    if args.format == "csv":
        rows = [(d, delta, exact(p) or "", decimal(p))
                for d, row in enumerate(matrix.entries) for delta, p in enumerate(row)]
        return _csv(("d", "delta", "exact", "decimal"), rows)
    lines = [f"# transition matrix B={config.B} N={n} epsilon={eps_text(config.error_prob)}"]
    for d, row in enumerate(matrix.entries):
        cells = [f"{exact(p)} ({decimal(p)})" if exact(p) else decimal(p) for p in row]
        lines.append(f"{d}: " + ", ".join(cells))
    return "\n".join(lines) + "\n"


def cmd_expect(args) -> str:
    config = _config(args, epsilon=0)
    if not 0 <= args.start_state <= config.N:
        raise UsageError(f"--start-state must be in 0..{config.N}")
    fm = fundamental_matrix(build_transition_matrix(config))
    value = expected_steps_to_absorption(fm, args.start_state)
    if args.format == "json":
        return _json({"B": config.B, "N": config.N, "start_state": args.start_state,
                      "expected_steps": number(value)})
    if args.format == "csv":
        return _csv(("B", "N", "start_state", "expected_steps_exact", "expected_steps"),
                    [(config.B, config.N, args.start_state, exact(value), decimal(value))])
    return f"{value} ({decimal(value)})\n"


def cmd_stationary(args) -> str:
    config = _config(args)
    pi = stationary_distribution(build_transition_matrix(config), allow_absorbing=args.allow_absorbing)
    mean = expected_successes_per_round(pi)
    if args.format == "json":
        return _json({"B": config.B, "N": config.N, "epsilon": eps_text(config.error_prob),
                      "stationary": [number(p) for p in pi.probs],
                      "expected_successes_per_round": number(mean)})
    if args.format == "csv":
        return _csv(("state", "exact", "decimal"),
                    [(s, exact(p) or "", decimal(p)) for s, p in enumerate(pi.probs)])
    lines = [f"{s}: {exact(p) + ' ' if exact(p) else ''}({decimal(p)})" for s, p in enumerate(pi.probs)]
    lines.append(f"expected successes per round: {decimal(mean)}")
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> str:
    config = _config(args)
    if config.error_prob == 0:
        result = run_batch(config, base_seed=args.seed, count=args.runs, round_cap=args.round_cap, jobs=args.jobs)
        payload = {"B": config.B, "N": config.N, "epsilon": eps_text(config.error_prob), "mode": "convergence",
                   "runs": args.runs, "seed": args.seed, "round_cap": args.round_cap, "capped": result.capped,
                   "mean": result.mean, "std": result.std, "stderr": result.stderr,
                   "histogram": {str(k): v for k, v in result.histogram.items()}}
    else:
        result = run_error_channel(config, args.seed, args.rounds)
        payload = {"B": config.B, "N": config.N, "epsilon": eps_text(config.error_prob), "mode": "error",
                   "rounds": args.rounds, "seed": args.seed,
                   "mean": result.mean, "std": result.std, "stderr": result.stderr,
                   "histogram": {str(k): v for k, v in result.histogram.items()}}
        if args.trace:
            payload["trace"] = list(result.samples)
    if args.format == "json":
        return _json(payload)
    if args.format == "csv":
        keys = [k for k in payload if k not in ("histogram", "trace")]
        return _csv(keys, [[decimal(payload[k]) if isinstance(payload[k], float) else payload[k] for k in keys]])
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "trace"]
    return "\n".join(lines) + "\n"


def parse_range(text: str):
    """"2-16", "2..16" or "2,4,8" -> list of ints."""
    text = text.strip()
    for sep in ("..", "-"):
        if sep in text:
            lo, hi = (int(x) for x in text.split(sep, 1))
            return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_sweep(args) -> str:
    stations = parse_range(args.stations)
    if not stations:
        raise UsageError("empty station range")
    spec = SweepSpec(slots=args.slots, stations=stations, epsilon=args.epsilon, mode=args.mode,
                     runs=args.runs, rounds=args.rounds, seed=args.seed, round_cap=args.round_cap)
    rows = run_sweep(spec, jobs=args.jobs)
    if args.format == "json":
        out = []
        for row in rows:
            item = {}
            for key, value in row.items():
                if key in ("expected_steps_analytic", "avg_success_analytic"):
                    item[key] = number(value)
                elif key == "epsilon":
                    item[key] = eps_text(value)
                else:
                    item[key] = value
            out.append(item)
        return _json({"columns": list(spec.columns), "rows": out})
    table = []
    for row in rows:
        cells = []
        for key in spec.columns:
            value = row[key]
            if key == "epsilon":
                cells.append(eps_text(value))
            elif isinstance(value, (Fraction, float)) or value is None:
                cells.append(decimal(value))
            else:
                cells.append(value)
        table.append(cells)
    return _csv(spec.columns, table)


def cmd_verify(args) -> str:
    epsilons = args.epsilon_list or DEFAULT_EPSILONS
    report = run_checks(args.max_slots, epsilons, inject_fault=args.inject_fault)
    lines = [f"{name}: {count} checks" for name, count in sorted(report.counts.items())]
    if report.ok:
        lines.append(f"all checks passed ({report.passed})")
    else:
        lines.extend(f"FAIL {f}" for f in report.failures)
        lines.append(f"{len(report.failures)} of {report.passed + len(report.failures)} checks failed")
        args.failed = True
    return "\n".join(lines) + "\n"


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _eps(text):
    try:
        return parse_epsilon(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slotmc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, epsilon=True, formats=("text", "csv", "json"), default="text"):
        p.add_argument("--slots", "-B", type=_positive, required=True)
        p.add_argument("--stations", "-N", type=_positive, required=True)
        if epsilon:
            p.add_argument("--epsilon", type=_eps, default=Fraction(0), help='decimal or "p/q"')
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("matrix", help="print the transition matrix")
    common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("expect", help="expected rounds to collision-free operation")
    common(p, epsilon=False)
    p.add_argument("--start-state", type=int, default=0)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("stationary", help="stationary distribution under channel errors")
    common(p)
    p.add_argument("--allow-absorbing", action="store_true", help="return unit mass on S_N when epsilon = 0")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("simulate", help="Monte Carlo simulation")
    common(p)
    p.add_argument("--runs", type=_positive, default=10_000, help="convergence runs (epsilon = 0)")
    p.add_argument("--rounds", type=_positive, default=10_000, help="rounds to simulate (epsilon > 0)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--round-cap", type=_positive, default=DEFAULT_ROUND_CAP)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--trace", action="store_true", help="include the per-round success trace (json)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="tabulate analytic and simulated values over a grid")
    p.add_argument("--slots", "-B", type=_positive, nargs="+", required=True)
    p.add_argument("--stations", "-N", required=True, help='range "2-16" or list "2,4,8"')
    p.add_argument("--epsilon", type=_eps, default=Fraction(0))
    p.add_argument("--mode", choices=("analytic", "simulate", "both"), default="both")
    p.add_argument("--runs", type=_positive, default=10_000)
    p.add_argument("--rounds", type=_positive, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--round-cap", type=_positive, default=DEFAULT_ROUND_CAP)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check closed forms against brute-force enumeration")
    p.add_argument("--max-slots", "--max-B", type=_positive, default=6)
    p.add_argument("--epsilon", dest="epsilon_list", type=_eps, action="append")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.failed = False
    try:
        text = args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: N > B ({exc})" if not str(exc).startswith("infeasible") else str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, BudgetExceededError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(text, getattr(args, "out", None))
    return EXIT_FAIL if args.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
