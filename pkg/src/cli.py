# src/cli.py
"""
Command-line front end.

    fit      exact monotone step fit of a p,x CSV, JSON report
    bounds   initial upper / lower bounds and gap, no exact search
    gen      synthetic instance CSV
    oracle   solver vs brute force on random small instances
    bench    timing sweeps over noise, size or K
"""
import argparse
import sys
from typing import List, Optional

from src.config import EXIT_ERROR, Config
from src.core.errors import UsageError
from src.core.logger import log_event
from src.fitting.oracle import MAX_I


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; exit code 2 is reserved for time-limited fits."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_problem_flags(p: argparse.ArgumentParser):
    p.add_argument("input", help="CSV with p,x rows (optional header).")
    p.add_argument("--k", type=_positive_int, required=True, help="Maximum number of steps.")
    p.add_argument("--step-min", type=float, default=0.0, dest="step_min", help="Minimum step length on the p-axis.")
    p.add_argument("--loss", default="l2", help="l2, l1 or quantile:TAU (default: l2).")
    p.add_argument("--strict-last-block", action="store_true", dest="strict_last_block",
                   help="Apply --step-min to the last step as well.")
    p.add_argument("--merge-duplicates", action="store_true", dest="merge_duplicates",
                   help="Keep repeated p values as observations of one coordinate instead of failing.")
    p.add_argument("--relaxed-lb", action="store_true", dest="relaxed_lb",
                   help="Also use the cardinality shortest-path lower bound.")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stepfit", description="Exact non-increasing step-function regression.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", help="Fit a monotone step curve.")
    _add_problem_flags(fit)
    fit.add_argument("--no-ub", action="store_true", dest="no_ub", help="Disable the clustering upper bound.")
    fit.add_argument("--no-iso-lb", action="store_true", dest="no_iso_lb", help="Disable isotonic lower bounds.")
    fit.add_argument("--relaxed", action="store_true", help="Drop the monotonicity constraint (lower bound / diagnostics).")
    fit.add_argument("--strategy", choices=["iso", "rlx", "raw"], default="iso")
    fit.add_argument("--time-limit", type=float, default=None, dest="time_limit", help="Seconds.")
    fit.add_argument("--out", default=None, help="Report path (default: stdout).")
    fit.add_argument("--plot", default=None, help="Write a two-column step trace for plotting.")

    bounds = sub.add_parser("bounds", help="Report initial bounds and gap.")
    _add_problem_flags(bounds)
    bounds.add_argument("--with-relaxed", action="store_true", dest="with_relaxed",
                        help="Solve the relaxed problem (monotonicity dropped) and report its optimum as lb_relaxed.")

    gen = sub.add_parser("gen", help="Generate a synthetic instance.")
    gen.add_argument("--i", type=_positive_int, required=True, help="Number of observations.")
    gen.add_argument("--sigma", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--sampling", choices=["grid", "uniform"], default="grid")
    gen.add_argument("--out", default=None, help="CSV path (default: stdout).")

    oracle = sub.add_parser("oracle", help="Cross-check the solver against brute force.")
    oracle.add_argument("--instances", type=_positive_int, default=200)
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--max-i", type=int, default=12, dest="max_i")
    oracle.add_argument("--k", type=_positive_int, default=4)

    bench = sub.add_parser("bench", help="Timing sweeps.")
    bench.add_argument("--sweep", choices=["noise", "size", "k"], required=True)
    bench.add_argument("--values", default=None, help="Comma-separated sweep values (default: built-in sweep).")
    bench.add_argument("--strategies", default="iso,rlx,raw")
    bench.add_argument("--i", type=_positive_int, default=200, help="Sample size for noise and K sweeps.")
    bench.add_argument("--sigma", type=float, default=5.0, help="Noise for size and K sweeps.")
    bench.add_argument("--k", type=_positive_int, default=6, help="K for noise and size sweeps.")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--loss", default="l2")
    bench.add_argument("--time-limit", type=float, default=None, dest="time_limit")
    bench.add_argument("--input", default=None, help="Bench on a fixed CSV instead of generated data.")
    bench.add_argument("--out", default=None, help="CSV path (default: stdout).")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        Config()
        args = build_parser().parse_args(argv)
        if args.command == "oracle" and not 3 <= args.max_i <= MAX_I:
            raise UsageError(f"--max-i must lie in [3, {MAX_I}]")
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_ERROR
    except ValueError as e:
        # Bad environment configuration
        log_event(None, "CLI", f"❌ {e}", "ERROR")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    if args.command == "fit":
        from src.services.fit_service import cmd_fit
        return cmd_fit(args)
    if args.command == "bounds":
        from src.services.bounds_service import cmd_bounds
        return cmd_bounds(args)
    if args.command == "gen":
        from src.services.gen_service import cmd_gen
        return cmd_gen(args)
    if args.command == "oracle":
        from src.services.oracle_service import cmd_oracle
        return cmd_oracle(args)
    from src.services.bench_service import cmd_bench
    return cmd_bench(args)
