#!/usr/bin/env python3
"""
Command-line entry point for the fractional reaction-diffusion benchmarks.
"""
import argparse
import logging
import sys
from typing import List, Optional

from src.app import BenchmarkApp
from src.config import load_config

COMMANDS = ["run", "sweep-space", "sweep-time", "tables"]

# flags that map one-to-one onto RunConfig fields
OVERRIDES = [
    "problem", "alpha", "N", "M", "m", "v", "k", "s", "T", "out", "grid_out",
    "report_out", "tables_cache", "log_file", "switch_tol", "iteration", "workers",
]


def int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a comma-separated list of integers: {text}")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Spectral collocation / FHBVM solver benchmarks for time-fractional reaction-diffusion"
    )
    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="run a single case, sweep N or M, or dump the kernel tables"
    )
    parser.add_argument("--config", help="YAML file with RunConfig fields")
    parser.add_argument("--problem", help="example1, example2, example3 or zero")
    parser.add_argument("--alpha", type=float, help="Fractional order in (0, 1)")
    parser.add_argument("--N", type=int, help="Spatial truncation degree")
    parser.add_argument("--M", type=int, help="Number of uniform steps over [0, T]")
    parser.add_argument("--m", type=int, help="Graded phase covers [0, m h]")
    parser.add_argument("--v", type=int, help="Number of graded steps")
    parser.add_argument("--k", type=int, help="Quadrature points per step")
    parser.add_argument("--s", type=int, help="Polynomials per step")
    parser.add_argument("--T", type=float, help="Final time")
    parser.add_argument("--switch-tol", dest="switch_tol", type=float,
                        help="Fixed-point/blended switching threshold")
    parser.add_argument("--iteration", choices=["auto", "fixed_point", "blended"],
                        help="Force the stage iteration")
    parser.add_argument("--out", help="CSV results file (table file for 'tables')")
    parser.add_argument("--grid-out", dest="grid_out", help="Space-time grid file for surface plots")
    parser.add_argument("--report", dest="report_out", help="Markdown convergence report")
    parser.add_argument("--html", action="store_true", help="Also render the report to HTML")
    parser.add_argument("--tables-cache", dest="tables_cache", help="Kernel table cache file")
    parser.add_argument("--N-list", dest="N_list", type=int_list, help="Comma-separated N values for sweep-space")
    parser.add_argument("--M-list", dest="M_list", type=int_list, help="Comma-separated M values for sweep-time")
    parser.add_argument("--workers", type=int, help="Concurrent cases in a sweep")
    parser.add_argument("--log-file", dest="log_file", help="Log file (default: robinfrac.log)")
    parser.add_argument("--no-timing", action="store_true", help="Write 0 seconds for byte-stable CSV")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> None:
    args = parse_args(argv)
    try:
        overrides = {name: getattr(args, name) for name in OVERRIDES}
        if args.html:
            overrides["html_report"] = True
        if args.no_timing:
            overrides["record_timing"] = False
        config = load_config(args.config, overrides)
        app = BenchmarkApp(config)

        if args.command == "run":
            app.run()
        elif args.command == "sweep-space":
            app.sweep_space(args.N_list or [])
        elif args.command == "sweep-time":
            app.sweep_time(args.M_list or [])
        else:
            app.dump_tables()
    except Exception as e:
        logging.error(f"Application error: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
