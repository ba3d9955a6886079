"""Command-line front end: run simulations, sweeps, and validations.

Exit codes: 0 success, 1 validation check failure, 2 bad flags or
inputs, 3 deadlock/runaway (stderr names the partial-table dump), 4
output I/O error.  Diagnostics go to stderr; results to stdout or
``--out``.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import metrics, tableio, validate
from .engine import GossipError, SimConfig, simulate, simulate_optimized
from .fsa import parse_permutations, permutation_set

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_STALLED = 3
EXIT_IO = 4

FORMATS = ("text", "csv", "json", "pgm")
STRATEGIES = ("identity", "pipelined", "random")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gossipsim",
        description="simulate permutation-driven synchronous gossip schedules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one system and print its run table")
    run.add_argument("--n", type=int, required=True,
                     help="system parameter: n+1 processors")
    run.add_argument("--strategy", required=True,
                     help="identity | pipelined | random | custom:<file>")
    run.add_argument("--seed", type=int, default=0,
                     help="seed for the random strategy (default 0)")
    run.add_argument("--optimize", action="store_true",
                     help="enable greedy target substitution")
    run.add_argument("--sessions", type=int, default=1,
                     help="back-to-back gossip sessions (default 1)")
    run.add_argument("--format", choices=FORMATS, default="text")
    run.add_argument("--out", type=Path, default=None,
                     help="output path (required for pgm; default stdout)")

    sweep = sub.add_parser("sweep", help="measure a size range, CSV output")
    sweep.add_argument("--strategy", choices=STRATEGIES, required=True)
    sweep.add_argument("--n-min", type=int, required=True)
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--seeds", default=None,
                       help="comma-separated seeds for random (default 1)")
    sweep.add_argument("--optimize", action="store_true")
    sweep.add_argument("--out", type=Path, default=None,
                       help="CSV path (default stdout)")

    val = sub.add_parser("validate", help="run the validation suite")
    val.add_argument("--n-max", type=int, default=None,
                     help="closed-form checks up to this size (default 50 "
                          "when no other check is selected)")
    val.add_argument("--golden", action="store_true",
                     help="regenerate and compare the golden run tables")
    val.add_argument("--conjecture", action="store_true",
                     help="scan for the 2/3-efficiency boundary")
    return parser


def _usage_error(message: str) -> int:
    print(f"gossipsim: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _resolve_perms(args) -> tuple[int, list]:
    strategy = args.strategy
    if strategy.startswith("custom:"):
        path = Path(strategy.split(":", 1)[1])
        perms = parse_permutations(path.read_text())
        n = perms[0].n
        if args.n and args.n != n:
            raise ValueError(f"--n {args.n} does not match custom file (n={n})")
        return n, perms
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    seed = args.seed if strategy == "random" else None
    return args.n, permutation_set(strategy, args.n, seed)


def _dump_partial(partial, out: Path | None) -> Path:
    if out is not None:
        path = out.with_suffix(out.suffix + ".partial.txt")
    else:
        fd, name = tempfile.mkstemp(prefix="gossipsim-partial-", suffix=".txt")
        os.close(fd)
        path = Path(name)
    path.write_text(tableio.render_text(partial))
    return path


def cmd_run(args) -> int:
    if args.n < 1:
        return _usage_error("n must be >= 1")
    if args.sessions < 1:
        return _usage_error("sessions must be >= 1")
    if args.format == "pgm" and args.out is None:
        return _usage_error("--format pgm requires --out")
    try:
        n, perms = _resolve_perms(args)
    except (ValueError, OSError) as exc:
        return _usage_error(str(exc))
    config = SimConfig(optimizer=args.optimize, sessions=args.sessions)
    try:
        run = (simulate_optimized if args.optimize else simulate)(n, perms, config)
    except GossipError as exc:
        path = _dump_partial(exc.partial, args.out)
        print(f"gossipsim: {exc} (partial table: {path})", file=sys.stderr)
        return EXIT_STALLED

    try:
        if args.format == "pgm":
            args.out.write_bytes(tableio.render_pgm(run))
            print(tableio.metrics_footer(run), end="")
            return EXIT_OK
        if args.format == "text":
            payload = tableio.render_text(run) + tableio.metrics_footer(run)
        elif args.format == "csv":
            footer = "".join(f"# {line}\n" for line in
                             tableio.metrics_footer(run).splitlines())
            payload = tableio.render_csv(run) + footer
        else:
            payload = tableio.render_json(run)
        if args.out is not None:
            args.out.write_text(payload)
        else:
            sys.stdout.write(payload)
    except OSError as exc:
        print(f"gossipsim: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.n_min < 1 or args.n_min > args.n_max:
        return _usage_error(f"bad range [{args.n_min}, {args.n_max}]")
    seeds = None
    if args.seeds:
        try:
            seeds = [int(tok) for tok in args.seeds.split(",") if tok.strip()]
        except ValueError:
            return _usage_error(f"bad --seeds list {args.seeds!r}")
    try:
        records = validate.sweep(args.strategy, args.n_min, args.n_max,
                                 seeds=seeds, optimized=args.optimize)
    except GossipError as exc:
        print(f"gossipsim: {exc}", file=sys.stderr)
        return EXIT_STALLED
    lines = ["strategy,n,seed,lambda,mu,epsilon"]
    for r in records:
        tag = r.strategy + ("+opt" if r.optimized else "")
        seed = "" if r.seed is None else str(r.seed)
        lines.append(f"{tag},{r.n},{seed},{r.length},"
                     f"{metrics.decimal_str(r.mu, 6)},"
                     f"{metrics.decimal_str(r.epsilon, 6)}")
    payload = "\n".join(lines) + "\n"
    try:
        if args.out is not None:
            args.out.write_text(payload)
        else:
            sys.stdout.write(payload)
    except OSError as exc:
        print(f"gossipsim: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_validate(args) -> int:
    reports = []
    run_props = args.n_max is not None or not (args.golden or args.conjecture)
    if run_props:
        n_max = args.n_max if args.n_max is not None else 50
        if n_max < 2:
            return _usage_error("--n-max must be >= 2")
        reports.append(validate.check_propositions(n_max))
    if args.golden:
        reports.append(validate.golden_tables())
    if args.conjecture:
        reports.append(validate.conjecture_scan())
    for report in reports:
        print(report)
        print()
    return EXIT_OK if all(r.ok for r in reports) else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:   # argparse printed its own message
        return int(exc.code or 0)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    return cmd_validate(args)


def entrypoint() -> None:
    sys.exit(main())
