"""Command-line harness.

    qamem run SPEC                 one retrieval experiment -> trace/state CSV + summary JSON
    qamem sweep SPEC               grid sweep -> one CSV row per grid point
    qamem reproduce WHAT [ID]      example1 | example1-wrongB | table1 | table2 | fig <id>
    qamem storage-demo FILE        gate-level storage of a pattern file

Exit codes: 0 success, 1 runtime or I/O error, 2 validation error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import experiment as ex
from .kernels import BACKEND
from .register import DomainError
from .storage import parse_patterns

log = logging.getLogger("qamem")

EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps (default: CPU count)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for the final observation")
    p.add_argument("--lambda", dest="lambda_", default=None,
                   help="iteration policy: auto, analytic, empirical or fixed:<k>")
    p.add_argument("--max-iters", type=int, default=None, help="scan length for the empirical policy")
    p.add_argument("--wrong-b", action="store_true",
                   help="diagnostic: use the sqrt(N) large-N overlap shortcut in the analytic schedule")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qamem", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one experiment spec")
    p.add_argument("spec")
    _common(p)

    p = sub.add_parser("sweep", help="run the parameter grid of a spec")
    p.add_argument("spec")
    _common(p)

    p = sub.add_parser("reproduce", help="canned reproductions")
    p.add_argument("what", choices=["example1", "example1-wrongB", "table1", "table2", "fig"])
    p.add_argument("fig_id", nargs="?", type=int)
    p.add_argument("--horizon", type=int, default=40, help="rounds shown in trace figures")
    _common(p)

    p = sub.add_parser("storage-demo", help="gate-level storage of a pattern file")
    p.add_argument("patterns")
    p.add_argument("-n", type=int, default=None, help="pattern length (needed for #index-only files)")
    _common(p)
    return parser


def _apply_overrides(spec: ex.ExperimentSpec, args) -> ex.ExperimentSpec:
    over = {}
    if args.lambda_ is not None:
        over["lambda_"] = args.lambda_
    if args.max_iters is not None:
        over["max_iters"] = args.max_iters
    if args.seed is not None:
        over["seed"] = args.seed
    if args.wrong_b:
        over["wrong_b"] = True
    return ex.validate(replace(spec, **over)) if over else spec


def _emit(text: str, out: str | None, filename: str) -> None:
    sys.stdout.write(text)
    if out:
        path = Path(out) / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _cmd_run(args) -> int:
    spec = _apply_overrides(ex.load_spec(args.spec), args)
    info = ex.run_spec(spec, args.out)
    print(json.dumps(info, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = _apply_overrides(ex.load_spec(args.spec), args)
    _emit(ex.sweep(spec, args.jobs), args.out or spec.out, f"{spec.name}_sweep.csv")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    max_iters = args.max_iters or ex.DEFAULT_MAX_ITERS
    if args.what in ("example1", "example1-wrongB"):
        spec = ex.example1(wrong_b=args.what == "example1-wrongB" or args.wrong_b, max_iters=max_iters)
        spec = _apply_overrides(spec, args)
        info = ex.run_spec(spec, args.out)
        print(json.dumps(info, indent=2, sort_keys=True))
    elif args.what == "table1":
        _emit(ex.table1(max_iters), args.out, "table1.csv")
    elif args.what == "table2":
        _emit(ex.table2(max_iters), args.out, "table2.csv")
    else:
        if args.fig_id is None:
            raise ex.SpecError("fig", "figure id required, e.g. `reproduce fig 2`")
        _emit(ex.figure(args.fig_id, args.horizon, max_iters), args.out, f"fig{args.fig_id}.csv")
    return EXIT_OK


def _cmd_storage(args) -> int:
    patterns = parse_patterns(Path(args.patterns).read_text(), args.n)
    info, state, listing = ex.storage_demo(patterns)
    print(json.dumps(info, indent=2, sort_keys=True))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "storage_state.csv").write_text(state)
        (out / "storage_circuit.txt").write_text(listing)
        (out / "storage_summary.json").write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "reproduce": _cmd_reproduce,
             "storage-demo": _cmd_storage}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", BACKEND)
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return _COMMANDS[args.command](args)
    except (ex.SpecError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
