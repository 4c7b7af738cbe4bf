"""Command line entry point."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from strsat import driver, smtlib
from strsat.errors import (
    InternalInconsistency,
    SolverSyntaxError,
    SortError,
    Unsupported,
)


def _configure_logging():
    level = os.environ.get("SOLVER_LOG", "").lower()
    if level in ("debug", "info"):
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if level == "debug" else logging.INFO,
            format="[%(name)s] %(message)s",
        )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="solver", description="SMT string constraint solver"
    )
    p.add_argument("--model", action="store_true", help="print a model after sat")
    p.add_argument("--timeout", type=float, default=120.0, metavar="SECONDS")
    p.add_argument(
        "--procedure",
        choices=("auto", "stabilization", "nielsen", "regex-eq"),
        default="auto",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("file", metavar="FILE.smt2")
    return p


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        script = smtlib.parse_script(text)
    except (SolverSyntaxError, SortError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Unsupported as e:
        # an unsupported construct is a valid script we cannot decide
        print("unknown")
        print(f"unsupported: {e}", file=sys.stderr)
        return 0

    options = driver.Options(
        timeout=args.timeout, procedure=args.procedure, seed=args.seed
    )
    want_model = args.model or any(c[0] == "get-model" for c in script.commands)
    try:
        verdicts = driver.solve_script(script, options)
    except InternalInconsistency as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    for v in verdicts:
        print(v.status)
        if v.status == "unknown" and v.reason:
            print(f"reason: {v.reason}", file=sys.stderr)
        if v.status == "sat" and want_model:
            smodel = {
                name: tuple(ord(c) for c in word)
                for name, word in v.smodel.items()
            }
            print(smtlib.print_model(script, smodel, v.imodel))
    return 0


if __name__ == "__main__":
    sys.exit(main())
