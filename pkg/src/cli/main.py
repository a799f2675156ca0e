"""Command-line interface.

Usage
-----
python -m src.cli wigner cg 1/2 1/2 1/2 -1/2 0 0
python -m src.cli wigner 6j 1 3/2 5/2 3/2 1 1 --strict
python -m src.cli lmatrix 1 3/2 --method trace
python -m src.cli geometry 4 --samples 20000 --seed 7 --format csv --out fig1.csv
python -m src.cli epsilon 6 --grid 101 --out fig4.json
python -m src.cli classify --N 4 --p 0.375,0,0.625

Every command prints one record (JSON by default, CSV with ``--format csv``)
to stdout or to ``--out``.  Sampling (``--samples > 0``) needs ``--seed``.
See ``src.cli.commands`` for the exit codes.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from collections.abc import Sequence
from pathlib import Path

from src import __version__
from src.cli.commands import (
    EXIT_USAGE,
    WIGNER_KINDS,
    CommandResult,
    cmd_classify,
    cmd_epsilon,
    cmd_geometry,
    cmd_lmatrix,
    cmd_wigner,
)
from src.cli.records import write_record
from src.config import SAMPLING_SCHEMES
from src.states.invariant_states import L_METHODS

logger = logging.getLogger(__name__)

# "-1/2" or "-0.3,0.1" would otherwise be read as unknown options
_NEGATIVE_LITERAL = re.compile(r"-[\d.]")


def _shield_negative_literals(argv: Sequence[str]) -> list[str]:
    return [f" {a}" if _NEGATIVE_LITERAL.match(a) else a for a in argv]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="Output format"
    )
    common.add_argument(
        "--out", type=Path, default=None, help="Write the record here instead of stdout"
    )
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument(
        "--samples", type=int, default=0, help="Product states to sample (default: none)"
    )
    sampling.add_argument("--seed", type=int, default=None, help="Required when sampling")
    sampling.add_argument("--scheme", choices=SAMPLING_SCHEMES, default=None)

    parser = argparse.ArgumentParser(
        prog="spininv",
        description="Rotationally invariant states of two spins",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    wigner = sub.add_parser("wigner", parents=[common], help="Exact 3j, 6j or CG value")
    wigner.add_argument("kind", choices=WIGNER_KINDS)
    wigner.add_argument("args", nargs=6, metavar="X", help='Spins as "p/q" strings')
    wigner.add_argument(
        "--strict",
        action="store_true",
        help="Exit 3 when the value vanishes by a selection rule",
    )

    lmatrix = sub.add_parser("lmatrix", parents=[common], help="The L matrix of j1 x j2")
    lmatrix.add_argument("j1")
    lmatrix.add_argument("j2")
    lmatrix.add_argument("--method", choices=L_METHODS, default="six_j")

    geometry = sub.add_parser(
        "geometry", parents=[common, sampling], help="Vertices and regions of 3 x N"
    )
    geometry.add_argument("N", type=int)

    epsilon = sub.add_parser(
        "epsilon", parents=[common], help="Largest eigenvalue of H(lambda)"
    )
    epsilon.add_argument("N", type=int)
    epsilon.add_argument("--grid", type=int, default=None)

    classify = sub.add_parser(
        "classify", parents=[common, sampling], help="Classify a 3 x N invariant state"
    )
    classify.add_argument("--N", dest="n", type=int, required=True)
    given = classify.add_mutually_exclusive_group(required=True)
    given.add_argument("--p", help="p_{j2-1},p_{j2},p_{j2+1}")
    given.add_argument("--beta", help="beta1,beta2")
    return parser


def _run(args: argparse.Namespace) -> CommandResult:
    if args.command == "wigner":
        return cmd_wigner(args.kind, args.args, strict=args.strict)
    if args.command == "lmatrix":
        return cmd_lmatrix(args.j1, args.j2, method=args.method)
    if args.command == "geometry":
        return cmd_geometry(
            args.N, samples=args.samples, seed=args.seed, scheme=args.scheme
        )
    if args.command == "epsilon":
        return cmd_epsilon(args.N, grid=args.grid)
    return cmd_classify(
        args.n,
        p=args.p,
        beta=args.beta,
        samples=args.samples,
        seed=args.seed,
        scheme=args.scheme,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_shield_negative_literals(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
    )

    try:
        result = _run(args)
    except (ValueError, TypeError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE

    write_record(result.record, result.table, args.format, args.out)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
