"""
syncmdp command line.

    syncmdp check MODEL --objective weak --mode sure --function sum --target q_T --init q_init
    syncmdp trace MODEL ... --horizon 30 --out trace.csv
    syncmdp generate --family prime-cycle --n 2 --out corpus/
    syncmdp oracle-compare corpus/ --jobs 4
    syncmdp verify-witness MODEL verdict.json
    syncmdp --sequence-cap 100000 check MODEL ...   (cap flags precede the subcommand)

Exit codes: 0 yes, 1 no, 2 inconclusive, 3 invalid input, 4 internal error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..mdp import InconclusiveError, ModelError, OracleSizeError, QueryError, SyncError
from ..sync.query import FUNCTIONS, MODES, OBJECTIVES
from ..utils.settings import configure_logging, load_settings
from .commands import (
    FAMILIES,
    cmd_check,
    cmd_generate,
    cmd_oracle_compare,
    cmd_trace,
    cmd_verify_witness,
)

logger = logging.getLogger(__name__)

EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


def _add_query_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("model", type=Path, help="Model file")
    parser.add_argument("--objective", choices=OBJECTIVES, required=True)
    parser.add_argument("--mode", choices=MODES, required=True)
    parser.add_argument("--function", choices=FUNCTIONS, default="sum")
    parser.add_argument("--target", required=True, help="Comma-separated target states")
    parser.add_argument("--init", required=True,
                        help="Initial state, or name:probability pairs such as q1:1/2,q2:1/2")
    parser.add_argument("--out", type=Path, help="Write output here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncmdp",
        description="Decide synchronizing objectives on finite MDPs with exact arithmetic.",
    )
    parser.add_argument("--config", type=Path, help="Config directory holding config.yaml")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--max-period", type=int, dest="max_period")
    parser.add_argument("--sequence-cap", type=int, dest="sequence_cap")
    parser.add_argument("--support-cap", type=int, dest="support_cap")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Decide a query and print the JSON verdict")
    _add_query_arguments(check)
    check.set_defaults(handler=cmd_check)

    trace = sub.add_parser("trace", help="Simulate the witness strategy and write a CSV trace")
    _add_query_arguments(trace)
    trace.add_argument("--horizon", type=int)
    trace.set_defaults(handler=cmd_trace)

    generate = sub.add_parser("generate", help="Write a family of models plus manifest.json")
    generate.add_argument("--family", choices=FAMILIES, required=True)
    generate.add_argument("--out", type=Path, required=True)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--count", type=int, default=1)
    generate.add_argument("--n", type=int, default=2, help="prime-cycle: number of cycles")
    generate.add_argument("--depth", type=int, default=4, help="mbc: circuit depth")
    generate.add_argument("--states", type=int, default=5)
    generate.add_argument("--actions", type=int, default=2)
    generate.add_argument("--branching", type=int)
    generate.set_defaults(handler=cmd_generate)

    compare = sub.add_parser("oracle-compare", help="Check deciders against the oracle on a corpus")
    compare.add_argument("corpus", type=Path)
    compare.add_argument("--jobs", type=int, default=1)
    compare.add_argument("--report", type=Path, help="Directory for JSON and HTML reports")
    compare.add_argument("--no-oracle", action="store_true",
                         help="Only check manifest expectations")
    compare.set_defaults(handler=cmd_oracle_compare)

    verify = sub.add_parser("verify-witness", help="Re-verify a saved JSON verdict")
    verify.add_argument("model", type=Path)
    verify.add_argument("verdict", type=Path)
    verify.set_defaults(handler=cmd_verify_witness)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config, max_period=args.max_period,
                                 sequence_cap=args.sequence_cap, support_cap=args.support_cap)
    except (OSError, ValueError) as e:
        print(f"error: cannot load settings: {e}", file=sys.stderr)
        return EXIT_INPUT
    configure_logging(settings.logging, args.verbose)
    logger.debug(f"Running {args.command} with {settings.limits}")

    try:
        return args.handler(args, settings)
    except InconclusiveError as e:
        logger.warning(f"Inconclusive: {e}")
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ModelError, QueryError, OracleSizeError, FileNotFoundError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SyncError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
