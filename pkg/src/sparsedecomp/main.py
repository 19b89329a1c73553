#!/usr/bin/env python3
"""
sparsedecomp CLI
Batch front-end: generate, gap, decompose, verify, embed, report and serve.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import Any, NoReturn

from pydantic import ValidationError

from . import __version__
from .exceptions import InputError, SparseDecompError
from .pipeline import DecompositionRunner
from .utils.config import OmegaSequence, load_run_config, parse_rational
from .utils.jsonio import dumps
from .utils.logging_config import configure_logging

logger = logging.getLogger(__name__)

COMMANDS = ("generate", "gap", "decompose", "verify", "embed", "report")


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of printing usage, so errors stay JSON."""

    def error(self, message: str) -> NoReturn:
        raise InputError(message)


def _rational(value: str) -> Any:
    try:
        return parse_rational(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML or JSON run config")
    parser.add_argument("--input", help="graph JSON")
    parser.add_argument("--output", help="where to write the result (stdout when omitted)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--exact-cap", type=int, dest="exact_cap")
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--debug-trace", action="store_true", default=None, dest="debug_trace")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsedecomp", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    generate = sub.add_parser("generate", help="build a graph from a generator spec")
    _add_common(generate)

    gap = sub.add_parser("gap", help="create a degree gap")
    _add_common(gap)
    gap.add_argument("--mode", choices=("generic", "lks"))
    gap.add_argument("--k", type=int)
    gap.add_argument("--eta", type=_rational)
    gap.add_argument("--omega-first", type=_rational, dest="omega_first")
    gap.add_argument("--omega-ratio", type=_rational, dest="omega_ratio")
    gap.add_argument("--omega-count", type=int, dest="omega_count")

    decompose = sub.add_parser("decompose", help="bounded or sparse decomposition")
    _add_common(decompose)
    decompose.add_argument("--mode", choices=("bounded", "lks", "generic"))
    decompose.add_argument("--k", type=int)
    decompose.add_argument("--eta", type=_rational)
    decompose.add_argument("--omega-first", type=_rational, dest="omega_first")
    decompose.add_argument("--omega-ratio", type=_rational, dest="omega_ratio")
    decompose.add_argument("--omega-count", type=int, dest="omega_count")

    verify = sub.add_parser("verify", help="check a decomposition clause by clause")
    _add_common(verify)
    verify.add_argument("--decomposition")

    embed = sub.add_parser("embed", help="embed a tree")
    _add_common(embed)
    embed.add_argument("--mode", choices=("greedy", "path", "shrub", "reserve", "sweep"))
    embed.add_argument("--tree")
    embed.add_argument("--decomposition")
    embed.add_argument("--k", type=int)
    embed.add_argument("--path-len", type=int, dest="path_len")
    embed.add_argument("--anchor", type=int)
    embed.add_argument("--sweep-k", type=int, dest="sweep_k")

    report = sub.add_parser("report", help="category masses, dense degeneration and formal constants")
    _add_common(report)
    report.add_argument("--decomposition")
    report.add_argument("--dense-c", type=_rational, dest="dense_c")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    values = {key: value for key, value in vars(args).items() if key != "config"}
    first = values.pop("omega_first", None)
    ratio = values.pop("omega_ratio", None)
    count = values.pop("omega_count", None)
    if any(v is not None for v in (first, ratio, count)):
        if first is None or ratio is None or count is None:
            raise InputError("--omega-first, --omega-ratio and --omega-count go together")
        try:
            values["omegas"] = OmegaSequence.geometric(first, ratio, count)
        except (ValidationError, ZeroDivisionError) as e:
            raise InputError(f"invalid omega sequence: {e}") from e
    return values


def _fail(error: Exception, code: int) -> int:
    payload = error.to_dict() if isinstance(error, SparseDecompError) else {
        "type": type(error).__name__,
        "message": str(error),
    }
    sys.stderr.write(json.dumps({"error": payload}, sort_keys=True) + "\n")
    return code


def serve(host: str, port: int) -> None:
    import uvicorn

    from .server import create_app

    logger.info(f"Starting sparsedecomp service on {host}:{port}")
    uvicorn.run(create_app(), host=host, port=port)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code (0, 1, 2 or 3)."""
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        if args.command == "serve":
            serve(args.host, args.port)
            return 0
        config = load_run_config(args.config, **_overrides(args))
        result = DecompositionRunner(config).run()
        if not config.output:
            sys.stdout.write(dumps(result))
        return 0
    except SparseDecompError as e:
        logger.error(f"Run failed: {str(e)}")
        return _fail(e, e.exit_code)
    except Exception as e:
        logger.error(f"Run failed unexpectedly: {str(e)}")
        return _fail(e, 1)


if __name__ == "__main__":
    sys.exit(main())
