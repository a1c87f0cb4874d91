"""Handler for the ``example`` command."""

from __future__ import annotations

import argparse
import logging
import sys

from app.config import Settings
from app.errors import InputError
from app.formats import FAMILIES, emit_algebra_text, make_example

from .common import EXIT_OK

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("example", help="сгенерировать алгебру из семейства примеров")
    parser.add_argument("--family", choices=FAMILIES, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--q", type=int, required=True)
    parser.add_argument("--output", help="куда записать файл (по умолчанию stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Write the generated algebra in the text format."""

    if args.q > settings.engine.max_field_order:
        raise InputError(f"field of order {args.q} exceeds the limit {settings.engine.max_field_order}")
    text = emit_algebra_text(make_example(args.family, args.n, args.q))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info("Algebra written to %s", args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK
