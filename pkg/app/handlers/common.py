"""Argument helpers shared by the command handlers."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import replace

from app.config import Settings
from app.core.algebra import AlgebraSpec
from app.errors import InputError
from app.formats import FAMILIES, ResultDocument, load_algebra_file, make_example

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def add_algebra_arguments(parser: argparse.ArgumentParser) -> None:
    """Either an algebra file or a ``--family/--n/--q`` triple."""

    parser.add_argument("path", nargs="?", help="файл с описанием алгебры")
    parser.add_argument("--family", choices=FAMILIES, help="семейство примеров")
    parser.add_argument("--n", type=int, help="размер матриц (или размерность для abelian)")
    parser.add_argument("--q", type=int, help="порядок поля")


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="зерно генератора случайных чисел")
    parser.add_argument("--max-order", type=int, dest="max_order", help="предел порядка групп")
    parser.add_argument("--json", dest="json_path", help="путь для JSON-отчёта ('-' для stdout)")
    parser.add_argument("--timing", action="store_true", help="добавить время работы в отчёт")


def apply_overrides(args: argparse.Namespace, settings: Settings) -> Settings:
    """Return ``settings`` with ``--seed`` and ``--max-order`` applied."""

    engine = settings.engine
    if getattr(args, "seed", None) is not None:
        engine = replace(engine, seed=args.seed)
    if getattr(args, "max_order", None) is not None:
        if args.max_order < 1:
            raise InputError("--max-order must be positive")
        engine = replace(engine, max_group_order=args.max_order)
    return replace(settings, engine=engine)


def load_spec(args: argparse.Namespace, settings: Settings) -> AlgebraSpec:
    """Read the algebra named on the command line."""

    if args.family is not None:
        if args.path is not None:
            raise InputError("give either a file or --family, not both")
        if args.n is None or args.q is None:
            raise InputError("--family needs --n and --q")
        if args.q > settings.engine.max_field_order:
            raise InputError(f"field of order {args.q} exceeds the limit {settings.engine.max_field_order}")
        return make_example(args.family, args.n, args.q)
    if args.path is None:
        raise InputError("an algebra file or --family is required")
    return load_algebra_file(args.path, max_field_order=settings.engine.max_field_order)


def say(args: argparse.Namespace, text: str) -> None:
    """Print a human summary, moving it to stderr when the JSON report goes to stdout."""

    stream = sys.stderr if getattr(args, "json_path", None) == "-" else sys.stdout
    print(text, file=stream)


@contextmanager
def stopwatch(timing: dict[str, float], name: str) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        timing[name] = round(time.perf_counter() - start, 3)


def finish(document: ResultDocument, args: argparse.Namespace, timing: dict[str, float]) -> int:
    """Attach timing if requested, write the JSON report and pick the exit code."""

    if getattr(args, "timing", False):
        document.timing = timing
    path = getattr(args, "json_path", None)
    if path == "-":
        print(document.to_json(), end="")
    elif path:
        document.write(path)
        logger.info("Report written to %s", path)
    return EXIT_OK if document.passed else EXIT_FAILED


__all__ = [
    "EXIT_FAILED",
    "EXIT_INPUT",
    "EXIT_OK",
    "add_algebra_arguments",
    "add_run_arguments",
    "apply_overrides",
    "finish",
    "load_spec",
    "say",
    "stopwatch",
]
