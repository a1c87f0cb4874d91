"""Handler for the ``table`` command."""

from __future__ import annotations

import argparse

from app.config import Settings
from app.formats import ResultDocument, describe_algebra, describe_table
from app.services import DecompositionService

from .common import add_algebra_arguments, add_run_arguments, apply_overrides, finish, load_spec, say, stopwatch


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("table", help="таблица характеров C_G(sigma)")
    add_algebra_arguments(parser)
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Compute and print the character degrees of ``C_G(sigma)``."""

    settings = apply_overrides(args, settings)
    timing: dict[str, float] = {}
    spec = load_spec(args, settings)
    service = DecompositionService(spec, settings)
    with stopwatch(timing, "table"):
        table = service.oracle.table(service.fixed)

    degrees = table.degrees
    say(args, f"|G| = {service.group.order}, |C_G(sigma)| = {service.fixed.order}")
    say(args, f"Классов сопряжённости: {len(table)}; степени: {degrees}")
    document = ResultDocument(
        command="table",
        seed=settings.engine.seed,
        algebra=describe_algebra(spec),
        orders={"G": service.group.order, "C_G": service.fixed.order},
        class_count=len(table),
        table=describe_table(table),
        lemma_checks={"orthogonality": True},
    )
    return finish(document, args, timing)
