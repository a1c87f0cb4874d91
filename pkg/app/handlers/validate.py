"""Handler for the ``validate`` command."""

from __future__ import annotations

import argparse

from app.config import Settings
from app.core.algebra import get_algebra
from app.formats import ResultDocument, describe_algebra

from .common import add_algebra_arguments, add_run_arguments, apply_overrides, finish, load_spec, say, stopwatch


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("validate", help="проверить аксиомы алгебры")
    add_algebra_arguments(parser)
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Parse the algebra; parsing already rejects every axiom violation."""

    settings = apply_overrides(args, settings)
    timing: dict[str, float] = {}
    with stopwatch(timing, "parse"):
        spec = load_spec(args, settings)
    algebra = get_algebra(spec)
    description = describe_algebra(spec)
    description["nilpotency_class"] = algebra.nilpotency_class()
    description["dim_C_J"] = algebra.minus_fixed_space().dim

    say(args, f"Алгебра корректна: dim J = {spec.dim}, класс нильпотентности {description['nilpotency_class']}")
    document = ResultDocument(
        command="validate",
        seed=settings.engine.seed,
        algebra=description,
        lemma_checks={"axioms": True},
    )
    return finish(document, args, timing)
