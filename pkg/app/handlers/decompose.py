"""Handler for the ``decompose`` command."""

from __future__ import annotations

import argparse

from app.config import Settings
from app.errors import InputError
from app.formats import ResultDocument, describe_algebra
from app.services import CharacterCertificate, VerificationService

from .common import add_algebra_arguments, add_run_arguments, apply_overrides, finish, load_spec, say, stopwatch


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("decompose", help="разложить один неприводимый характер")
    add_algebra_arguments(parser)
    add_run_arguments(parser)
    parser.add_argument("--index", type=int, required=True, help="номер характера в таблице")
    parser.set_defaults(handler=run)


def render_certificate(certificate: CharacterCertificate) -> str:
    if certificate.error is not None:
        return f"χ{certificate.index}: ошибка: {certificate.error}"
    return (
        f"χ{certificate.index}: степень {certificate.degree}, dim H = {certificate.dim_H}, "
        f"|C_H(sigma)| = {certificate.order_CH}, шагов {certificate.depth}"
    )


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Decompose the character with the given table index."""

    settings = apply_overrides(args, settings)
    timing: dict[str, float] = {}
    spec = load_spec(args, settings)
    verifier = VerificationService(spec, settings)
    fixed = verifier.decomposer.fixed
    with stopwatch(timing, "table"):
        table = verifier.oracle.table(fixed)
    if not 0 <= args.index < len(table):
        raise InputError(f"--index must lie in 0..{len(table) - 1}")

    with stopwatch(timing, "decompose"):
        certificate = verifier.certify(args.index, table.characters[args.index])
    say(args, render_certificate(certificate))

    failures = [] if certificate.matched else [{"check": "decompose", "message": certificate.error or "index mismatch"}]
    document = ResultDocument(
        command="decompose",
        seed=settings.engine.seed,
        algebra=describe_algebra(spec),
        passed=not failures,
        orders={"G": verifier.group.order, "C_G": fixed.order},
        class_count=len(table),
        certificates=[certificate.as_dict()],
        lemma_checks={"decompositions": certificate.matched},
        failures=failures,
    )
    return finish(document, args, timing)
