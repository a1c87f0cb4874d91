"""Handler for the ``verify`` command."""

from __future__ import annotations

import argparse

from app.config import Settings
from app.formats import ResultDocument, describe_algebra, describe_table
from app.services import VerificationService

from .common import add_algebra_arguments, add_run_arguments, apply_overrides, finish, load_spec, say, stopwatch
from .decompose import render_certificate


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="разложить все характеры и проверить тождества")
    add_algebra_arguments(parser)
    add_run_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Run the full verification and summarize it."""

    settings = apply_overrides(args, settings)
    timing: dict[str, float] = {}
    spec = load_spec(args, settings)
    with stopwatch(timing, "verify"):
        report = VerificationService(spec, settings).verify()

    for certificate in report.certificates:
        say(args, render_certificate(certificate))
    failed = sorted({failure["check"] for failure in report.failures})
    status = "пройдена" if report.passed else f"не пройдена ({', '.join(failed) or 'см. отчёт'})"
    say(args, f"Проверка {status}: {len(report.certificates)} характеров, |C_G(sigma)| = {report.order_C}")

    document = ResultDocument(
        command="verify",
        seed=settings.engine.seed,
        algebra=describe_algebra(spec),
        passed=report.passed,
        orders={
            "G": report.order_G,
            "C_G": report.order_C,
            "twisted": report.order_twisted,
            "twisted_subgroup": report.order_twisted_subgroup,
        },
        class_count=report.class_count,
        table=describe_table(report.table),
        certificates=[certificate.as_dict() for certificate in report.certificates],
        lemma_checks=report.lemma_checks,
        failures=report.failures,
        notes=report.notes,
    )
    return finish(document, args, timing)
