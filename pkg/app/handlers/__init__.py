"""Command-line handlers."""

import argparse

from . import decompose, example, table, validate, verify


def setup_parser() -> argparse.ArgumentParser:
    """Return the root parser with all sub-commands registered."""

    parser = argparse.ArgumentParser(
        prog="python -m app.main",
        description="Мономиальные разложения характеров групп неподвижных точек инволюции",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    validate.register(subparsers)
    example.register(subparsers)
    table.register(subparsers)
    decompose.register(subparsers)
    verify.register(subparsers)
    return parser


__all__ = ["setup_parser"]
