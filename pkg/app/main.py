"""Command-line entry point of the decomposition engine."""

from __future__ import annotations

import logging
import sys
from collections.abc import Sequence

from app.config import ConfigurationError, get_settings
from app.errors import DomainError, InputError, InternalConsistencyError
from app.handlers import setup_parser
from app.handlers.common import EXIT_FAILED, EXIT_INPUT

logger = logging.getLogger(__name__)


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, dispatch to the chosen handler and map errors to exit codes."""

    settings = get_settings()

    logging.basicConfig(
        level=settings.logging.level,
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    )

    args = setup_parser().parse_args(argv)
    try:
        return args.handler(args, settings)
    except (InputError, DomainError) as error:
        logger.error("Input error: %s", error)
        return EXIT_INPUT
    except ConfigurationError as error:
        logger.error("Configuration error: %s", error)
        return EXIT_INPUT
    except InternalConsistencyError as error:
        logger.error("Internal consistency check failed: %s", error)
        for entry in error.trace:
            logger.error("  trace: %s", entry)
        return EXIT_FAILED


if __name__ == "__main__":
    try:
        sys.exit(main())
    except ConfigurationError as error:
        logging.basicConfig(level=logging.ERROR)
        logging.error("Configuration error: %s", error)
        sys.exit(EXIT_INPUT)
