"""Input and output formats: algebra files, example families and result documents."""

from .algebra_file import emit_algebra_text, load_algebra_file, parse_algebra_text, write_algebra_file
from .examples import FAMILIES, make_example
from .results import ResultDocument, describe_algebra, describe_table

__all__ = [
    "FAMILIES",
    "ResultDocument",
    "describe_algebra",
    "describe_table",
    "emit_algebra_text",
    "load_algebra_file",
    "make_example",
    "parse_algebra_text",
    "write_algebra_file",
]
