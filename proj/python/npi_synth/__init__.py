"""Invariant synthesis from non-provability information."""

from pathlib import Path

from ._npi import (
    NpiError,
    ParseError,
    Program,
    gen_predicates,
    houdini,
    is_consistent,
    parse,
    parse_file,
    synthesize,
    to_ice,
)

__all__ = [
    "NpiError",
    "ParseError",
    "Program",
    "gen_predicates",
    "houdini",
    "is_consistent",
    "parse",
    "parse_file",
    "synthesize",
    "synthesize_file",
    "to_ice",
]


def synthesize_file(path, **options):
    """Parse `path` and synthesize; the report is named after the file stem."""
    path = Path(path)
    return synthesize(parse_file(str(path)), name=path.stem, **options)
