"""Error types raised by the spec language pipeline.

All positions are 1-based (line, column) into the source text.
"""

from __future__ import annotations


class SpecError(Exception):
    """Base class for all spec-language failures."""


class LexError(SpecError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ParseError(SpecError):
    def __init__(self, line: int, column: int, expected: str, found: str):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"line {line}, column {column}: expected {expected}, found {found}")


class SortError(SpecError):
    def __init__(self, line: int, column: int, expected: str, found: str, context: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        detail = f" in {context}" if context else ""
        super().__init__(
            f"line {line}, column {column}: expected {expected}, found {found}{detail}"
        )


class EvalError(SpecError):
    """Runtime evaluation failure (unbound parameter, bad channel index, ...)."""
