"""Diagnostics shared by the lexer, parser, and validator.

Every problem found in source text is reported as a Diagnostic with a
stable code, so tests and tools can match on codes instead of message
wording. Positions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Severity",
    "Diagnostic",
    "error",
    "has_errors",
    "E_UNKNOWN_CHAR",
    "E_SYNTAX",
    "E_UNKNOWN_ERROR_TYPE",
    "E_THROW_IN_NONTHROWING",
    "E_TYPE_MISMATCH",
    "E_MISSING_RETURN",
    "E_DUPLICATE_NAME",
]

E_UNKNOWN_CHAR = "E0001"
E_SYNTAX = "E0002"
E_UNKNOWN_ERROR_TYPE = "E0003"
E_THROW_IN_NONTHROWING = "E0004"
E_TYPE_MISMATCH = "E0005"
E_MISSING_RETURN = "E0006"
E_DUPLICATE_NAME = "E0007"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    severity: Severity
    line: int  # 1-based
    column: int  # 1-based
    message: str
    code: str

    def render(self, filename: str) -> str:
        """Format as 'file:line:col: code: message' for command-line output."""
        return f"{filename}:{self.line}:{self.column}: {self.code}: {self.message}"


def error(line: int, column: int, message: str, code: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, line, column, message, code)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)
