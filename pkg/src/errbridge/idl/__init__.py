"""Front end for the interface-definition language.

The pipeline is tokenize -> parse -> validate -> serialize. The
check_source helper runs the first three stages and either yields a
ValidatedModule or the diagnostics explaining why not.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic
from .ast import (
    Binary,
    BoolLit,
    ErrorEnumDecl,
    Expr,
    FloatCast,
    FloatLit,
    FunctionDecl,
    If,
    InterfaceModule,
    IntLit,
    Param,
    ParamRef,
    Return,
    ScalarType,
    Stmt,
    Throw,
)
from .lexer import tokenize
from .parser import parse
from .serialize import SerializationError, deserialize_module, serialize_module
from .tokens import Token, TokenType
from .validate import ValidatedModule, validate

__all__ = [
    "tokenize",
    "parse",
    "validate",
    "check_source",
    "serialize_module",
    "deserialize_module",
    "SerializationError",
    "Token",
    "TokenType",
    "ScalarType",
    "Expr",
    "IntLit",
    "FloatLit",
    "BoolLit",
    "ParamRef",
    "Binary",
    "FloatCast",
    "Stmt",
    "If",
    "Return",
    "Throw",
    "Param",
    "ErrorEnumDecl",
    "FunctionDecl",
    "InterfaceModule",
    "ValidatedModule",
]


def check_source(source: str) -> tuple[ValidatedModule | None, list[Diagnostic]]:
    """Parse and validate source text in one step."""
    module, diagnostics = parse(source)
    if module is None:
        return None, diagnostics
    return validate(module)
