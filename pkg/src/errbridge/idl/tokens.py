"""Token definitions for the interface-definition language."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

__all__ = ["TokenType", "Token", "KEYWORDS"]


class TokenType(Enum):
    # Keywords
    MODULE = auto()
    ENUM = auto()
    CASE = auto()
    FUNC = auto()
    THROWS = auto()
    THROW = auto()
    IF = auto()
    ELSE = auto()
    RETURN = auto()
    TRUE = auto()
    FALSE = auto()

    # Literals and names
    IDENT = auto()
    INT = auto()
    FLOAT = auto()

    # Punctuation
    LPAREN = auto()
    RPAREN = auto()
    LBRACE = auto()
    RBRACE = auto()
    COLON = auto()
    COMMA = auto()
    SEMI = auto()
    DOT = auto()
    ARROW = auto()

    # Operators
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    SLASH = auto()
    EQ_EQ = auto()
    BANG_EQ = auto()
    LT = auto()
    LT_EQ = auto()
    GT = auto()
    GT_EQ = auto()
    AND_AND = auto()
    OR_OR = auto()

    EOF = auto()


KEYWORDS: dict[str, TokenType] = {
    "module": TokenType.MODULE,
    "enum": TokenType.ENUM,
    "case": TokenType.CASE,
    "func": TokenType.FUNC,
    "throws": TokenType.THROWS,
    "throw": TokenType.THROW,
    "if": TokenType.IF,
    "else": TokenType.ELSE,
    "return": TokenType.RETURN,
    "true": TokenType.TRUE,
    "false": TokenType.FALSE,
}


@dataclass(frozen=True, slots=True)
class Token:
    type: TokenType
    text: str
    line: int  # 1-based
    column: int  # 1-based

    def __repr__(self) -> str:
        return f"Token({self.type.name}, {self.text!r}, {self.line}:{self.column})"
