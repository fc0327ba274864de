"""Lexer for the interface-definition language.

Produces a flat token stream. An unrecognized character is reported as
an E0001 diagnostic and skipped, so one bad byte does not hide later
problems; the stream always ends with an EOF token.
"""

from __future__ import annotations

from ..diagnostics import E_UNKNOWN_CHAR, Diagnostic, error
from .tokens import KEYWORDS, Token, TokenType

__all__ = ["tokenize"]

_PUNCTUATION = {
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    ":": TokenType.COLON,
    ",": TokenType.COMMA,
    ";": TokenType.SEMI,
    ".": TokenType.DOT,
    "+": TokenType.PLUS,
    "*": TokenType.STAR,
    "/": TokenType.SLASH,
}


class _Cursor:
    """Tracks position in the source while scanning."""

    def __init__(self, source: str) -> None:
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1

    def at_end(self) -> bool:
        return self.pos >= len(self.source)

    def peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        if index >= len(self.source):
            return ""
        return self.source[index]

    def advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Scan source text into tokens.

    Returns the token list (EOF-terminated) and any diagnostics. The
    token list is usable even when diagnostics are present.
    """
    cursor = _Cursor(source)
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []

    while not cursor.at_end():
        start_line, start_column = cursor.line, cursor.column
        ch = cursor.peek()

        if ch in " \t\r\n":
            cursor.advance()
            continue

        if ch == "/" and cursor.peek(1) == "/":
            while not cursor.at_end() and cursor.peek() != "\n":
                cursor.advance()
            continue

        if ch.isdigit():
            tokens.append(_scan_number(cursor, start_line, start_column))
            continue

        if ch.isalpha() or ch == "_":
            tokens.append(_scan_word(cursor, start_line, start_column))
            continue

        two = ch + cursor.peek(1)
        if two in ("->", "==", "!=", "<=", ">=", "&&", "||"):
            cursor.advance()
            cursor.advance()
            kind = {
                "->": TokenType.ARROW,
                "==": TokenType.EQ_EQ,
                "!=": TokenType.BANG_EQ,
                "<=": TokenType.LT_EQ,
                ">=": TokenType.GT_EQ,
                "&&": TokenType.AND_AND,
                "||": TokenType.OR_OR,
            }[two]
            tokens.append(Token(kind, two, start_line, start_column))
            continue

        if ch == "<":
            cursor.advance()
            tokens.append(Token(TokenType.LT, "<", start_line, start_column))
            continue
        if ch == ">":
            cursor.advance()
            tokens.append(Token(TokenType.GT, ">", start_line, start_column))
            continue
        if ch == "-":
            cursor.advance()
            tokens.append(Token(TokenType.MINUS, "-", start_line, start_column))
            continue

        if ch in _PUNCTUATION:
            cursor.advance()
            tokens.append(Token(_PUNCTUATION[ch], ch, start_line, start_column))
            continue

        cursor.advance()
        diagnostics.append(
            error(
                start_line,
                start_column,
                f"unknown character {ch!r}",
                E_UNKNOWN_CHAR,
            )
        )

    tokens.append(Token(TokenType.EOF, "", cursor.line, cursor.column))
    return tokens, diagnostics


def _scan_number(cursor: _Cursor, line: int, column: int) -> Token:
    text = []
    while cursor.peek().isdigit():
        text.append(cursor.advance())
    if cursor.peek() == "." and cursor.peek(1).isdigit():
        text.append(cursor.advance())
        while cursor.peek().isdigit():
            text.append(cursor.advance())
        return Token(TokenType.FLOAT, "".join(text), line, column)
    return Token(TokenType.INT, "".join(text), line, column)


def _scan_word(cursor: _Cursor, line: int, column: int) -> Token:
    text = []
    while cursor.peek().isalnum() or cursor.peek() == "_":
        text.append(cursor.advance())
    word = "".join(text)
    kind = KEYWORDS.get(word, TokenType.IDENT)
    return Token(kind, word, line, column)
