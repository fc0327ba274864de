"""Recursive-descent parser for the interface-definition language.

Grammar (whitespace-insensitive; statement semicolons optional):

    module      := "module" IDENT decl*
    decl        := enum_decl | func_decl
    enum_decl   := "enum" IDENT ":" "Error" "{" ("case" IDENT)* "}"
    func_decl   := "func" IDENT "(" params? ")" "throws"? ("->" type)? block
    params      := IDENT ":" type ("," IDENT ":" type)*
    block       := "{" stmt* "}"
    stmt        := "if" expr block ("else" (if_stmt | block))?
                 | "return" expr? ";"?
                 | "throw" IDENT "." IDENT ";"?
    expr        := or (precedence: || < && < comparisons < + - < * /)
    primary     := INT | FLOAT | "true" | "false" | IDENT
                 | "Float" "(" expr ")" | "(" expr ")"

There is no unary minus; negative values are only produced by
arithmetic. Parsing stops at the first syntax error (E0002).
"""

from __future__ import annotations

from ..diagnostics import E_SYNTAX, Diagnostic, error
from .ast import (
    SURFACE_TYPE_NAMES,
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
from .tokens import Token, TokenType

__all__ = ["parse", "parse_tokens"]

_EXPR_START = {
    TokenType.INT,
    TokenType.FLOAT,
    TokenType.TRUE,
    TokenType.FALSE,
    TokenType.IDENT,
    TokenType.LPAREN,
}

_COMPARISON_OPS = {
    TokenType.EQ_EQ: "==",
    TokenType.BANG_EQ: "!=",
    TokenType.LT: "<",
    TokenType.LT_EQ: "<=",
    TokenType.GT: ">",
    TokenType.GT_EQ: ">=",
}


class _ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.type is not TokenType.EOF:
            self.pos += 1
        return token

    def check(self, kind: TokenType) -> bool:
        return self.peek().type is kind

    def match(self, kind: TokenType) -> Token | None:
        if self.check(kind):
            return self.advance()
        return None

    def expect(self, kind: TokenType, what: str) -> Token:
        if self.check(kind):
            return self.advance()
        return self.fail(what)

    def fail(self, what: str) -> Token:
        token = self.peek()
        found = token.text if token.type is not TokenType.EOF else "end of input"
        raise _ParseError(
            error(
                token.line,
                token.column,
                f"expected {what}, found {found!r}",
                E_SYNTAX,
            )
        )

    # -- declarations --------------------------------------------------

    def module(self) -> InterfaceModule:
        self.expect(TokenType.MODULE, "'module'")
        name = self.expect(TokenType.IDENT, "module name").text
        enums: list[ErrorEnumDecl] = []
        functions: list[FunctionDecl] = []
        while not self.check(TokenType.EOF):
            if self.check(TokenType.ENUM):
                enums.append(self.enum_decl())
            elif self.check(TokenType.FUNC):
                functions.append(self.func_decl())
            else:
                self.fail("'enum' or 'func'")
        return InterfaceModule(name, enums, functions)

    def enum_decl(self) -> ErrorEnumDecl:
        keyword = self.expect(TokenType.ENUM, "'enum'")
        name = self.expect(TokenType.IDENT, "enum name").text
        self.expect(TokenType.COLON, "':'")
        base = self.expect(TokenType.IDENT, "'Error'")
        if base.text != "Error":
            raise _ParseError(
                error(
                    base.line,
                    base.column,
                    f"expected 'Error' as the enum base, found {base.text!r}",
                    E_SYNTAX,
                )
            )
        self.expect(TokenType.LBRACE, "'{'")
        cases: list[str] = []
        while self.match(TokenType.CASE):
            cases.append(self.expect(TokenType.IDENT, "case name").text)
        self.expect(TokenType.RBRACE, "'}'")
        return ErrorEnumDecl(name, cases, line=keyword.line, column=keyword.column)

    def func_decl(self) -> FunctionDecl:
        keyword = self.expect(TokenType.FUNC, "'func'")
        name = self.expect(TokenType.IDENT, "function name").text
        self.expect(TokenType.LPAREN, "'('")
        params: list[Param] = []
        if not self.check(TokenType.RPAREN):
            params.append(self.param())
            while self.match(TokenType.COMMA):
                params.append(self.param())
        self.expect(TokenType.RPAREN, "')'")
        throws = self.match(TokenType.THROWS) is not None
        returns = ScalarType.UNIT
        if self.match(TokenType.ARROW):
            returns = self.type_name()
        body = self.block()
        return FunctionDecl(
            name,
            params,
            returns,
            throws,
            body,
            line=keyword.line,
            column=keyword.column,
        )

    def param(self) -> Param:
        name = self.expect(TokenType.IDENT, "parameter name")
        self.expect(TokenType.COLON, "':'")
        return Param(name.text, self.type_name(), line=name.line, column=name.column)

    def type_name(self) -> ScalarType:
        token = self.expect(TokenType.IDENT, "type name")
        ty = SURFACE_TYPE_NAMES.get(token.text)
        if ty is None:
            raise _ParseError(
                error(
                    token.line,
                    token.column,
                    f"unknown type name {token.text!r}",
                    E_SYNTAX,
                )
            )
        return ty

    # -- statements ----------------------------------------------------

    def block(self) -> list[Stmt]:
        self.expect(TokenType.LBRACE, "'{'")
        body: list[Stmt] = []
        while not self.check(TokenType.RBRACE):
            body.append(self.statement())
        self.expect(TokenType.RBRACE, "'}'")
        return body

    def statement(self) -> Stmt:
        if self.check(TokenType.IF):
            return self.if_stmt()
        if self.check(TokenType.RETURN):
            keyword = self.advance()
            value: Expr | None = None
            if self.peek().type in _EXPR_START:
                value = self.expression()
            self.match(TokenType.SEMI)
            return Return(value, line=keyword.line, column=keyword.column)
        if self.check(TokenType.THROW):
            keyword = self.advance()
            enum_name = self.expect(TokenType.IDENT, "error enum name").text
            self.expect(TokenType.DOT, "'.'")
            case_name = self.expect(TokenType.IDENT, "case name").text
            self.match(TokenType.SEMI)
            return Throw(enum_name, case_name, line=keyword.line, column=keyword.column)
        return self.fail("a statement")  # type: ignore[return-value]

    def if_stmt(self) -> If:
        keyword = self.expect(TokenType.IF, "'if'")
        condition = self.expression()
        then_body = self.block()
        else_body: list[Stmt] = []
        if self.match(TokenType.ELSE):
            if self.check(TokenType.IF):
                else_body = [self.if_stmt()]
            else:
                else_body = self.block()
        return If(condition, then_body, else_body, line=keyword.line, column=keyword.column)

    # -- expressions, lowest precedence first --------------------------

    def expression(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        expr = self.and_expr()
        while self.check(TokenType.OR_OR):
            token = self.advance()
            rhs = self.and_expr()
            expr = Binary("||", expr, rhs, line=token.line, column=token.column)
        return expr

    def and_expr(self) -> Expr:
        expr = self.comparison()
        while self.check(TokenType.AND_AND):
            token = self.advance()
            rhs = self.comparison()
            expr = Binary("&&", expr, rhs, line=token.line, column=token.column)
        return expr

    def comparison(self) -> Expr:
        expr = self.additive()
        while self.peek().type in _COMPARISON_OPS:
            token = self.advance()
            rhs = self.additive()
            op = _COMPARISON_OPS[token.type]
            expr = Binary(op, expr, rhs, line=token.line, column=token.column)
        return expr

    def additive(self) -> Expr:
        expr = self.multiplicative()
        while self.check(TokenType.PLUS) or self.check(TokenType.MINUS):
            token = self.advance()
            rhs = self.multiplicative()
            expr = Binary(token.text, expr, rhs, line=token.line, column=token.column)
        return expr

    def multiplicative(self) -> Expr:
        expr = self.primary()
        while self.check(TokenType.STAR) or self.check(TokenType.SLASH):
            token = self.advance()
            rhs = self.primary()
            expr = Binary(token.text, expr, rhs, line=token.line, column=token.column)
        return expr

    def primary(self) -> Expr:
        token = self.peek()
        if token.type is TokenType.INT:
            self.advance()
            return IntLit(int(token.text), line=token.line, column=token.column)
        if token.type is TokenType.FLOAT:
            self.advance()
            return FloatLit(float(token.text), line=token.line, column=token.column)
        if token.type is TokenType.TRUE:
            self.advance()
            return BoolLit(True, line=token.line, column=token.column)
        if token.type is TokenType.FALSE:
            self.advance()
            return BoolLit(False, line=token.line, column=token.column)
        if token.type is TokenType.IDENT:
            self.advance()
            if token.text == "Float" and self.check(TokenType.LPAREN):
                self.advance()
                operand = self.expression()
                self.expect(TokenType.RPAREN, "')'")
                return FloatCast(operand, line=token.line, column=token.column)
            if self.check(TokenType.LPAREN):
                raise _ParseError(
                    error(
                        token.line,
                        token.column,
                        f"{token.text!r} is not callable; only 'Float(...)' is",
                        E_SYNTAX,
                    )
                )
            return ParamRef(token.text, line=token.line, column=token.column)
        if token.type is TokenType.LPAREN:
            self.advance()
            expr = self.expression()
            self.expect(TokenType.RPAREN, "')'")
            return expr
        return self.fail("an expression")  # type: ignore[return-value]


def parse_tokens(tokens: list[Token]) -> tuple[InterfaceModule | None, list[Diagnostic]]:
    """Parse a token stream into a module, stopping at the first error."""
    parser = _Parser(tokens)
    try:
        return parser.module(), []
    except _ParseError as exc:
        return None, [exc.diagnostic]


def parse(source: str) -> tuple[InterfaceModule | None, list[Diagnostic]]:
    """Tokenize and parse source text.

    Lexer diagnostics (E0001) do not stop the parse on their own, but
    the module is withheld whenever any diagnostic was produced.
    """
    tokens, diagnostics = tokenize(source)
    module, parse_diagnostics = parse_tokens(tokens)
    diagnostics = diagnostics + parse_diagnostics
    if diagnostics:
        return None, diagnostics
    return module, diagnostics
