"""Semantic validation for parsed interface modules.

Checks name resolution, typing, throw legality, and return coverage,
and annotates every expression with its inferred type. A module that
passes is wrapped in ValidatedModule; downstream stages (interpreter,
serializer, code generator) only accept validated modules.

Unlike the parser, validation keeps going after an error so one pass
reports as much as possible.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import (
    E_DUPLICATE_NAME,
    E_MISSING_RETURN,
    E_THROW_IN_NONTHROWING,
    E_TYPE_MISMATCH,
    E_UNKNOWN_ERROR_TYPE,
    Diagnostic,
    error,
)
from .ast import (
    Binary,
    BoolLit,
    Expr,
    FloatCast,
    FloatLit,
    FunctionDecl,
    If,
    InterfaceModule,
    IntLit,
    ParamRef,
    Return,
    ScalarType,
    Stmt,
    Throw,
)

__all__ = ["ValidatedModule", "validate"]

_INT64_MAX = 2**63 - 1

_ARITHMETIC_OPS = {"+", "-", "*", "/"}
_EQUALITY_OPS = {"==", "!="}
_ORDERING_OPS = {"<", "<=", ">", ">="}
_LOGICAL_OPS = {"&&", "||"}

_NUMERIC = {ScalarType.INT64, ScalarType.FLOAT64}


@dataclass(frozen=True, slots=True)
class ValidatedModule:
    """A module that passed validation, with expression types filled in."""

    module: InterfaceModule

    @property
    def name(self) -> str:
        return self.module.name

    @property
    def enums(self):
        return self.module.enums

    @property
    def functions(self):
        return self.module.functions

    def enum(self, name: str):
        return self.module.enum(name)

    def function(self, name: str):
        return self.module.function(name)

    def function_index(self, name: str) -> int | None:
        return self.module.function_index(name)


class _Validator:
    def __init__(self, module: InterfaceModule) -> None:
        self.module = module
        self.diagnostics: list[Diagnostic] = []

    def report(self, line: int, column: int, message: str, code: str) -> None:
        self.diagnostics.append(error(line, column, message, code))

    def run(self) -> None:
        self.check_declaration_names()
        for enum in self.module.enums:
            self.check_enum(enum)
        for function in self.module.functions:
            self.check_function(function)

    # -- declarations ----------------------------------------------------

    def check_declaration_names(self) -> None:
        # Enums and functions share one module-level namespace; both
        # become top-level members of the generated C++ namespace. Each
        # repeated name is reported once, at its later occurrence.
        declarations = [(e.name, e.line, e.column) for e in self.module.enums]
        declarations += [(f.name, f.line, f.column) for f in self.module.functions]
        seen: set[str] = set()
        for name, line, column in declarations:
            if name in seen:
                self.report(line, column, f"duplicate name {name!r}", E_DUPLICATE_NAME)
            seen.add(name)

    def check_enum(self, enum) -> None:
        if not enum.cases:
            self.report(
                enum.line,
                enum.column,
                f"error enum {enum.name!r} declares no cases",
                E_TYPE_MISMATCH,
            )
        seen: set[str] = set()
        for case in enum.cases:
            if case in seen:
                self.report(
                    enum.line,
                    enum.column,
                    f"duplicate case {case!r} in enum {enum.name!r}",
                    E_DUPLICATE_NAME,
                )
            seen.add(case)

    # -- functions ---------------------------------------------------------

    def check_function(self, function: FunctionDecl) -> None:
        scope: dict[str, ScalarType] = {}
        for param in function.params:
            if param.name in scope:
                self.report(
                    param.line,
                    param.column,
                    f"duplicate parameter {param.name!r}",
                    E_DUPLICATE_NAME,
                )
            scope[param.name] = param.type
        self.check_block(function.body, function, scope)
        if function.returns is not ScalarType.UNIT and not _terminates(function.body):
            self.report(
                function.line,
                function.column,
                f"function {function.name!r} can reach the end of its body "
                "without returning",
                E_MISSING_RETURN,
            )

    def check_block(
        self,
        body: list[Stmt],
        function: FunctionDecl,
        scope: dict[str, ScalarType],
    ) -> None:
        for stmt in body:
            self.check_stmt(stmt, function, scope)

    def check_stmt(
        self,
        stmt: Stmt,
        function: FunctionDecl,
        scope: dict[str, ScalarType],
    ) -> None:
        if isinstance(stmt, If):
            condition_type = self.infer(stmt.condition, scope)
            if condition_type is not None and condition_type is not ScalarType.BOOL:
                self.report(
                    stmt.condition.line,
                    stmt.condition.column,
                    f"if condition must be Bool, got {condition_type.value}",
                    E_TYPE_MISMATCH,
                )
            self.check_block(stmt.then_body, function, scope)
            self.check_block(stmt.else_body, function, scope)
        elif isinstance(stmt, Return):
            self.check_return(stmt, function, scope)
        elif isinstance(stmt, Throw):
            self.check_throw(stmt, function)

    def check_return(
        self,
        stmt: Return,
        function: FunctionDecl,
        scope: dict[str, ScalarType],
    ) -> None:
        declared = function.returns
        if declared is ScalarType.UNIT:
            if stmt.value is not None:
                self.report(
                    stmt.line,
                    stmt.column,
                    f"function {function.name!r} has no return type but "
                    "returns a value",
                    E_TYPE_MISMATCH,
                )
                self.infer(stmt.value, scope)
            return
        if stmt.value is None:
            self.report(
                stmt.line,
                stmt.column,
                f"function {function.name!r} must return {_surface(declared)}",
                E_TYPE_MISMATCH,
            )
            return
        actual = self.infer(stmt.value, scope)
        if actual is None:
            return
        if actual is declared:
            return
        # The one implicit conversion: an Int value may be returned
        # where Float is declared; it is widened at the return boundary.
        if declared is ScalarType.FLOAT64 and actual is ScalarType.INT64:
            return
        self.report(
            stmt.value.line,
            stmt.value.column,
            f"return type mismatch: expected {_surface(declared)}, "
            f"got {_surface(actual)}",
            E_TYPE_MISMATCH,
        )

    def check_throw(self, stmt: Throw, function: FunctionDecl) -> None:
        enum = self.module.enum(stmt.enum_name)
        if enum is None:
            self.report(
                stmt.line,
                stmt.column,
                f"unknown error enum {stmt.enum_name!r}",
                E_UNKNOWN_ERROR_TYPE,
            )
        elif enum.case_index(stmt.case_name) is None:
            self.report(
                stmt.line,
                stmt.column,
                f"enum {stmt.enum_name!r} has no case {stmt.case_name!r}",
                E_UNKNOWN_ERROR_TYPE,
            )
        if not function.throws:
            self.report(
                stmt.line,
                stmt.column,
                f"function {function.name!r} is not declared 'throws'",
                E_THROW_IN_NONTHROWING,
            )

    # -- expressions -------------------------------------------------------

    def infer(self, expr: Expr, scope: dict[str, ScalarType]) -> ScalarType | None:
        """Infer and annotate the type of expr; None if it has errors."""
        ty = self._infer(expr, scope)
        expr.ty = ty
        return ty

    def _infer(self, expr: Expr, scope: dict[str, ScalarType]) -> ScalarType | None:
        if isinstance(expr, IntLit):
            if expr.value > _INT64_MAX:
                self.report(
                    expr.line,
                    expr.column,
                    f"integer literal {expr.value} does not fit in Int",
                    E_TYPE_MISMATCH,
                )
                return None
            return ScalarType.INT64
        if isinstance(expr, FloatLit):
            return ScalarType.FLOAT64
        if isinstance(expr, BoolLit):
            return ScalarType.BOOL
        if isinstance(expr, ParamRef):
            ty = scope.get(expr.name)
            if ty is None:
                self.report(
                    expr.line,
                    expr.column,
                    f"unknown parameter {expr.name!r}",
                    E_TYPE_MISMATCH,
                )
            return ty
        if isinstance(expr, FloatCast):
            operand = self.infer(expr.operand, scope)
            if operand is not None and operand not in _NUMERIC:
                self.report(
                    expr.operand.line,
                    expr.operand.column,
                    f"Float(...) takes a numeric value, got {_surface(operand)}",
                    E_TYPE_MISMATCH,
                )
            return ScalarType.FLOAT64
        if isinstance(expr, Binary):
            return self._infer_binary(expr, scope)
        raise AssertionError(f"unhandled expression node {type(expr).__name__}")

    def _infer_binary(self, expr: Binary, scope: dict[str, ScalarType]) -> ScalarType | None:
        lhs = self.infer(expr.lhs, scope)
        rhs = self.infer(expr.rhs, scope)
        if lhs is None or rhs is None:
            return None
        op = expr.op
        if op in _LOGICAL_OPS:
            if lhs is not ScalarType.BOOL or rhs is not ScalarType.BOOL:
                self.report(
                    expr.line,
                    expr.column,
                    f"'{op}' needs Bool operands, got {_surface(lhs)} and "
                    f"{_surface(rhs)}",
                    E_TYPE_MISMATCH,
                )
                return None
            return ScalarType.BOOL
        if lhs is not rhs:
            self.report(
                expr.line,
                expr.column,
                f"'{op}' needs matching operand types, got {_surface(lhs)} "
                f"and {_surface(rhs)}; there are no implicit conversions here",
                E_TYPE_MISMATCH,
            )
            return None
        if op in _EQUALITY_OPS:
            return ScalarType.BOOL
        if op in _ORDERING_OPS:
            if lhs not in _NUMERIC:
                self.report(
                    expr.line,
                    expr.column,
                    f"'{op}' needs numeric operands, got {_surface(lhs)}",
                    E_TYPE_MISMATCH,
                )
                return None
            return ScalarType.BOOL
        if op in _ARITHMETIC_OPS:
            if lhs not in _NUMERIC:
                self.report(
                    expr.line,
                    expr.column,
                    f"'{op}' needs numeric operands, got {_surface(lhs)}",
                    E_TYPE_MISMATCH,
                )
                return None
            return lhs
        raise AssertionError(f"unhandled operator {op!r}")


def _terminates(body: list[Stmt]) -> bool:
    """True when control cannot reach the end of the block.

    A throw terminates a path just like a return. An if terminates only
    when both arms exist and terminate.
    """
    for stmt in body:
        if isinstance(stmt, (Return, Throw)):
            return True
        if isinstance(stmt, If):
            if stmt.else_body and _terminates(stmt.then_body) and _terminates(stmt.else_body):
                return True
    return False


def _surface(ty: ScalarType) -> str:
    return {"Int64": "Int", "Float64": "Float", "Bool": "Bool", "Unit": "Unit"}[ty.value]


def validate(module: InterfaceModule) -> tuple[ValidatedModule | None, list[Diagnostic]]:
    """Validate a parsed module; returns the wrapper or the problems."""
    validator = _Validator(module)
    validator.run()
    if validator.diagnostics:
        return None, validator.diagnostics
    return ValidatedModule(module), []
