"""Tree-walking evaluator for validated module functions.

Evaluation is pure: it takes argument values and produces an Outcome
that either holds a return value or describes the thrown error case.
Nothing here allocates error boxes or touches refcounts; the dispatch
layer materializes boxes from the symbolic throw description.

Numeric semantics are pinned to the compiled world being modeled:

  * Int is two's-complement 64-bit; + - * wrap around silently.
  * Int division truncates toward zero; dividing by zero is a trap.
  * Float is IEEE binary64; float division by zero yields infinity
    (or NaN for 0/0) and never traps.
  * Float(x) converts an Int the way a double cast does: exact for
    magnitudes below 2**53, round-to-nearest above.
  * && and || short-circuit, and operands evaluate left to right, so
    a guarded division like 'b != 0 && a / b > 1' cannot trap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..idl.ast import (
    Binary,
    BoolLit,
    Expr,
    FloatCast,
    FloatLit,
    FunctionDecl,
    If,
    IntLit,
    ParamRef,
    Return,
    ScalarType,
    Stmt,
    Throw,
)
from ..idl.validate import ValidatedModule
from .values import UNIT, Value, boolean, float64, int64, wrap_int64

__all__ = ["EvalTrap", "ThrownError", "Outcome", "eval_function"]


class EvalTrap(Exception):
    """An unrecoverable fault in the callee: the call cannot complete.

    Traps are not errors in the language's sense; they do not produce
    an error box and cannot be caught by the caller's error handling.
    """


@dataclass(frozen=True, slots=True)
class ThrownError:
    """Symbolic description of a thrown error case."""

    enum_name: str
    case_name: str
    case_index: int


@dataclass(frozen=True, slots=True)
class Outcome:
    """Result of evaluating a function: a value or a thrown error."""

    value: Value | None = None
    error: ThrownError | None = None

    def __post_init__(self) -> None:
        assert (self.value is None) != (self.error is None)

    @property
    def returned(self) -> bool:
        return self.value is not None

    @property
    def threw(self) -> bool:
        return self.error is not None


class _ReturnSignal(Exception):
    def __init__(self, value: Value) -> None:
        self.value = value


class _ThrowSignal(Exception):
    def __init__(self, thrown: ThrownError) -> None:
        self.thrown = thrown


def eval_function(
    module: ValidatedModule,
    function: FunctionDecl,
    args: Sequence[Value],
) -> Outcome:
    """Evaluate one function call. Raises EvalTrap on faults."""
    if len(args) != len(function.params):
        raise EvalTrap(
            f"{function.name} takes {len(function.params)} arguments, "
            f"got {len(args)}"
        )
    scope: dict[str, Value] = {}
    for param, arg in zip(function.params, args):
        if arg.type is not param.type:
            raise EvalTrap(
                f"{function.name} parameter {param.name!r} is "
                f"{param.type.value}, got {arg.type.value}"
            )
        scope[param.name] = arg
    try:
        _exec_block(function.body, module, scope)
    except _ReturnSignal as signal:
        return Outcome(value=_at_return_boundary(signal.value, function))
    except _ThrowSignal as signal:
        return Outcome(error=signal.thrown)
    if function.returns is ScalarType.UNIT:
        return Outcome(value=UNIT)
    raise EvalTrap(f"{function.name} reached the end of its body without returning")


def _at_return_boundary(value: Value, function: FunctionDecl) -> Value:
    # The single implicit conversion: an Int returned where Float is
    # declared widens here, at the boundary, not inside the expression.
    if function.returns is ScalarType.FLOAT64 and value.type is ScalarType.INT64:
        return float64(float(value.payload))
    return value


def _exec_block(body: list[Stmt], module: ValidatedModule, scope: dict[str, Value]) -> None:
    for stmt in body:
        _exec_stmt(stmt, module, scope)


def _exec_stmt(stmt: Stmt, module: ValidatedModule, scope: dict[str, Value]) -> None:
    if isinstance(stmt, If):
        condition = _eval(stmt.condition, scope)
        assert condition.type is ScalarType.BOOL
        if condition.payload:
            _exec_block(stmt.then_body, module, scope)
        else:
            _exec_block(stmt.else_body, module, scope)
    elif isinstance(stmt, Return):
        raise _ReturnSignal(UNIT if stmt.value is None else _eval(stmt.value, scope))
    elif isinstance(stmt, Throw):
        enum = module.enum(stmt.enum_name)
        assert enum is not None
        case_index = enum.case_index(stmt.case_name)
        assert case_index is not None
        raise _ThrowSignal(ThrownError(stmt.enum_name, stmt.case_name, case_index))
    else:
        raise AssertionError(f"unhandled statement node {type(stmt).__name__}")


def _eval(expr: Expr, scope: dict[str, Value]) -> Value:
    if isinstance(expr, IntLit):
        return int64(expr.value)
    if isinstance(expr, FloatLit):
        return float64(expr.value)
    if isinstance(expr, BoolLit):
        return boolean(expr.value)
    if isinstance(expr, ParamRef):
        return scope[expr.name]
    if isinstance(expr, FloatCast):
        operand = _eval(expr.operand, scope)
        if operand.type is ScalarType.INT64:
            return float64(float(operand.payload))
        assert operand.type is ScalarType.FLOAT64
        return operand
    if isinstance(expr, Binary):
        return _eval_binary(expr, scope)
    raise AssertionError(f"unhandled expression node {type(expr).__name__}")


def _eval_binary(expr: Binary, scope: dict[str, Value]) -> Value:
    op = expr.op
    if op in ("&&", "||"):
        lhs = _eval(expr.lhs, scope)
        assert lhs.type is ScalarType.BOOL
        if op == "&&" and not lhs.payload:
            return boolean(False)
        if op == "||" and lhs.payload:
            return boolean(True)
        rhs = _eval(expr.rhs, scope)
        assert rhs.type is ScalarType.BOOL
        return boolean(bool(rhs.payload))

    lhs = _eval(expr.lhs, scope)
    rhs = _eval(expr.rhs, scope)
    assert lhs.type is rhs.type

    if op in ("==", "!="):
        equal = lhs.payload == rhs.payload
        return boolean(equal if op == "==" else not equal)
    if op in ("<", "<=", ">", ">="):
        a, b = lhs.payload, rhs.payload
        result = {
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[op]
        return boolean(result)

    if lhs.type is ScalarType.INT64:
        a, b = lhs.payload, rhs.payload
        if op == "+":
            return int64(a + b)
        if op == "-":
            return int64(a - b)
        if op == "*":
            return int64(a * b)
        if b == 0:
            raise EvalTrap("integer division by zero")
        return int64(_trunc_div(a, b))

    a, b = lhs.payload, rhs.payload
    if op == "+":
        return float64(a + b)
    if op == "-":
        return float64(a - b)
    if op == "*":
        return float64(a * b)
    return float64(_ieee_div(a, b))


def _trunc_div(a: int, b: int) -> int:
    """Integer division truncating toward zero (floor division does not)."""
    quotient = a // b
    if quotient < 0 and quotient * b != a:
        quotient += 1
    return wrap_int64(quotient)


def _ieee_div(a: float, b: float) -> float:
    """Float division that never raises: zero divisors follow IEEE 754."""
    if b == 0.0:
        if a == 0.0 or math.isnan(a):
            return math.nan
        negative = (math.copysign(1.0, a) < 0) != (math.copysign(1.0, b) < 0)
        return -math.inf if negative else math.inf
    return a / b
