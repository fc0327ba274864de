"""Canonical serialization of validated modules.

The wire form is JSON with sorted keys, two-space indentation, and a
trailing newline, so serializing the same module always produces the
same bytes. Source positions and inferred types are deliberately not
written: the registry describes the interface, not the source layout.

Deserialization rebuilds the tree, then re-runs validation so the
result carries fresh type annotations and the same guarantees as a
module validated from source.
"""

from __future__ import annotations

import json
from typing import Any

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
from .validate import ValidatedModule, validate

__all__ = ["SerializationError", "serialize_module", "deserialize_module"]

_BINARY_OPS = {"+", "-", "*", "/", "==", "!=", "<", "<=", ">", ">=", "&&", "||"}


class SerializationError(Exception):
    """Raised when bytes cannot be decoded into a valid module."""


def serialize_module(validated: ValidatedModule) -> bytes:
    """Encode a validated module into its canonical byte form."""
    document = _module_to_dict(validated.module)
    text = json.dumps(document, sort_keys=True, indent=2, allow_nan=False)
    return (text + "\n").encode("utf-8")


def deserialize_module(data: bytes) -> ValidatedModule:
    """Decode canonical bytes back into a validated module.

    Raises SerializationError for malformed JSON (with the byte offset),
    schema violations (with the JSON path), and content that does not
    validate.
    """
    try:
        document = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise SerializationError(f"module bytes are not UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SerializationError(
            f"malformed module JSON at offset {exc.pos}: {exc.msg}"
        ) from exc
    module = _module_from_dict(document)
    validated, diagnostics = validate(module)
    if validated is None:
        details = "; ".join(f"{d.code}: {d.message}" for d in diagnostics)
        raise SerializationError(f"deserialized module is not valid: {details}")
    return validated


# -- encoding ------------------------------------------------------------


def _module_to_dict(module: InterfaceModule) -> dict[str, Any]:
    return {
        "name": module.name,
        "enums": [
            {"name": enum.name, "cases": list(enum.cases)} for enum in module.enums
        ],
        "functions": [_function_to_dict(fn) for fn in module.functions],
    }


def _function_to_dict(fn: FunctionDecl) -> dict[str, Any]:
    return {
        "name": fn.name,
        "params": [{"name": p.name, "type": p.type.value} for p in fn.params],
        "returns": fn.returns.value,
        "throws": fn.throws,
        "body": [_stmt_to_dict(s) for s in fn.body],
    }


def _stmt_to_dict(stmt: Stmt) -> dict[str, Any]:
    if isinstance(stmt, If):
        return {
            "kind": "if",
            "condition": _expr_to_dict(stmt.condition),
            "then": [_stmt_to_dict(s) for s in stmt.then_body],
            "else": [_stmt_to_dict(s) for s in stmt.else_body],
        }
    if isinstance(stmt, Return):
        return {
            "kind": "return",
            "value": None if stmt.value is None else _expr_to_dict(stmt.value),
        }
    if isinstance(stmt, Throw):
        return {"kind": "throw", "enum": stmt.enum_name, "case": stmt.case_name}
    raise AssertionError(f"unhandled statement node {type(stmt).__name__}")


def _expr_to_dict(expr: Expr) -> dict[str, Any]:
    if isinstance(expr, IntLit):
        return {"kind": "int", "value": expr.value}
    if isinstance(expr, FloatLit):
        return {"kind": "float", "value": expr.value}
    if isinstance(expr, BoolLit):
        return {"kind": "bool", "value": expr.value}
    if isinstance(expr, ParamRef):
        return {"kind": "param", "name": expr.name}
    if isinstance(expr, Binary):
        return {
            "kind": "binary",
            "op": expr.op,
            "lhs": _expr_to_dict(expr.lhs),
            "rhs": _expr_to_dict(expr.rhs),
        }
    if isinstance(expr, FloatCast):
        return {"kind": "float_cast", "operand": _expr_to_dict(expr.operand)}
    raise AssertionError(f"unhandled expression node {type(expr).__name__}")


# -- decoding ------------------------------------------------------------


def _schema_error(path: str, message: str) -> SerializationError:
    return SerializationError(f"schema violation at {path}: {message}")


def _get(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise _schema_error(path, "expected an object")
    if key not in obj:
        raise _schema_error(path, f"missing key {key!r}")
    return obj[key]


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise _schema_error(path, "expected a string")
    return value


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise _schema_error(path, "expected a boolean")
    return value


def _as_list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise _schema_error(path, "expected an array")
    return value


def _as_type(value: Any, path: str) -> ScalarType:
    name = _as_str(value, path)
    try:
        return ScalarType(name)
    except ValueError:
        raise _schema_error(path, f"unknown type name {name!r}") from None


def _module_from_dict(document: Any) -> InterfaceModule:
    name = _as_str(_get(document, "name", "$"), "$.name")
    enums = [
        _enum_from_dict(item, f"$.enums[{i}]")
        for i, item in enumerate(_as_list(_get(document, "enums", "$"), "$.enums"))
    ]
    functions = [
        _function_from_dict(item, f"$.functions[{i}]")
        for i, item in enumerate(
            _as_list(_get(document, "functions", "$"), "$.functions")
        )
    ]
    return InterfaceModule(name, enums, functions)


def _enum_from_dict(item: Any, path: str) -> ErrorEnumDecl:
    name = _as_str(_get(item, "name", path), f"{path}.name")
    cases = [
        _as_str(case, f"{path}.cases[{i}]")
        for i, case in enumerate(_as_list(_get(item, "cases", path), f"{path}.cases"))
    ]
    return ErrorEnumDecl(name, cases)


def _function_from_dict(item: Any, path: str) -> FunctionDecl:
    name = _as_str(_get(item, "name", path), f"{path}.name")
    params = []
    for i, raw in enumerate(_as_list(_get(item, "params", path), f"{path}.params")):
        param_path = f"{path}.params[{i}]"
        params.append(
            Param(
                _as_str(_get(raw, "name", param_path), f"{param_path}.name"),
                _as_type(_get(raw, "type", param_path), f"{param_path}.type"),
            )
        )
    returns = _as_type(_get(item, "returns", path), f"{path}.returns")
    throws = _as_bool(_get(item, "throws", path), f"{path}.throws")
    body = [
        _stmt_from_dict(raw, f"{path}.body[{i}]")
        for i, raw in enumerate(_as_list(_get(item, "body", path), f"{path}.body"))
    ]
    return FunctionDecl(name, params, returns, throws, body)


def _stmt_from_dict(raw: Any, path: str) -> Stmt:
    kind = _as_str(_get(raw, "kind", path), f"{path}.kind")
    if kind == "if":
        return If(
            _expr_from_dict(_get(raw, "condition", path), f"{path}.condition"),
            [
                _stmt_from_dict(s, f"{path}.then[{i}]")
                for i, s in enumerate(_as_list(_get(raw, "then", path), f"{path}.then"))
            ],
            [
                _stmt_from_dict(s, f"{path}.else[{i}]")
                for i, s in enumerate(_as_list(_get(raw, "else", path), f"{path}.else"))
            ],
        )
    if kind == "return":
        value = _get(raw, "value", path)
        return Return(None if value is None else _expr_from_dict(value, f"{path}.value"))
    if kind == "throw":
        return Throw(
            _as_str(_get(raw, "enum", path), f"{path}.enum"),
            _as_str(_get(raw, "case", path), f"{path}.case"),
        )
    raise _schema_error(path, f"unknown statement kind {kind!r}")


def _expr_from_dict(raw: Any, path: str) -> Expr:
    kind = _as_str(_get(raw, "kind", path), f"{path}.kind")
    if kind == "int":
        value = _get(raw, "value", path)
        if isinstance(value, bool) or not isinstance(value, int):
            raise _schema_error(f"{path}.value", "expected an integer")
        return IntLit(value)
    if kind == "float":
        value = _get(raw, "value", path)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _schema_error(f"{path}.value", "expected a number")
        return FloatLit(float(value))
    if kind == "bool":
        return BoolLit(_as_bool(_get(raw, "value", path), f"{path}.value"))
    if kind == "param":
        return ParamRef(_as_str(_get(raw, "name", path), f"{path}.name"))
    if kind == "binary":
        op = _as_str(_get(raw, "op", path), f"{path}.op")
        if op not in _BINARY_OPS:
            raise _schema_error(f"{path}.op", f"unknown operator {op!r}")
        return Binary(
            op,
            _expr_from_dict(_get(raw, "lhs", path), f"{path}.lhs"),
            _expr_from_dict(_get(raw, "rhs", path), f"{path}.rhs"),
        )
    if kind == "float_cast":
        return FloatCast(_expr_from_dict(_get(raw, "operand", path), f"{path}.operand"))
    raise _schema_error(path, f"unknown expression kind {kind!r}")
