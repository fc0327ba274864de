"""Simulated foreign runtime: values, error boxes, evaluation, dispatch.

The module-level eb_* functions operate on a process-wide default
Runtime; tests that need isolation construct their own Runtime.
"""

from __future__ import annotations

from .abi import (
    NULL_HANDLE,
    STATUS_RETURNED,
    STATUS_THREW,
    STATUS_TRAP,
    InvokeResult,
    ModuleLoadError,
    Runtime,
    RuntimeTrap,
    default_runtime,
    eb_error_dyncast,
    eb_error_message,
    eb_error_release,
    eb_error_retain,
    eb_invoke,
    eb_live_errors,
    eb_load_module,
)
from .boxes import FNV_OFFSET, FNV_PRIME, ErrorBox, TypeId, fnv1a_64
from .interpreter import EvalTrap, Outcome, ThrownError, eval_function
from .values import (
    CELL_SIZE,
    TAG_BOOL,
    TAG_FLOAT64,
    TAG_INT64,
    TAG_UNIT,
    UNIT,
    Value,
    boolean,
    decode_cell,
    encode_cell,
    float64,
    int64,
    wrap_int64,
)

__all__ = [
    "Runtime",
    "RuntimeTrap",
    "ModuleLoadError",
    "InvokeResult",
    "default_runtime",
    "eb_load_module",
    "eb_invoke",
    "eb_error_retain",
    "eb_error_release",
    "eb_error_dyncast",
    "eb_error_message",
    "eb_live_errors",
    "STATUS_RETURNED",
    "STATUS_THREW",
    "STATUS_TRAP",
    "NULL_HANDLE",
    "TypeId",
    "ErrorBox",
    "fnv1a_64",
    "FNV_OFFSET",
    "FNV_PRIME",
    "EvalTrap",
    "Outcome",
    "ThrownError",
    "eval_function",
    "Value",
    "UNIT",
    "int64",
    "float64",
    "boolean",
    "wrap_int64",
    "encode_cell",
    "decode_cell",
    "CELL_SIZE",
    "TAG_UNIT",
    "TAG_INT64",
    "TAG_FLOAT64",
    "TAG_BOOL",
]
