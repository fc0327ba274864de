"""Runtime values and their fixed-width cell encoding.

A value crossing the dispatch boundary travels in a 9-byte cell: one
tag byte followed by an 8-byte little-endian payload. The tag numbers
and payload layouts here are the wire contract shared with the C++
runtime; changing them breaks every compiled consumer.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..idl.ast import ScalarType

__all__ = [
    "TAG_UNIT",
    "TAG_INT64",
    "TAG_FLOAT64",
    "TAG_BOOL",
    "CELL_SIZE",
    "Value",
    "UNIT",
    "int64",
    "float64",
    "boolean",
    "wrap_int64",
    "encode_cell",
    "decode_cell",
]

TAG_UNIT = 0
TAG_INT64 = 1
TAG_FLOAT64 = 2
TAG_BOOL = 3

CELL_SIZE = 9

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1

_TAG_FOR_TYPE = {
    ScalarType.UNIT: TAG_UNIT,
    ScalarType.INT64: TAG_INT64,
    ScalarType.FLOAT64: TAG_FLOAT64,
    ScalarType.BOOL: TAG_BOOL,
}

_TYPE_FOR_TAG = {tag: ty for ty, tag in _TAG_FOR_TYPE.items()}


def wrap_int64(value: int) -> int:
    """Reduce an integer into two's-complement 64-bit range."""
    return (value - _INT64_MIN) % 2**64 + _INT64_MIN


@dataclass(frozen=True, slots=True)
class Value:
    """A typed scalar. payload is None for unit, int, float, or bool."""

    type: ScalarType
    payload: int | float | bool | None

    def __post_init__(self) -> None:
        if self.type is ScalarType.UNIT:
            assert self.payload is None
        elif self.type is ScalarType.INT64:
            assert type(self.payload) is int
            assert _INT64_MIN <= self.payload <= _INT64_MAX
        elif self.type is ScalarType.FLOAT64:
            assert type(self.payload) is float
        elif self.type is ScalarType.BOOL:
            assert type(self.payload) is bool

    @property
    def tag(self) -> int:
        return _TAG_FOR_TYPE[self.type]


UNIT = Value(ScalarType.UNIT, None)


def int64(value: int) -> Value:
    return Value(ScalarType.INT64, wrap_int64(value))


def float64(value: float) -> Value:
    return Value(ScalarType.FLOAT64, float(value))


def boolean(value: bool) -> Value:
    return Value(ScalarType.BOOL, bool(value))


def encode_cell(value: Value) -> bytes:
    """Pack a value into its 9-byte cell."""
    if value.type is ScalarType.UNIT:
        return struct.pack("<Bq", TAG_UNIT, 0)
    if value.type is ScalarType.INT64:
        return struct.pack("<Bq", TAG_INT64, value.payload)
    if value.type is ScalarType.FLOAT64:
        return struct.pack("<Bd", TAG_FLOAT64, value.payload)
    return struct.pack("<Bq", TAG_BOOL, 1 if value.payload else 0)


def decode_cell(cell: bytes) -> Value:
    """Unpack a 9-byte cell; rejects malformed cells loudly."""
    if len(cell) != CELL_SIZE:
        raise ValueError(f"value cell must be {CELL_SIZE} bytes, got {len(cell)}")
    tag = cell[0]
    if tag not in _TYPE_FOR_TAG:
        raise ValueError(f"unknown value tag {tag}")
    if tag == TAG_UNIT:
        if cell[1:] != b"\x00" * 8:
            raise ValueError("unit cell payload must be zero")
        return UNIT
    if tag == TAG_INT64:
        return Value(ScalarType.INT64, struct.unpack("<q", cell[1:])[0])
    if tag == TAG_FLOAT64:
        return Value(ScalarType.FLOAT64, struct.unpack("<d", cell[1:])[0])
    payload = struct.unpack("<q", cell[1:])[0]
    if payload not in (0, 1):
        raise ValueError(f"bool cell payload must be 0 or 1, got {payload}")
    return Value(ScalarType.BOOL, payload == 1)
