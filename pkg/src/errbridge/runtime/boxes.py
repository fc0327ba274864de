"""Error type identity and the refcounted error box.

A thrown error is boxed on the heap side of the dispatch boundary and
handed to the caller as an opaque handle. The box records which enum it
came from (TypeId), which case was thrown, and a message. Reference
counting is manual and exact: every box starts at one, and the runtime
traps on any release of a dead or unknown handle rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["FNV_OFFSET", "FNV_PRIME", "fnv1a_64", "TypeId", "ErrorBox"]

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211


def fnv1a_64(data: bytes) -> int:
    """FNV-1a over the given bytes, reduced to 64 bits."""
    digest = FNV_OFFSET
    for byte in data:
        digest ^= byte
        digest = (digest * FNV_PRIME) % 2**64
    return digest


@dataclass(frozen=True, slots=True)
class TypeId:
    """Identity of an error enum: its qualified name plus a hash.

    The hash is a fast first-pass comparator; casts compare the
    qualified name as well, so a hash collision between two different
    enums can never make a cast succeed.
    """

    module_name: str
    enum_name: str

    @property
    def qualified_name(self) -> str:
        return f"{self.module_name}::{self.enum_name}"

    @property
    def hash(self) -> int:
        return fnv1a_64(self.qualified_name.encode("utf-8"))

    def matches(self, type_hash: int, qualified_name: str) -> bool:
        return self.hash == type_hash and self.qualified_name == qualified_name


@dataclass(slots=True)
class ErrorBox:
    """One live thrown error. refcount is managed by the runtime."""

    type_id: TypeId
    case_index: int
    message: str
    refcount: int = field(default=1)
