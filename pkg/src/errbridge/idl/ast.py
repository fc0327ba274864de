"""Syntax tree for the interface-definition language.

Nodes carry source positions and (after validation) inferred types.
Both are bookkeeping rather than substance, so they are excluded from
equality: two trees with the same shape compare equal regardless of
where they were parsed from. Canonical serialization relies on this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

__all__ = [
    "ScalarType",
    "SURFACE_TYPE_NAMES",
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
]


class ScalarType(Enum):
    INT64 = "Int64"
    FLOAT64 = "Float64"
    BOOL = "Bool"
    UNIT = "Unit"


# Names as written in source. Unit is not spellable; it is the type of
# a function with no return clause.
SURFACE_TYPE_NAMES: dict[str, ScalarType] = {
    "Int": ScalarType.INT64,
    "Float": ScalarType.FLOAT64,
    "Bool": ScalarType.BOOL,
}


@dataclass(slots=True)
class Expr:
    line: int = field(default=0, kw_only=True, compare=False)
    column: int = field(default=0, kw_only=True, compare=False)
    # Filled in by the validator; None until then.
    ty: ScalarType | None = field(default=None, kw_only=True, compare=False)


@dataclass(slots=True)
class IntLit(Expr):
    value: int


@dataclass(slots=True)
class FloatLit(Expr):
    value: float


@dataclass(slots=True)
class BoolLit(Expr):
    value: bool


@dataclass(slots=True)
class ParamRef(Expr):
    name: str


@dataclass(slots=True)
class Binary(Expr):
    op: str  # one of + - * / == != < <= > >= && ||
    lhs: Expr
    rhs: Expr


@dataclass(slots=True)
class FloatCast(Expr):
    operand: Expr


@dataclass(slots=True)
class Stmt:
    line: int = field(default=0, kw_only=True, compare=False)
    column: int = field(default=0, kw_only=True, compare=False)


@dataclass(slots=True)
class If(Stmt):
    condition: Expr
    then_body: list[Stmt]
    else_body: list[Stmt] = field(default_factory=list)


@dataclass(slots=True)
class Return(Stmt):
    value: Expr | None = None


@dataclass(slots=True)
class Throw(Stmt):
    enum_name: str
    case_name: str


@dataclass(frozen=True, slots=True)
class Param:
    name: str
    type: ScalarType
    line: int = field(default=0, kw_only=True, compare=False)
    column: int = field(default=0, kw_only=True, compare=False)


@dataclass(slots=True)
class ErrorEnumDecl:
    name: str
    cases: list[str]
    line: int = field(default=0, kw_only=True, compare=False)
    column: int = field(default=0, kw_only=True, compare=False)

    def case_index(self, case_name: str) -> int | None:
        """Declaration-order index of a case, or None if absent."""
        try:
            return self.cases.index(case_name)
        except ValueError:
            return None


@dataclass(slots=True)
class FunctionDecl:
    name: str
    params: list[Param]
    returns: ScalarType
    throws: bool
    body: list[Stmt]
    line: int = field(default=0, kw_only=True, compare=False)
    column: int = field(default=0, kw_only=True, compare=False)


@dataclass(slots=True)
class InterfaceModule:
    name: str
    enums: list[ErrorEnumDecl]
    functions: list[FunctionDecl]

    def enum(self, name: str) -> ErrorEnumDecl | None:
        for decl in self.enums:
            if decl.name == name:
                return decl
        return None

    def function(self, name: str) -> FunctionDecl | None:
        for decl in self.functions:
            if decl.name == name:
                return decl
        return None

    def function_index(self, name: str) -> int | None:
        """Declaration-order index; this is the dispatch index."""
        for index, decl in enumerate(self.functions):
            if decl.name == name:
                return index
        return None
