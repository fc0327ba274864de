"""Parser: structure, precedence, and syntax diagnostics."""

from errbridge.idl.ast import (
    Binary,
    BoolLit,
    FloatCast,
    FloatLit,
    If,
    IntLit,
    ParamRef,
    Return,
    ScalarType,
    Throw,
)
from errbridge.idl.parser import parse


def parse_ok(source: str):
    module, diagnostics = parse(source)
    assert module is not None, [d.render("<test>") for d in diagnostics]
    assert diagnostics == []
    return module


def first_error(source: str):
    module, diagnostics = parse(source)
    assert module is None
    assert len(diagnostics) == 1
    return diagnostics[0]


def test_module_with_enum_and_function(division_source):
    module = parse_ok(division_source)
    assert module.name == "Functions"
    assert [e.name for e in module.enums] == ["DivByZero"]
    assert module.enums[0].cases == ["divisorIsZero", "bothAreZero"]
    fn = module.functions[0]
    assert fn.name == "division"
    assert [(p.name, p.type) for p in fn.params] == [
        ("a", ScalarType.INT64),
        ("b", ScalarType.INT64),
    ]
    assert fn.returns is ScalarType.FLOAT64
    assert fn.throws is True


def test_no_return_clause_means_unit():
    module = parse_ok("module M\nfunc f() {\n}")
    assert module.functions[0].returns is ScalarType.UNIT
    assert module.functions[0].throws is False


def test_throw_statement_shape():
    module = parse_ok(
        "module M\n"
        "enum E : Error { case bad }\n"
        "func f() throws {\n"
        "    throw E.bad\n"
        "}"
    )
    stmt = module.functions[0].body[0]
    assert isinstance(stmt, Throw)
    assert (stmt.enum_name, stmt.case_name) == ("E", "bad")


def test_precedence_or_binds_loosest():
    module = parse_ok(
        "module M\n"
        "func f(a: Bool, b: Bool, c: Bool) -> Bool {\n"
        "    return a || b && c\n"
        "}"
    )
    expr = module.functions[0].body[0].value
    assert isinstance(expr, Binary) and expr.op == "||"
    assert isinstance(expr.rhs, Binary) and expr.rhs.op == "&&"


def test_precedence_comparison_over_additive_over_multiplicative():
    module = parse_ok(
        "module M\n"
        "func f(a: Int, b: Int, c: Int) -> Bool {\n"
        "    return a + b * c < a * b + c\n"
        "}"
    )
    expr = module.functions[0].body[0].value
    assert isinstance(expr, Binary) and expr.op == "<"
    lhs, rhs = expr.lhs, expr.rhs
    assert isinstance(lhs, Binary) and lhs.op == "+"
    assert isinstance(lhs.rhs, Binary) and lhs.rhs.op == "*"
    assert isinstance(rhs, Binary) and rhs.op == "+"
    assert isinstance(rhs.lhs, Binary) and rhs.lhs.op == "*"


def test_additive_is_left_associative():
    module = parse_ok("module M\nfunc f(a: Int) -> Int {\n    return a - 1 - 2\n}")
    expr = module.functions[0].body[0].value
    assert expr.op == "-"
    assert isinstance(expr.lhs, Binary) and expr.lhs.op == "-"
    assert isinstance(expr.rhs, IntLit) and expr.rhs.value == 2


def test_parenthesized_expression_overrides_precedence():
    module = parse_ok("module M\nfunc f(a: Int, b: Int) -> Int {\n    return (a + b) * 2\n}")
    expr = module.functions[0].body[0].value
    assert expr.op == "*"
    assert isinstance(expr.lhs, Binary) and expr.lhs.op == "+"


def test_float_cast_and_literals():
    module = parse_ok(
        "module M\n"
        "func f(a: Int) -> Float {\n"
        "    if true {\n"
        "        return Float(a)\n"
        "    }\n"
        "    return 2.5\n"
        "}"
    )
    body = module.functions[0].body
    assert isinstance(body[0], If)
    assert isinstance(body[0].condition, BoolLit)
    inner = body[0].then_body[0].value
    assert isinstance(inner, FloatCast)
    assert isinstance(inner.operand, ParamRef)
    assert isinstance(body[1].value, FloatLit)


def test_else_if_chain_nests_in_else_body():
    module = parse_ok(
        "module M\n"
        "func f(a: Int) -> Int {\n"
        "    if a < 0 {\n"
        "        return 0\n"
        "    } else if a == 0 {\n"
        "        return 1\n"
        "    } else {\n"
        "        return 2\n"
        "    }\n"
        "}"
    )
    outer = module.functions[0].body[0]
    assert isinstance(outer, If)
    assert len(outer.else_body) == 1
    inner = outer.else_body[0]
    assert isinstance(inner, If)
    assert len(inner.else_body) == 1
    assert isinstance(inner.else_body[0], Return)


def test_bare_return_and_optional_semicolons():
    module = parse_ok(
        "module M\n"
        "func f(a: Int) {\n"
        "    if a > 0 {\n"
        "        return;\n"
        "    }\n"
        "    return\n"
        "}"
    )
    body = module.functions[0].body
    assert body[0].then_body[0].value is None
    assert body[1].value is None


def test_missing_brace_is_a_syntax_error():
    diagnostic = first_error("module M\nfunc f() -> Int {\n    return 1\n")
    assert diagnostic.code == "E0002"
    assert "expected" in diagnostic.message


def test_unknown_type_name_is_rejected():
    diagnostic = first_error("module M\nfunc f(a: String) {\n}")
    assert diagnostic.code == "E0002"
    assert "String" in diagnostic.message


def test_enum_base_must_be_error():
    diagnostic = first_error("module M\nenum E : Foo { case a }")
    assert diagnostic.code == "E0002"


def test_general_calls_are_rejected():
    diagnostic = first_error("module M\nfunc f(a: Int) -> Int {\n    return g(a)\n}")
    assert diagnostic.code == "E0002"
    assert "Float(...)" in diagnostic.message


def test_unary_minus_is_not_in_the_grammar():
    diagnostic = first_error("module M\nfunc f() -> Int {\n    return -1\n}")
    assert diagnostic.code == "E0002"


def test_parser_stops_at_the_first_syntax_error():
    _, diagnostics = parse("module M\nfunc f( {\n}\nfunc g( {\n}")
    assert [d.code for d in diagnostics] == ["E0002"]


def test_lexer_errors_and_parser_recovery_together():
    module, diagnostics = parse("module M\nfunc f(a: Int) -> In@t {\n    return a\n}")
    assert module is None
    codes = [d.code for d in diagnostics]
    assert "E0001" in codes


def test_module_is_withheld_when_any_diagnostic_exists():
    module, diagnostics = parse("module M $\nfunc f() {\n}")
    assert diagnostics != []
    assert module is None


def test_division_body_shape(division_source):
    module = parse_ok(division_source)
    body = module.functions[0].body
    assert isinstance(body[0], If)
    guard = body[0].condition
    assert isinstance(guard, Binary) and guard.op == "&&"
    assert isinstance(body[0].then_body[0], Throw)
    assert isinstance(body[2], Return)
    assert isinstance(body[2].value, FloatCast)
    quotient = body[2].value.operand
    assert isinstance(quotient, Binary) and quotient.op == "/"
