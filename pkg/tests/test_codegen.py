"""Generated C++: golden bytes, determinism, and structural rules."""

import re

import pytest

from conftest import GOLDEN_DIR, check_ok, fixture_paths

from errbridge.codegen import (
    GenOptions,
    emit_module_header,
    emit_support_header,
    generate_artifacts,
    manifest_lines,
    registry_filename,
)


@pytest.fixture(scope="module")
def artifacts(division_module):
    return generate_artifacts(division_module)


# -- golden bytes ---------------------------------------------------------------


def test_support_header_matches_golden(artifacts):
    golden = (GOLDEN_DIR / "errbridge_support.h").read_bytes()
    assert artifacts[0].filename == "errbridge_support.h"
    assert artifacts[0].data == golden


def test_module_header_matches_golden(artifacts):
    golden = (GOLDEN_DIR / "Functions.h").read_bytes()
    assert artifacts[1].filename == "Functions.h"
    assert artifacts[1].data == golden


def test_registry_matches_golden(artifacts):
    golden = (GOLDEN_DIR / "functions.ebm").read_bytes()
    assert artifacts[2].filename == "functions.ebm"
    assert artifacts[2].data == golden


# -- determinism ------------------------------------------------------------------


def test_generation_is_deterministic_across_runs(division_module):
    first = generate_artifacts(division_module)
    second = generate_artifacts(division_module)
    assert [(a.filename, a.data) for a in first] == [
        (a.filename, a.data) for a in second
    ]


def test_determinism_holds_for_every_fixture():
    for path in fixture_paths():
        module = check_ok(path.read_text(encoding="utf-8"))
        first = generate_artifacts(module)
        second = generate_artifacts(module)
        assert [(a.filename, a.sha256) for a in first] == [
            (a.filename, a.sha256) for a in second
        ], path.name


def test_manifest_lines_are_sha256_name_pairs(artifacts):
    lines = manifest_lines(artifacts)
    assert len(lines) == 3
    for line, artifact in zip(lines, artifacts):
        digest, name = line.split("  ")
        assert name == artifact.filename
        assert re.fullmatch(r"[0-9a-f]{64}", digest)


# -- naming -----------------------------------------------------------------------


def test_registry_filename_is_lowercase_module_name(division_module):
    assert registry_filename(division_module.name) == "functions.ebm"
    assert registry_filename("MixedCaseName") == "mixedcasename.ebm"


def test_header_filename_preserves_module_case():
    module = check_ok("module MixedCaseName\nfunc f() {\n}")
    names = [a.filename for a in generate_artifacts(module)]
    assert "MixedCaseName.h" in names
    assert "mixedcasename.ebm" in names


# -- structural rules: thunks -------------------------------------------------------


def thunk_body(header: str, name: str) -> str:
    """The text of one generated public thunk."""
    pattern = rf"inline [^\n]*\b{name}\([^)]*\)[^\n]*\{{\n(.*?)\n\}}"
    match = re.search(pattern, header, re.DOTALL)
    assert match is not None, f"thunk {name!r} not found"
    return match.group(0)


THROWING = check_ok(
    "module Shapes\n"
    "enum Fault : Error { case bad }\n"
    "func risky(a: Int) throws -> Int {\n"
    "    if a < 0 {\n        throw Fault.bad\n    }\n    return a\n}\n"
    "func steady(a: Int) -> Int {\n    return a\n}\n"
    "func fire() throws {\n    throw Fault.bad\n}\n"
)

HEADER = emit_module_header(THROWING)


def test_throwing_thunk_has_exactly_one_error_null_check():
    body = thunk_body(HEADER, "risky")
    assert body.count("opaqueError != 0") == 1


def test_throwing_thunk_branches_on_the_exception_mode():
    body = thunk_body(HEADER, "risky")
    assert body.count("#ifdef __cpp_exceptions") == 1
    assert "throw Swift::Error(opaqueError);" in body
    assert "EB_RETURN_THUNK(int64_t, Swift::Error(opaqueError))" in body


def test_throwing_thunk_returns_through_the_mode_macro():
    body = thunk_body(HEADER, "risky")
    assert "return EB_RETURN_THUNK(int64_t, returnValue);" in body


def test_unit_throwing_thunk_uses_the_void_macro():
    body = thunk_body(HEADER, "fire")
    assert "EB_RETURN_VOID_THUNK();" in body
    assert "returnValue" not in body


def test_non_throwing_thunk_is_a_plain_forwarder():
    body = thunk_body(HEADER, "steady")
    assert "noexcept" in body
    assert "opaqueError" not in body
    assert "__cpp_exceptions" not in body
    assert "Swift::Error" not in body
    assert "EB_RETURN" not in body


def test_exception_mode_gate_appears_once_per_throwing_function():
    # One gate in each throwing thunk and none anywhere else in the
    # module header; the support header contributes exactly one more.
    throwing = sum(1 for fn in THROWING.functions if fn.throws)
    assert HEADER.count("#ifdef __cpp_exceptions") == throwing
    support = emit_support_header()
    assert support.count("#ifdef __cpp_exceptions") == 1
    assert support.count("#else") == 1


# -- structural rules: mirrors -------------------------------------------------------


def test_enum_mirror_declares_cases_with_dispatch_indices(artifacts):
    header = artifacts[1].data.decode()
    assert "divisorIsZero = 0," in header
    assert "bothAreZero = 1," in header


def test_enum_mirror_pins_type_hash_and_name(artifacts):
    header = artifacts[1].data.decode()
    from errbridge.runtime import TypeId

    expected = TypeId("Functions", "DivByZero").hash
    assert f"0x{expected:016x}ULL" in header
    assert 'typeName = "Functions::DivByZero"' in header


def test_wrapper_dispatches_by_declaration_index():
    header = emit_module_header(THROWING)
    assert "eb_invoke(moduleId(), 0, args, 1, outError, &ret)" in header
    assert "eb_invoke(moduleId(), 1, args, 1, &unexpectedOutcome, &ret)" in header
    assert "eb_invoke(moduleId(), 2, nullptr, 0, outError, &ret)" in header


# -- options ----------------------------------------------------------------------


def test_namespace_override(division_module):
    header = emit_module_header(division_module, GenOptions(namespace="bridged"))
    assert "namespace bridged {" in header
    assert "}  // namespace bridged" in header


def test_macro_prefix_override(division_module):
    support = emit_support_header(GenOptions(macro_prefix="XY"))
    assert "#define XY_RETURN_THUNK" in support
    header = emit_module_header(division_module, GenOptions(macro_prefix="XY"))
    assert "XY_RETURN_THUNK(double, returnValue)" in header


def test_support_header_name_override(division_module):
    options = GenOptions(support_header_name="bridge_rt.h")
    support = emit_support_header(options)
    assert support.startswith("// bridge_rt.h\n")
    header = emit_module_header(division_module, options)
    assert '#include "bridge_rt.h"' in header
    names = [a.filename for a in generate_artifacts(division_module, options)]
    assert names[0] == "bridge_rt.h"


def test_comment_stripping_keeps_code_intact(division_module):
    bare = emit_module_header(division_module, GenOptions(emit_line_comments=False))
    full = emit_module_header(division_module)
    assert len(bare) < len(full)
    assert "// Mirror of error enum" not in bare
    # The banner and all code survive.
    assert bare.startswith("// Functions.h\n")
    assert "inline Swift::ThrowingResult<double> division" in bare
    assert "opaqueError != 0" in bare


def test_reserved_locals_are_renamed():
    module = check_ok(
        "module Clash\n"
        "enum E : Error { case bad }\n"
        "func f(args: Int, status: Int, opaqueError: Int) throws -> Int {\n"
        "    if args > 0 {\n        throw E.bad\n    }\n"
        "    return status + opaqueError\n"
        "}"
    )
    header = emit_module_header(module)
    assert "int64_t argsParam" in header
    assert "int64_t statusParam" in header
    assert "int64_t opaqueErrorParam" in header
    # The scratch locals keep their own names.
    assert "uint64_t opaqueError = 0;" in header


def test_params_pack_by_tag():
    module = check_ok(
        "module Tags\n"
        "func f(i: Int, x: Float, flag: Bool) -> Bool {\n"
        "    return flag\n"
        "}"
    )
    header = emit_module_header(module)
    assert "args[0].tag = 1;" in header
    assert "args[0].payload.i64 = i;" in header
    assert "args[1].tag = 2;" in header
    assert "args[1].payload.f64 = x;" in header
    assert "args[2].tag = 3;" in header
    assert "args[2].payload.b = flag ? 1 : 0;" in header
