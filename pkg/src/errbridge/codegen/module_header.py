"""Emitter for per-module C++ bridging headers.

For each error enum the header defines a mirror class carrying the
enum's typed cases, its cast identity (type hash and qualified name),
and message accessors. For each function it defines a typed wrapper
over the dispatcher in an _impl namespace plus the public thunk:

  * throwing functions get the dual-mode shape: an error slot, the
    dispatch call, a null check, and one branch per error-handling
    mode behind the __cpp_exceptions gate;
  * non-throwing functions get a plain noexcept forwarder with no
    error slot, no null check, and no mode branches.

C++ has no named arguments, so parameter names in the header are
documentation only; a parameter whose name would collide with one of
the emitted locals is renamed without affecting any call site.
"""

from __future__ import annotations

from ..idl.ast import FunctionDecl, ScalarType
from ..idl.validate import ValidatedModule
from ..runtime.boxes import TypeId
from .options import GenOptions
from .support_header import strip_standalone_comments

__all__ = ["emit_module_header", "registry_filename"]

_CXX_TYPE = {
    ScalarType.INT64: "int64_t",
    ScalarType.FLOAT64: "double",
    ScalarType.BOOL: "bool",
    ScalarType.UNIT: "void",
}

_TAG = {
    ScalarType.INT64: 1,
    ScalarType.FLOAT64: 2,
    ScalarType.BOOL: 3,
}

# Locals introduced inside emitted wrappers and thunks. A parameter
# with one of these names is renamed in the emitted signature.
_RESERVED_LOCALS = {
    "args",
    "ret",
    "status",
    "outError",
    "opaqueError",
    "returnValue",
    "unexpectedOutcome",
}


def registry_filename(module_name: str) -> str:
    """The serialized-module filename consumers load at bootstrap."""
    return module_name.lower() + ".ebm"


def emit_module_header(
    module: ValidatedModule,
    options: GenOptions | None = None,
) -> str:
    """Render the bridging header for a validated module."""
    options = options or GenOptions()
    namespace = options.namespace or module.name
    lines: list[str] = []
    out = lines.append

    out(f"// {module.name}.h")
    out(f"// Generated by errbridge for module '{module.name}'; do not edit.")
    out("#pragma once")
    out("")
    out(f'#include "{options.support_header_name}"')
    out("")
    out(f"namespace {namespace} {{")
    out("")

    for enum in module.enums:
        _emit_enum_mirror(out, module, enum)
        out("")

    out("namespace _impl {")
    out("")
    out("// Register the module registry on first use; the function-local")
    out("// static makes initialization thread-safe.")
    out("inline int64_t moduleId() {")
    out(
        "  static const int64_t id = "
        f'Swift::_support::bootstrapModule("{module.name.lower()}");'
    )
    out("  return id;")
    out("}")
    out("")
    for index, function in enumerate(module.functions):
        _emit_wrapper(out, function, index)
        out("")
    out("}  // namespace _impl")
    out("")

    for function in module.functions:
        _emit_thunk(out, function, options)
        out("")

    out(f"}}  // namespace {namespace}")

    text = "\n".join(lines) + "\n"
    if not options.emit_line_comments:
        text = strip_standalone_comments(text)
    return text


def _emit_enum_mirror(out, module: ValidatedModule, enum) -> None:
    type_id = TypeId(module.name, enum.name)
    out(f"// Mirror of error enum '{enum.name}'.")
    out(f"class {enum.name} {{")
    out(" public:")
    out("  enum Case : int64_t {")
    for index, case in enumerate(enum.cases):
        out(f"    {case} = {index},")
    out("  };")
    out("")
    out("  // Cast identity: matched against the error box by hash, then")
    out("  // by qualified name, so a hash collision cannot cast wrongly.")
    out(f"  static constexpr uint64_t typeHash = 0x{type_id.hash:016x}ULL;")
    out(f'  static constexpr const char* typeName = "{type_id.qualified_name}";')
    out("")
    out(f"  explicit {enum.name}(Case value) : value_(value) {{}}")
    out("")
    out("  Case caseValue() const { return value_; }")
    out("")
    out("  bool operator==(Case other) const { return value_ == other; }")
    out("  bool operator!=(Case other) const { return value_ != other; }")
    out("")
    out("  // The case name.")
    out("  const char* messageText() const {")
    out(f"    static const char* const names[{len(enum.cases)}] = {{")
    for case in enum.cases:
        out(f'        "{case}",')
    out("    };")
    out("    return names[static_cast<int64_t>(value_)];")
    out("  }")
    out("")
    out("  // Print the case name on standard output.")
    out('  void getMessage() const { std::printf("%s\\n", messageText()); }')
    out("")
    out(" private:")
    out(f"  {enum.name}() : value_(static_cast<Case>(0)) {{}}")
    out(f"  friend class Swift::Optional<{enum.name}>;")
    out("")
    out("  Case value_;")
    out("};")


def _param_name(name: str) -> str:
    if name in _RESERVED_LOCALS:
        return name + "Param"
    return name


def _signature_params(function: FunctionDecl) -> str:
    return ", ".join(
        f"{_CXX_TYPE[p.type]} {_param_name(p.name)}" for p in function.params
    )


def _emit_wrapper(out, function: FunctionDecl, index: int) -> None:
    name = function.name
    params = _signature_params(function)
    return_type = _CXX_TYPE[function.returns]

    if function.throws:
        out(f"// Typed bridge to dispatch slot {index}. On a throw the out")
        out("// parameter receives the caller-owned handle and the returned")
        out("// value is meaningless.")
        error_param = "uint64_t* outError"
        signature = f"{params}, {error_param}" if params else error_param
        out(f"inline {return_type} call_{name}({signature}) {{")
    else:
        out(f"// Typed bridge to dispatch slot {index}. The function cannot")
        out("// throw; anything but a plain return is a trap.")
        out(f"inline {return_type} call_{name}({params}) {{")

    argc = len(function.params)
    if argc > 0:
        out(f"  EbValue args[{argc}];")
        for i, param in enumerate(function.params):
            emitted = _param_name(param.name)
            out(f"  args[{i}].tag = {_TAG[param.type]};")
            if param.type is ScalarType.INT64:
                out(f"  args[{i}].payload.i64 = {emitted};")
            elif param.type is ScalarType.FLOAT64:
                out(f"  args[{i}].payload.f64 = {emitted};")
            else:
                out(f"  args[{i}].payload.b = {emitted} ? 1 : 0;")
        args_expr = "args"
    else:
        args_expr = "nullptr"
    out("  EbValue ret;")

    if function.throws:
        out(
            f"  int32_t status = eb_invoke(moduleId(), {index}, {args_expr}, "
            f"{argc}, outError, &ret);"
        )
        out(f'  if (status == 2) Swift::_support::trap("dispatch of \'{name}\' trapped");')
        if function.returns is not ScalarType.UNIT:
            out(f"  if (status == 1) return {return_type}();")
            out(f"  return {_unpack_expr(function.returns)};")
    else:
        out("  uint64_t unexpectedOutcome = 0;")
        out(
            f"  int32_t status = eb_invoke(moduleId(), {index}, {args_expr}, "
            f"{argc}, &unexpectedOutcome, &ret);"
        )
        out(
            f'  if (status != 0) Swift::_support::trap("dispatch of \'{name}\' '
            'did not return");'
        )
        if function.returns is not ScalarType.UNIT:
            out(f"  return {_unpack_expr(function.returns)};")
    out("}")


def _unpack_expr(returns: ScalarType) -> str:
    if returns is ScalarType.INT64:
        return "ret.payload.i64"
    if returns is ScalarType.FLOAT64:
        return "ret.payload.f64"
    return "ret.payload.b != 0"


def _emit_thunk(out, function: FunctionDecl, options: GenOptions) -> None:
    name = function.name
    params = _signature_params(function)
    forwarded = ", ".join(_param_name(p.name) for p in function.params)
    cxx_return = _CXX_TYPE[function.returns]
    prefix = options.macro_prefix

    if not function.throws:
        out(f"// '{name}' cannot throw: no error slot, no mode branches.")
        out(f"inline {cxx_return} {name}({params}) noexcept {{")
        if function.returns is ScalarType.UNIT:
            out(f"  _impl::call_{name}({forwarded});")
        else:
            out(f"  return _impl::call_{name}({forwarded});")
        out("}")
        return

    out(f"// Throwing thunk for '{name}'. A non-null handle after dispatch")
    out("// routes to the active error-handling mode.")
    out(f"inline Swift::ThrowingResult<{cxx_return}> {name}({params}) {{")
    out("  uint64_t opaqueError = 0;")
    call_args = f"{forwarded}, &opaqueError" if forwarded else "&opaqueError"
    if function.returns is ScalarType.UNIT:
        out(f"  _impl::call_{name}({call_args});")
    else:
        out(f"  auto returnValue = _impl::call_{name}({call_args});")
    out("  if (opaqueError != 0) {")
    out("#ifdef __cpp_exceptions")
    out("    throw Swift::Error(opaqueError);")
    out("#else")
    out(f"    return {prefix}_RETURN_THUNK({cxx_return}, Swift::Error(opaqueError));")
    out("#endif")
    out("  }")
    if function.returns is ScalarType.UNIT:
        out(f"  return {prefix}_RETURN_VOID_THUNK();")
    else:
        out(f"  return {prefix}_RETURN_THUNK({cxx_return}, returnValue);")
    out("}")
