"""Differential-test machinery shared by the CLI's test command.

Given a validated module this builds deterministic argument grids,
predicts per-call output lines with the reference evaluator, and emits
a dual-mode C++ consumer whose stdout must match those predictions in
both error-handling modes. Any divergence between the evaluator, the
compiled runtime, and the two thunk modes shows up as a text diff.
"""

from __future__ import annotations

import itertools
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .codegen.options import GenOptions
from .idl.ast import FunctionDecl, ScalarType
from .idl.validate import ValidatedModule
from .runtime.interpreter import EvalTrap, eval_function
from .runtime.values import Value, boolean, float64, int64

__all__ = [
    "argument_grid",
    "call_description",
    "predicted_line",
    "predicted_consumer_stdout",
    "consumer_calls",
    "consumer_source",
    "runtime_source",
    "write_runtime_source",
]

# Fixed pools keep grids deterministic without an RNG. Values stay far
# from the int64 edges so generated C++ literals are unremarkable.
_INT_POOL = (-7, -2, -1, 0, 1, 2, 3, 4, 10)
_FLOAT_POOL = (-2.5, -1.0, -0.0, 0.0, 0.5, 1.0, 2.0, 3.5)
_BOOL_POOL = (False, True)

_GRID_CAP = 200


def _pool(ty: ScalarType) -> tuple:
    if ty is ScalarType.INT64:
        return _INT_POOL
    if ty is ScalarType.FLOAT64:
        return _FLOAT_POOL
    return _BOOL_POOL


def argument_grid(function: FunctionDecl) -> list[tuple[Value, ...]]:
    """Deterministic argument tuples covering the parameter space."""
    if not function.params:
        return [()]
    pools = [_pool(p.type) for p in function.params]
    tuples: list[tuple[Value, ...]] = []
    for raw in itertools.islice(itertools.product(*pools), _GRID_CAP):
        args = []
        for param, item in zip(function.params, raw):
            if param.type is ScalarType.INT64:
                args.append(int64(item))
            elif param.type is ScalarType.FLOAT64:
                args.append(float64(item))
            else:
                args.append(boolean(item))
        tuples.append(tuple(args))
    return tuples


def _cxx_literal(value: Value) -> str:
    if value.type is ScalarType.INT64:
        assert abs(value.payload) < 2**31, "grid values stay small"
        return str(value.payload)
    if value.type is ScalarType.FLOAT64:
        text = repr(value.payload)
        assert "inf" not in text and "nan" not in text, "grid values stay finite"
        return text
    return "true" if value.payload else "false"


def call_description(function: FunctionDecl, args: Sequence[Value]) -> str:
    """The call as it reads in C++, used verbatim in output lines."""
    rendered = ", ".join(_cxx_literal(a) for a in args)
    return f"{function.name}({rendered})"


def _format_result(value: Value) -> str:
    if value.type is ScalarType.INT64:
        return str(value.payload)
    if value.type is ScalarType.FLOAT64:
        return "%g" % value.payload
    if value.type is ScalarType.BOOL:
        return "true" if value.payload else "false"
    return "()"


def predicted_line(
    module: ValidatedModule,
    function: FunctionDecl,
    args: Sequence[Value],
) -> str | None:
    """The stdout line the consumer must print for this call.

    None means the call traps; trapping calls cannot appear in a
    consumer because a trap aborts the whole process.
    """
    try:
        outcome = eval_function(module, function, args)
    except EvalTrap:
        return None
    description = call_description(function, args)
    if outcome.threw:
        thrown = outcome.error
        assert thrown is not None
        return f"{description} threw {thrown.enum_name}.{thrown.case_name}"
    value = outcome.value
    assert value is not None
    if value.type is ScalarType.UNIT:
        return f"{description} returned"
    return f"{description} = {_format_result(value)}"


def consumer_calls(
    module: ValidatedModule,
    per_function: int = 30,
) -> list[tuple[FunctionDecl, tuple[Value, ...], str]]:
    """(function, args, expected line) triples, trapping calls skipped."""
    calls = []
    for function in module.functions:
        taken = 0
        for args in argument_grid(function):
            if taken >= per_function:
                break
            line = predicted_line(module, function, args)
            if line is None:
                continue
            calls.append((function, args, line))
            taken += 1
    return calls


def predicted_consumer_stdout(
    calls: Iterable[tuple[FunctionDecl, tuple[Value, ...], str]],
) -> str:
    return "".join(line + "\n" for _, _, line in calls)


def _print_statement(function: FunctionDecl, description: str, expression: str) -> str:
    returns = function.returns
    if returns is ScalarType.UNIT:
        return f'std::printf("{description} returned\\n");'
    if returns is ScalarType.INT64:
        return f'std::printf("{description} = %lld\\n", (long long)({expression}));'
    if returns is ScalarType.FLOAT64:
        return f'std::printf("{description} = %g\\n", (double)({expression}));'
    return f'std::printf("{description} = %s\\n", ({expression}) ? "true" : "false");'


def consumer_source(
    module: ValidatedModule,
    calls: Sequence[tuple[FunctionDecl, tuple[Value, ...], str]],
    options: GenOptions | None = None,
) -> str:
    """A dual-mode C++ consumer exercising the given calls.

    The same source compiles with and without exceptions; its stdout
    must be byte-identical in both modes and must equal the predicted
    lines. It exits nonzero if any error box is still live at the end.
    """
    options = options or GenOptions()
    namespace = options.namespace or module.name
    lines: list[str] = []
    out = lines.append

    out(f"// Differential consumer for module '{module.name}'; generated, do not edit.")
    out("#include <cstdio>")
    out("")
    out(f'#include "{module.name}.h"')
    out("")
    if any(function.throws for function, _, _ in calls):
        out("static void printThrown(const char* call, const Swift::Error& e) {")
        for enum in module.enums:
            out("  {")
            out(f"    auto matched = e.as<{namespace}::{enum.name}>();")
            out("    if (matched.isSome()) {")
            out(
                f'      std::printf("%s threw {enum.name}.%s\\n", call, '
                "matched.get().messageText());"
            )
            out("      return;")
            out("    }")
            out("  }")
        out('  std::printf("%s threw an unrecognized error\\n", call);')
        out("}")
        out("")
    out("int main() {")

    for function, args, _ in calls:
        description = call_description(function, args)
        rendered_args = ", ".join(_cxx_literal(a) for a in args)
        call_expr = f"{namespace}::{function.name}({rendered_args})"
        if not function.throws:
            out("  {")
            if function.returns is ScalarType.UNIT:
                out(f"    {call_expr};")
                out(f'    std::printf("{description} returned\\n");')
            else:
                out(f"    auto plainValue = {call_expr};")
                out("    " + _print_statement(function, description, "plainValue"))
            out("  }")
            continue
        out("#ifdef __cpp_exceptions")
        out("  try {")
        if function.returns is ScalarType.UNIT:
            out(f"    {call_expr};")
            out(f'    std::printf("{description} returned\\n");')
        else:
            out(f"    auto plainValue = {call_expr};")
            out("    " + _print_statement(function, description, "plainValue"))
        out("  } catch (Swift::Error& e) {")
        out(f'    printThrown("{description}", e);')
        out("  }")
        out("#else")
        out("  {")
        out(f"    auto result = {call_expr};")
        out("    if (result.has_value()) {")
        if function.returns is ScalarType.UNIT:
            out(f'      std::printf("{description} returned\\n");')
        else:
            out("      " + _print_statement(function, description, "result.value()"))
        out("    } else {")
        out(f'      printThrown("{description}", result.error());')
        out("    }")
        out("  }")
        out("#endif")

    out("")
    out("  if (eb_live_errors() != 0) {")
    out(
        '    std::fprintf(stderr, "leak: %llu live error boxes\\n",'
        " (unsigned long long)eb_live_errors());"
    )
    out("    return 1;")
    out("  }")
    out("  return 0;")
    out("}")
    return "\n".join(lines) + "\n"


def runtime_source() -> str:
    """The bundled C++ runtime implementation of the ABI."""
    return (
        resources.files("errbridge")
        .joinpath("_cxx/errbridge_runtime.cpp")
        .read_text(encoding="utf-8")
    )


def write_runtime_source(directory: Path | str) -> Path:
    """Copy the bundled runtime source into a build directory."""
    target = Path(directory) / "errbridge_runtime.cpp"
    target.write_text(runtime_source(), encoding="utf-8")
    return target
