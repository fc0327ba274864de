"""Command-line interface.

    errbridge check  <source>                 validate a module
    errbridge gen    <source> --out DIR       emit headers + registry
    errbridge run    <source> <fn> [args...]  evaluate one call
    errbridge test   <source> [--out DIR]     differential test pipeline

Exit codes: 0 success, 1 semantic errors or test failures, 2 usage and
I/O problems, 3 a trapped call.

A ./errbridge.toml can predefine out, namespace, compiler, module_path,
and verbose; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path
from typing import Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]

from . import difftest
from .codegen import GenOptions, generate_artifacts, manifest_lines
from .diagnostics import Diagnostic
from .expected_model import ExpectedModel
from .idl import check_source
from .idl.ast import ScalarType
from .idl.serialize import serialize_module
from .idl.validate import ValidatedModule
from .runtime import (
    STATUS_RETURNED,
    STATUS_THREW,
    STATUS_TRAP,
    EvalTrap,
    Runtime,
    RuntimeTrap,
    eval_function,
)
from .runtime.values import Value, boolean, float64, int64

__all__ = ["main"]

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_IO = 2
EXIT_TRAP = 3

_CONFIG_KEYS = {"out", "namespace", "compiler", "module_path", "verbose"}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config(args)
    try:
        return args.handler(args)
    except RuntimeTrap as trap:
        print(f"trap: {trap}", file=sys.stderr)
        return EXIT_TRAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="errbridge",
        description="Bridge throwing interface modules to dual-mode C++.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse and validate a module source")
    check.add_argument("source", help="module source file")
    check.add_argument("--verbose", action="store_true")
    check.set_defaults(handler=cmd_check)

    gen = sub.add_parser("gen", help="generate headers and the module registry")
    gen.add_argument("source", help="module source file")
    gen.add_argument("--out", help="output directory")
    gen.add_argument("--namespace", help="override the C++ namespace")
    gen.add_argument("--verbose", action="store_true")
    gen.set_defaults(handler=cmd_gen)

    run = sub.add_parser("run", help="evaluate one function call")
    run.add_argument("source", help="module source file")
    run.add_argument("function", help="function to call")
    run.add_argument("args", nargs="*", help="argument literals")
    run.add_argument("--verbose", action="store_true")
    run.set_defaults(handler=cmd_run)

    test = sub.add_parser("test", help="run the differential test pipeline")
    test.add_argument("source", help="module source file")
    test.add_argument("--out", help="working directory for artifacts and binaries")
    test.add_argument("--namespace", help="override the C++ namespace")
    test.add_argument("--compiler", help="C++ compiler to use for compile stages")
    test.add_argument("--module-path", dest="module_path", help="directory consumers load the registry from")
    test.add_argument("--verbose", action="store_true")
    test.set_defaults(handler=cmd_test)

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset options from ./errbridge.toml, if present."""
    path = Path("errbridge.toml")
    if not path.exists():
        return
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"warning: ignoring errbridge.toml: {exc}", file=sys.stderr)
        return
    for key, value in data.items():
        if key not in _CONFIG_KEYS:
            print(f"warning: errbridge.toml: unknown key {key!r}", file=sys.stderr)
            continue
        if not hasattr(args, key):
            continue
        current = getattr(args, key)
        if current is None or current is False:
            setattr(args, key, value)


def _read_source(path_text: str) -> str | None:
    try:
        return Path(path_text).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path_text}: {exc}", file=sys.stderr)
        return None


def _check_file(path_text: str) -> tuple[ValidatedModule | None, int]:
    source = _read_source(path_text)
    if source is None:
        return None, EXIT_IO
    module, diagnostics = check_source(source)
    _print_diagnostics(path_text, diagnostics)
    if module is None:
        return None, EXIT_SEMANTIC
    return module, EXIT_OK


def _print_diagnostics(filename: str, diagnostics: list[Diagnostic]) -> None:
    for diagnostic in diagnostics:
        print(diagnostic.render(filename), file=sys.stderr)


# -- check ----------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    module, status = _check_file(args.source)
    if module is None:
        return status
    if args.verbose:
        print(
            f"{args.source}: module {module.name} "
            f"({len(module.enums)} enums, {len(module.functions)} functions)"
        )
    return EXIT_OK


# -- gen --------------------------------------------------------------------


def _write_all_atomic(out_dir: Path, files: list[tuple[str, bytes]]) -> None:
    """Two-phase write: all temp files first, then all renames.

    A failure while any temp is being written removes the temps and
    leaves the output directory untouched; renames within one
    directory do not fail for content reasons.
    """
    temps: list[tuple[Path, Path]] = []
    try:
        for name, data in files:
            final = out_dir / name
            temp = final.with_name(f".{name}.{os.getpid()}.tmp")
            temp.write_bytes(data)
            temps.append((temp, final))
    except OSError:
        for temp, _ in temps:
            temp.unlink(missing_ok=True)
        raise
    for temp, final in temps:
        os.replace(temp, final)


def cmd_gen(args: argparse.Namespace) -> int:
    module, status = _check_file(args.source)
    if module is None:
        return status
    if not args.out:
        print("error: gen needs --out (or 'out' in errbridge.toml)", file=sys.stderr)
        return EXIT_IO
    options = GenOptions(namespace=args.namespace)
    artifacts = generate_artifacts(module, options)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_all_atomic(out_dir, [(a.filename, a.data) for a in artifacts])
    for line in manifest_lines(artifacts):
        print(line)
    if args.verbose:
        print(f"wrote {len(artifacts)} artifacts to {out_dir}", file=sys.stderr)
    return EXIT_OK


# -- run --------------------------------------------------------------------


def format_value(value: Value) -> str:
    if value.type is ScalarType.INT64:
        return str(value.payload)
    if value.type is ScalarType.FLOAT64:
        return "%g" % value.payload
    if value.type is ScalarType.BOOL:
        return "true" if value.payload else "false"
    return "()"


def _parse_argument(text: str, ty: ScalarType) -> Value | None:
    try:
        if ty is ScalarType.INT64:
            return int64(int(text, 10))
        if ty is ScalarType.FLOAT64:
            return float64(float(text))
        if text == "true":
            return boolean(True)
        if text == "false":
            return boolean(False)
        return None
    except ValueError:
        return None


def cmd_run(args: argparse.Namespace) -> int:
    module, status = _check_file(args.source)
    if module is None:
        return status
    fn_index = module.function_index(args.function)
    if fn_index is None:
        print(
            f"error: module {module.name} has no function {args.function!r}",
            file=sys.stderr,
        )
        return EXIT_IO
    function = module.functions[fn_index]
    if len(args.args) != len(function.params):
        print(
            f"error: {function.name} takes {len(function.params)} arguments, "
            f"got {len(args.args)}",
            file=sys.stderr,
        )
        return EXIT_IO
    values: list[Value] = []
    for text, param in zip(args.args, function.params):
        value = _parse_argument(text, param.type)
        if value is None:
            print(
                f"error: argument {param.name!r} expects "
                f"{param.type.value}, got {text!r}",
                file=sys.stderr,
            )
            return EXIT_IO
        values.append(value)

    runtime = Runtime()
    module_id = runtime.eb_load_module(serialize_module(module))
    result = runtime.eb_invoke(module_id, fn_index, values)
    if result.status == STATUS_TRAP:
        print(f"trap: {result.trap_message}", file=sys.stderr)
        return EXIT_TRAP
    if result.status == STATUS_THREW:
        enum_name = runtime.error_type(result.error).enum_name
        case_name = runtime.error_message_text(result.error)
        print(f"error: {enum_name}.{case_name}")
        runtime.eb_error_release(result.error)
    else:
        assert result.value is not None
        print(f"value: {format_value(result.value)}")
    print(f"live_errors: {runtime.eb_live_errors()}")
    return EXIT_OK


# -- test ---------------------------------------------------------------------


class _Stages:
    """Collects and prints stage results as they happen."""

    def __init__(self) -> None:
        self.failed = False

    def ok(self, name: str, detail: str = "") -> None:
        self._emit(name, "OK", detail)

    def fail(self, name: str, detail: str = "") -> None:
        self.failed = True
        self._emit(name, "FAIL", detail)

    def skip(self, name: str, detail: str = "") -> None:
        self._emit(name, "SKIPPED", detail)

    @staticmethod
    def _emit(name: str, status: str, detail: str) -> None:
        suffix = f" ({detail})" if detail else ""
        print(f"{name}: {status}{suffix}")


def _resolve_compiler(requested: str | None) -> str | None:
    if requested:
        found = shutil.which(requested)
        if found is None:
            print(
                f"warning: compiler {requested!r} not found; "
                "skipping compile stages",
                file=sys.stderr,
            )
        return found
    for candidate in ("clang++", "g++"):
        found = shutil.which(candidate)
        if found is not None:
            return found
    return None


def _differential_stage(module: ValidatedModule, stages: _Stages) -> None:
    """Dispatcher vs evaluator vs container model, over the full grid."""
    runtime = Runtime()
    module_id = runtime.eb_load_module(serialize_module(module))
    calls = 0
    for fn_index, function in enumerate(module.functions):
        for arg_tuple in difftest.argument_grid(function):
            calls += 1
            try:
                expected = eval_function(module, function, arg_tuple)
            except EvalTrap:
                expected = None
            result = runtime.eb_invoke(module_id, fn_index, arg_tuple)
            description = difftest.call_description(function, arg_tuple)
            if expected is None:
                if result.status != STATUS_TRAP:
                    stages.fail(
                        "dispatch-vs-evaluator",
                        f"{description}: evaluator trapped, dispatcher did not",
                    )
                    return
                continue
            if result.status == STATUS_TRAP:
                stages.fail(
                    "dispatch-vs-evaluator",
                    f"{description}: dispatcher trapped: {result.trap_message}",
                )
                return
            actual = runtime.resolve_outcome(result)
            if actual != expected:
                stages.fail(
                    "dispatch-vs-evaluator",
                    f"{description}: {actual} != {expected}",
                )
                return
            if result.status == STATUS_THREW:
                with ExpectedModel.from_error(result.error, runtime) as model:
                    if model.has_value():
                        stages.fail(
                            "dispatch-vs-evaluator",
                            f"{description}: error-holding model claims a value",
                        )
                        return
            else:
                with ExpectedModel.from_value(result.value) as model:
                    if not model.has_value():
                        stages.fail(
                            "dispatch-vs-evaluator",
                            f"{description}: value-holding model claims an error",
                        )
                        return
    leaks = runtime.eb_live_errors()
    if leaks != 0:
        stages.fail("dispatch-vs-evaluator", f"{leaks} error boxes leaked")
        return
    stages.ok("dispatch-vs-evaluator", f"{calls} calls, no leaks")


def _run_compiled(binary: Path, module_path: Path) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    env["ERRBRIDGE_MODULE_PATH"] = str(module_path)
    return subprocess.run(
        [str(binary)],
        capture_output=True,
        text=True,
        env=env,
        timeout=120,
    )


def _compile_stage(
    module: ValidatedModule,
    options: GenOptions,
    out_dir: Path,
    module_path: Path,
    compiler: str,
    stages: _Stages,
    verbose: bool,
) -> None:
    calls = difftest.consumer_calls(module)
    predicted = difftest.predicted_consumer_stdout(calls)
    consumer = out_dir / "difftest_consumer.cpp"
    consumer.write_text(
        difftest.consumer_source(module, calls, options), encoding="utf-8"
    )
    runtime_cpp = difftest.write_runtime_source(out_dir)
    runtime_obj = out_dir / "errbridge_runtime.o"

    def compile_command(cmd: list[str], stage: str) -> bool:
        if verbose:
            print("+ " + " ".join(cmd), file=sys.stderr)
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            stages.fail(stage, proc.stderr.strip().splitlines()[-1] if proc.stderr else "compile failed")
            return False
        return True

    if not compile_command(
        [compiler, "-std=c++17", "-O1", "-c", str(runtime_cpp), "-o", str(runtime_obj)],
        "compile[runtime]",
    ):
        return
    stages.ok("compile[runtime]")

    binaries: dict[str, Path] = {}
    for mode, extra in (("exceptions", []), ("no-exceptions", ["-fno-exceptions"])):
        binary = out_dir / f"difftest_consumer_{mode.replace('-', '_')}"
        cmd = [
            compiler,
            "-std=c++17",
            "-Wall",
            *extra,
            "-I",
            str(out_dir),
            str(consumer),
            str(runtime_obj),
            "-o",
            str(binary),
            "-pthread",
        ]
        if not compile_command(cmd, f"compile[{mode}]"):
            return
        stages.ok(f"compile[{mode}]")
        binaries[mode] = binary

    outputs: dict[str, str] = {}
    for mode, binary in binaries.items():
        proc = _run_compiled(binary, module_path)
        if proc.returncode != 0:
            stages.fail(
                "mode-equivalence",
                f"{mode} consumer exited {proc.returncode}: {proc.stderr.strip()}",
            )
            return
        outputs[mode] = proc.stdout

    if outputs["exceptions"] != outputs["no-exceptions"]:
        stages.fail("mode-equivalence", "stdout differs between modes")
        return
    if outputs["exceptions"] != predicted:
        stages.fail("mode-equivalence", "stdout differs from the evaluator's prediction")
        return
    stages.ok("mode-equivalence", f"{len(calls)} calls, {len(predicted)} bytes")


def cmd_test(args: argparse.Namespace) -> int:
    module, status = _check_file(args.source)
    if module is None:
        return status
    stages = _Stages()
    stages.ok("check", f"module {module.name}")

    out_dir = Path(args.out) if args.out else Path(tempfile.mkdtemp(prefix="errbridge-test-"))
    out_dir.mkdir(parents=True, exist_ok=True)
    options = GenOptions(namespace=args.namespace)
    artifacts = generate_artifacts(module, options)

    stale = [
        artifact.filename
        for artifact in artifacts
        if (out_dir / artifact.filename).exists()
        and (out_dir / artifact.filename).read_bytes() != artifact.data
    ]
    if stale:
        stages.fail("artifact-check", "stale or edited: " + ", ".join(stale))
    else:
        _write_all_atomic(out_dir, [(a.filename, a.data) for a in artifacts])
        stages.ok("gen", f"{len(artifacts)} artifacts in {out_dir}")

    _differential_stage(module, stages)

    compiler = _resolve_compiler(args.compiler)
    if compiler is None:
        for name in ("compile[runtime]", "compile[exceptions]", "compile[no-exceptions]", "mode-equivalence"):
            stages.skip(name, "no C++ compiler found")
        print(
            "warning: compile stages skipped; install clang++ or g++ "
            "(or pass --compiler) for full coverage",
            file=sys.stderr,
        )
    elif not stages.failed:
        module_path = Path(args.module_path) if args.module_path else out_dir
        _compile_stage(module, options, out_dir, module_path, compiler, stages, args.verbose)

    return EXIT_SEMANTIC if stages.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
