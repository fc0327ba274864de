"""Acceptance gate: one test (and one printed verdict line) per criterion.

Every criterion here runs without a C++ compiler; compile coverage
lives in the `errbridge test` pipeline and the consumer harness.
"""

import random
import subprocess
import sys
import time

from conftest import DIVISION_FIXTURE, GOLDEN_DIR, check_ok, fixture_paths

from errbridge.codegen import generate_artifacts
from errbridge.difftest import argument_grid
from errbridge.expected_model import ExpectedModel, ModelTrap
from errbridge.idl.serialize import serialize_module
from errbridge.runtime import (
    STATUS_RETURNED,
    STATUS_THREW,
    STATUS_TRAP,
    EvalTrap,
    Runtime,
    RuntimeTrap,
    TypeId,
    eval_function,
    float64,
    int64,
)

BAD_SOURCE = "module Bad\nfunc f(a: Int) -> Int {\n    return b\n}\n"


def verdict(name: str, problems: list[str], detail: str = "") -> None:
    status = "FAIL" if problems else "PASS"
    suffix = f" ({detail})" if detail else ""
    print(f"acceptance[{name}]: {status}{suffix}")
    assert not problems, f"{name}: " + "; ".join(problems)


def test_interpreter_division_fixtures(division_module):
    problems: list[str] = []
    started = time.perf_counter()

    def call(a: int, b: int):
        return eval_function(
            division_module, division_module.functions[0], [int64(a), int64(b)]
        )

    zero_zero = call(0, 0)
    if not (zero_zero.threw and zero_zero.error.case_name == "bothAreZero"):
        problems.append(f"division(0, 0) gave {zero_zero}")
    one_zero = call(1, 0)
    if not (one_zero.threw and one_zero.error.case_name == "divisorIsZero"):
        problems.append(f"division(1, 0) gave {one_zero}")
    four_two = call(4, 2)
    if not (four_two.returned and four_two.value == float64(2.0)):
        problems.append(f"division(4, 2) gave {four_two}")

    elapsed = time.perf_counter() - started
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.3f}s, budget 1s")
    verdict("interpreter-fixtures", problems, f"{elapsed * 1000:.0f}ms")


def test_golden_headers_byte_identical_and_structurally_sound(division_module):
    problems: list[str] = []
    artifacts = generate_artifacts(division_module)
    by_name = {a.filename: a.data for a in artifacts}

    for name in ("errbridge_support.h", "Functions.h", "functions.ebm"):
        golden = (GOLDEN_DIR / name).read_bytes()
        if by_name.get(name) != golden:
            problems.append(f"{name} differs from its golden")

    support = by_name["errbridge_support.h"].decode()
    # The mode gate must define both alias branches.
    if support.count("#ifdef __cpp_exceptions") != 1:
        problems.append("support header needs exactly one mode gate")
    if "using ThrowingResult = T;" not in support:
        problems.append("gate lacks the exceptions-mode alias")
    if "using ThrowingResult = Swift::Expected<T>;" not in support:
        problems.append("gate lacks the expected-mode alias")

    header = by_name["Functions.h"].decode()
    # The throwing thunk checks its error slot once and branches per mode.
    if header.count("if (opaqueError != 0) {") != 1:
        problems.append("throwing thunk needs exactly one error null-check")
    if header.count("#ifdef __cpp_exceptions") != 1:
        problems.append("throwing thunk needs exactly one mode branch")
    if "throw Swift::Error(opaqueError);" not in header:
        problems.append("thunk lacks the exceptions-mode branch")
    if "EB_RETURN_THUNK(double, Swift::Error(opaqueError))" not in header:
        problems.append("thunk lacks the expected-mode branch")

    verdict("golden-headers", problems)


def test_lifetime_property_suite(division_module):
    problems: list[str] = []
    started = time.perf_counter()
    rng = random.Random(0xEB)
    runtime = Runtime()
    module_id = runtime.eb_load_module(serialize_module(division_module))
    type_id = TypeId("Functions", "DivByZero")
    sequences = 1000

    try:
        for _ in range(sequences):
            result = runtime.eb_invoke(module_id, 0, [int64(1), int64(0)])
            handle = result.error
            owned = 1
            models: list[ExpectedModel] = []
            for _ in range(rng.randint(0, 12)):
                op = rng.randrange(4)
                free = owned - len(models)
                if op == 0:
                    runtime.eb_error_retain(handle)
                    owned += 1
                elif op == 1 and free > 1:
                    # Only a reference no model owns may be released here.
                    runtime.eb_error_release(handle)
                    owned -= 1
                elif op == 2:
                    before = runtime.refcount(handle)
                    runtime.eb_error_dyncast(
                        handle, type_id.hash, type_id.qualified_name
                    )
                    runtime.eb_error_dyncast(handle, 1, "Functions::None")
                    if runtime.refcount(handle) != before:
                        problems.append("dyncast perturbed a refcount")
                elif op == 3:
                    runtime.eb_error_retain(handle)
                    owned += 1
                    models.append(ExpectedModel.from_error(handle, runtime))
            if runtime.refcount(handle) != owned:
                problems.append(
                    f"refcount {runtime.refcount(handle)} != owned {owned}"
                )
            for model in models:
                model.destroy()
                owned -= 1
            for _ in range(owned):
                runtime.eb_error_release(handle)
            if problems:
                break
    except (RuntimeTrap, ModelTrap) as trap:
        problems.append(f"trapped: {trap}")

    live = runtime.eb_live_errors()
    if live != 0:
        problems.append(f"{live} error boxes still live")
    elapsed = time.perf_counter() - started
    if elapsed >= 5.0:
        problems.append(f"took {elapsed:.3f}s, budget 5s")
    verdict(
        "lifetime-properties",
        problems,
        f"{sequences} sequences, {elapsed * 1000:.0f}ms",
    )


def test_oracle_equivalence_over_the_fixture_corpus():
    problems: list[str] = []
    paths = fixture_paths()
    if len(paths) < 10:
        problems.append(f"corpus has {len(paths)} modules, need at least 10")

    total_calls = 0
    for path in paths:
        module = check_ok(path.read_text(encoding="utf-8"))
        runtime = Runtime()
        module_id = runtime.eb_load_module(serialize_module(module))
        module_calls = 0
        for index, function in enumerate(module.functions):
            for args in argument_grid(function):
                module_calls += 1
                try:
                    expected = eval_function(module, function, list(args))
                except EvalTrap:
                    expected = None
                result = runtime.eb_invoke(module_id, index, list(args))
                where = f"{path.stem}:{function.name}{tuple(a.payload for a in args)}"

                if expected is None:
                    if result.status != STATUS_TRAP:
                        problems.append(f"{where}: only the evaluator trapped")
                    continue
                if result.status == STATUS_TRAP:
                    problems.append(f"{where}: only the dispatcher trapped")
                    continue
                actual = runtime.resolve_outcome(result)
                if actual != expected:
                    problems.append(f"{where}: {actual} != {expected}")

                # Exclusivity: exactly one alternative, and reading the
                # other one traps.
                if result.status == STATUS_THREW:
                    model = ExpectedModel.from_error(result.error, runtime)
                    ok = not model.has_value() and model.error() == result.error
                    try:
                        model.value()
                        ok = False
                    except ModelTrap:
                        pass
                    model.destroy()
                else:
                    model = ExpectedModel.from_value(result.value)
                    ok = model.has_value() and model.value() == result.value
                    try:
                        model.error()
                        ok = False
                    except ModelTrap:
                        pass
                    model.destroy()
                if not ok:
                    problems.append(f"{where}: exclusivity violated")
                if problems:
                    break
            if problems:
                break
        if module_calls < 50:
            problems.append(f"{path.stem}: grid has {module_calls} tuples, need 50")
        if runtime.eb_live_errors() != 0:
            problems.append(f"{path.stem}: leaked error boxes")
        total_calls += module_calls
        if problems:
            break
    verdict(
        "oracle-equivalence",
        problems,
        f"{len(paths)} modules, {total_calls} calls",
    )


def test_cli_contract(tmp_path):
    problems: list[str] = []

    def cli(*argv):
        return subprocess.run(
            [sys.executable, "-m", "errbridge", *map(str, argv)],
            capture_output=True,
            text=True,
            timeout=600,
        )

    def expect(label: str, condition: bool) -> None:
        if not condition:
            problems.append(label)

    bad = tmp_path / "bad.eb"
    bad.write_text(BAD_SOURCE)
    trap_source = tmp_path / "t.eb"
    trap_source.write_text(
        "module T\nfunc div(a: Int, b: Int) -> Int {\n    return a / b\n}\n"
    )

    expect("check ok exits 0", cli("check", DIVISION_FIXTURE).returncode == 0)
    check_bad = cli("check", bad)
    expect("check bad exits 1", check_bad.returncode == 1)
    expect("diagnostic names the code", "E0005" in check_bad.stderr)
    expect("check missing exits 2", cli("check", tmp_path / "no.eb").returncode == 2)

    out_a = tmp_path / "a"
    gen_a = cli("gen", DIVISION_FIXTURE, "--out", out_a)
    expect("gen ok exits 0", gen_a.returncode == 0)
    expect(
        "gen prints one manifest line per artifact",
        len(gen_a.stdout.splitlines()) == 3,
    )
    expect(
        "gen writes the artifacts",
        all(
            (out_a / name).exists()
            for name in ("errbridge_support.h", "Functions.h", "functions.ebm")
        ),
    )

    out_b = tmp_path / "b"
    gen_b = cli("gen", DIVISION_FIXTURE, "--out", out_b)
    expect("gen is deterministic across runs", gen_a.stdout == gen_b.stdout)
    expect(
        "gen bytes are identical across runs",
        all(
            (out_a / name).read_bytes() == (out_b / name).read_bytes()
            for name in ("errbridge_support.h", "Functions.h", "functions.ebm")
        ),
    )

    out_bad = tmp_path / "never"
    gen_bad = cli("gen", bad, "--out", out_bad)
    expect("gen on a bad module exits 1", gen_bad.returncode == 1)
    expect("gen on a bad module writes nothing", not out_bad.exists())

    run_value = cli("run", DIVISION_FIXTURE, "division", "4", "2")
    expect("run value exits 0", run_value.returncode == 0)
    expect(
        "run prints the value and leak count",
        run_value.stdout == "value: 2\nlive_errors: 0\n",
    )
    run_throw = cli("run", DIVISION_FIXTURE, "division", "1", "0")
    expect("run throw exits 0", run_throw.returncode == 0)
    expect(
        "run prints the thrown case and leak count",
        run_throw.stdout == "error: DivByZero.divisorIsZero\nlive_errors: 0\n",
    )
    expect("run trap exits 3", cli("run", trap_source, "div", "1", "0").returncode == 3)
    expect("run usage error exits 2", cli("run", DIVISION_FIXTURE, "division").returncode == 2)

    verdict("cli-contract", problems)
