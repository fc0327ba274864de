// Generates consumer programs over a module's function list.
//
// For every function in a generated module the planner probes a small
// argument grid through `errbridge run`, keeps the calls that return
// or throw (trapping tuples would abort a consumer, so they are left
// out), and emits a dual-mode C++ program printing one line per call.
// The oracle's answers become the program's expected stdout, which
// ties the compiled dispatch path back to the evaluator through two
// independent interfaces.

import { FunctionSig, GeneratedModule, ScalarType } from "./generate.js";
import { capture, Toolchain } from "./toolchain.js";

// Literal tokens usable both as CLI arguments and as C++ expressions.
const INT_POOL = ["0", "1", "2", "-3", "7"];
const FLOAT_POOL = ["0.0", "1.0", "2.0", "-3.0"];
const BOOL_POOL = ["true", "false"];
const CALLS_PER_FUNCTION = 6;

export type Outcome =
  | { kind: "value"; text: string }
  | { kind: "error"; text: string }
  | { kind: "trap" };

export interface PlannedCall {
  fn: FunctionSig;
  args: string[];
  /** Call rendering shared by the program and its expected output. */
  display: string;
  expectedLine: string;
}

function poolFor(type: ScalarType): string[] {
  switch (type) {
    case "Int64":
      return INT_POOL;
    case "Float64":
      return FLOAT_POOL;
    case "Bool":
      return BOOL_POOL;
    default:
      throw new Error(`no argument pool for parameter type ${type}`);
  }
}

/** Takes up to `cap` evenly spaced elements, deterministically. */
function spread<T>(all: T[], cap: number): T[] {
  if (all.length <= cap) {
    return all;
  }
  const step = Math.floor(all.length / cap);
  return Array.from({ length: cap }, (_, i) => all[i * step]);
}

function argumentGrid(fn: FunctionSig): string[][] {
  let tuples: string[][] = [[]];
  for (const param of fn.params) {
    const pool = poolFor(param.type);
    tuples = tuples.flatMap((prefix) => pool.map((v) => [...prefix, v]));
  }
  return spread(tuples, CALLS_PER_FUNCTION);
}

/** Asks the evaluator for one call's outcome. */
export function oracleCall(
  tc: Toolchain,
  moduleFile: string,
  fn: string,
  args: string[],
): Outcome {
  const result = capture([...tc.errbridge, "run", moduleFile, fn, ...args], {
    env: tc.env,
  });
  if (result.status === 3) {
    return { kind: "trap" };
  }
  if (result.status !== 0) {
    throw new Error(
      `oracle call ${fn}(${args.join(", ")}) failed (exit ${result.status}):\n` +
        result.stdout +
        result.stderr,
    );
  }
  const first = result.stdout.split("\n", 1)[0];
  if (first.startsWith("value: ")) {
    return { kind: "value", text: first.slice("value: ".length) };
  }
  if (first.startsWith("error: ")) {
    return { kind: "error", text: first.slice("error: ".length) };
  }
  throw new Error(`unrecognized oracle output: ${first}`);
}

/**
 * Reformats an oracle float to exactly one decimal place. The grids
 * only produce values that are multiples of one half, which render
 * identically under C's %.1f and this conversion; anything finer
 * would round and is rejected rather than guessed at.
 */
function fixedOneDecimal(text: string): string {
  const value = Number(text);
  if (!Number.isFinite(value)) {
    throw new Error(`not a finite float: ${text}`);
  }
  if (value === 0) {
    return "0.0";
  }
  if (!Number.isInteger(value * 2)) {
    throw new Error(`${text} is not exact at one decimal place`);
  }
  return value.toFixed(1);
}

function lineFor(display: string, fn: FunctionSig, outcome: Outcome): string {
  if (outcome.kind === "trap") {
    throw new Error(`trapping call ${display} cannot appear in a consumer`);
  }
  if (outcome.kind === "error") {
    return `${display} threw ${outcome.text}`;
  }
  switch (fn.returns) {
    case "Unit":
      return `${display} returned`;
    case "Float64":
      return `${display} = ${fixedOneDecimal(outcome.text)}`;
    default:
      // Int64 digits and Bool true/false print verbatim on both sides.
      return `${display} = ${outcome.text}`;
  }
}

/** Probes the grid for every function and keeps the printable calls. */
export function planCalls(
  tc: Toolchain,
  moduleFile: string,
  module: GeneratedModule,
): PlannedCall[] {
  const calls: PlannedCall[] = [];
  for (const fn of module.functions) {
    for (const args of argumentGrid(fn)) {
      const outcome = oracleCall(tc, moduleFile, fn.name, args);
      if (outcome.kind === "trap") {
        continue;
      }
      const display = `${fn.name}(${args.join(", ")})`;
      calls.push({ fn, args, display, expectedLine: lineFor(display, fn, outcome) });
    }
  }
  return calls;
}

export function expectedStdout(calls: PlannedCall[]): string {
  return calls.map((call) => `${call.expectedLine}\n`).join("");
}

function valuePrint(display: string, fn: FunctionSig, expr: string): string[] {
  switch (fn.returns) {
    case "Int64":
      return [`printf("${display} = %lld\\n", (long long)(${expr}));`];
    case "Float64":
      return [`printf("${display} = %.1f\\n", plusZero(${expr}));`];
    case "Bool":
      return [`printf("${display} = %s\\n", (${expr}) ? "true" : "false");`];
    case "Unit":
      return [`${expr};`, `printf("${display} returned\\n");`];
  }
}

function probeBlock(module: GeneratedModule, call: PlannedCall): string[] {
  const callExpr = `${module.name}::${call.fn.name}(${call.args.join(", ")})`;
  const lines: string[] = [];
  if (!call.fn.throws) {
    // Non-throwing thunks return the plain value in both modes.
    lines.push("    {");
    for (const stmt of valuePrint(call.display, call.fn, callExpr)) {
      lines.push(`        ${stmt}`);
    }
    lines.push("    }");
    return lines;
  }

  lines.push("#ifdef __cpp_exceptions");
  lines.push("    try {");
  if (call.fn.returns === "Unit") {
    lines.push(`        ${callExpr};`);
    lines.push(`        printf("${call.display} returned\\n");`);
  } else {
    for (const stmt of valuePrint(call.display, call.fn, callExpr)) {
      lines.push(`        ${stmt}`);
    }
  }
  lines.push("    } catch (Swift::Error& e) {");
  lines.push(`        printf("${call.display} threw ");`);
  lines.push("        describeThrown(e);");
  lines.push("    }");
  lines.push("#else");
  lines.push("    {");
  lines.push(`        auto result = ${callExpr};`);
  lines.push("        if (result.has_value()) {");
  if (call.fn.returns === "Unit") {
    lines.push(`            printf("${call.display} returned\\n");`);
  } else {
    for (const stmt of valuePrint(call.display, call.fn, "result.value()")) {
      lines.push(`            ${stmt}`);
    }
  }
  lines.push("        } else {");
  lines.push(`            printf("${call.display} threw ");`);
  lines.push("            describeThrown(result.error());");
  lines.push("        }");
  lines.push("    }");
  lines.push("#endif");
  return lines;
}

/** Emits the dual-mode consumer program for the planned calls. */
export function consumerSource(
  module: GeneratedModule,
  calls: PlannedCall[],
): string {
  const usesFloat = calls.some((c) => c.fn.returns === "Float64");
  const usesThrow = calls.some((c) => c.fn.throws);

  const lines: string[] = [
    `// Generated consumer for module '${module.name}'; prints one line`,
    "// per probed call, identical in both build modes.",
    "#include <cstdint>",
    "#include <cstdio>",
    "",
    `#include "${module.headerName}"`,
    "",
    "namespace {",
    "",
  ];
  if (usesFloat) {
    lines.push(
      "// Fold negative zero so the printed text depends only on value.",
      "double plusZero(double value) { return value == 0.0 ? 0.0 : value; }",
      "",
    );
  }
  if (usesThrow) {
    lines.push("void describeThrown(const Swift::Error& e) {");
    for (const enumName of module.enums) {
      lines.push(
        "    {",
        `        auto typed = e.as<${module.name}::${enumName}>();`,
        "        if (typed.isSome()) {",
        `            printf("${enumName}.%s\\n", typed.get().messageText());`,
        "            return;",
        "        }",
        "    }",
      );
    }
    lines.push('    printf("an unrecognized error\\n");', "}", "");
  }
  lines.push("}  // namespace", "", "int main() {");
  for (const call of calls) {
    lines.push(...probeBlock(module, call));
  }
  lines.push(
    "",
    "    if (eb_live_errors() != 0) {",
    '        fprintf(stderr, "live error boxes at exit: %llu\\n",',
    "                (unsigned long long)eb_live_errors());",
    "        return 1;",
    "    }",
    "    return 0;",
    "}",
    "",
  );
  return lines.join("\n");
}
