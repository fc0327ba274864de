// Orchestrates the full consumer matrix: generate, build in each
// mode, run, compare stdout, and report.

import * as fs from "node:fs";
import * as path from "node:path";

import { buildConsumer } from "./build.js";
import { compileRuntime, generateModule, GeneratedModule } from "./generate.js";
import { CaseLog, writeReports } from "./report.js";
import { runConsumer } from "./run.js";
import { packageRoot, resolveToolchain, Toolchain } from "./toolchain.js";
import {
  CaseReport,
  HarnessResult,
  Mode,
  RunResult,
  Scenario,
} from "./types.js";
import { consumerSource, expectedStdout, planCalls } from "./variants.js";

const MODULES_DIR = path.join(packageRoot, "modules");
const CONSUMERS_DIR = path.join(packageRoot, "consumers");
const BUILD_DIR = path.join(packageRoot, "build");
const REPORTS_DIR = path.join(packageRoot, "reports");

const DUAL_DIVISION_STDOUT = [
  "division(0, 0) threw DivByZero.bothAreZero",
  "division(1, 0) threw DivByZero.divisorIsZero",
  "division(4, 2) = 2.0",
  "division(-7, 2) = -3.0",
  "division(9, 4) = 2.0",
]
  .map((line) => `${line}\n`)
  .join("");

/** The checked-in consumers and their pinned stdout. */
function checkedInScenarios(): Scenario[] {
  return [
    {
      name: "catch-division",
      moduleFile: path.join(MODULES_DIR, "functions.eb"),
      consumerSource: path.join(CONSUMERS_DIR, "catch_division.cpp"),
      expectedStdout: "bothAreZero\nresult = 2.0\n",
      modes: "exceptions",
    },
    {
      name: "expected-division",
      moduleFile: path.join(MODULES_DIR, "functions.eb"),
      consumerSource: path.join(CONSUMERS_DIR, "expected_division.cpp"),
      expectedStdout: "divisorIsZero\nresult = 2.0\n",
      modes: "no-exceptions",
    },
    {
      name: "dual-division",
      moduleFile: path.join(MODULES_DIR, "functions.eb"),
      consumerSource: path.join(CONSUMERS_DIR, "dual_division.cpp"),
      expectedStdout: DUAL_DIVISION_STDOUT,
      modes: "both",
    },
    {
      name: "stress-shared-error",
      moduleFile: path.join(MODULES_DIR, "functions.eb"),
      consumerSource: path.join(CONSUMERS_DIR, "stress_shared_error.cpp"),
      expectedStdout: "stress done\n",
      modes: "both",
    },
  ];
}

/** Module files that get a generated consumer variant. */
const VARIANT_MODULES = ["arith.eb", "unitops.eb", "mixed.eb"];

const NEGATIVE_CASE_ID = "negative-compile[catch-division]";

function modesOf(scenario: Pick<Scenario, "modes">): Mode[] {
  return scenario.modes === "both"
    ? ["exceptions", "no-exceptions"]
    : [scenario.modes];
}

function caseIds(scenario: Pick<Scenario, "name" | "modes">): string[] {
  const ids = modesOf(scenario).map((mode) => `${scenario.name}[${mode}]`);
  if (scenario.modes === "both") {
    ids.push(`${scenario.name}[mode-equivalence]`);
  }
  return ids;
}

function firstDifference(expected: string, actual: string): string {
  const e = expected.split("\n");
  const a = actual.split("\n");
  const rows = Math.max(e.length, a.length);
  for (let i = 0; i < rows; i++) {
    if (e[i] !== a[i]) {
      const want = i < e.length ? JSON.stringify(e[i]) : "<missing>";
      const got = i < a.length ? JSON.stringify(a[i]) : "<missing>";
      return `line ${i + 1}: expected ${want}, got ${got}`;
    }
  }
  return "outputs are identical";
}

function tail(text: string, lines = 20): string {
  const rows = text.trimEnd().split("\n");
  return rows.slice(-lines).join("\n");
}

interface Execution {
  cases: CaseReport[];
  runs: RunResult[];
  logs: CaseLog[];
}

/** Builds and runs one scenario in one mode, recording the outcome. */
function executeScenarioMode(
  tc: Toolchain,
  scenario: Scenario,
  mode: Mode,
  genDir: string,
  runtimeObject: string,
  into: Execution,
): RunResult | null {
  const id = `${scenario.name}[${mode}]`;
  const started = Date.now();
  const finish = (status: CaseReport["status"], detail?: string) => {
    into.cases.push({
      id,
      status,
      timeSeconds: (Date.now() - started) / 1000,
      detail,
    });
  };

  const build = buildConsumer(
    tc,
    scenario.consumerSource,
    mode,
    genDir,
    runtimeObject,
    BUILD_DIR,
    scenario.name,
  );
  const logLines = [
    `case: ${id}`,
    `consumer: ${scenario.consumerSource}`,
    `compile: ${build.command.join(" ")}`,
    build.log.trim() ? `compiler output:\n${build.log}` : "compiler output: (clean)",
  ];

  if (!build.ok) {
    logLines.push("build failed; not run");
    into.logs.push({ id, text: `${logLines.join("\n")}\n` });
    finish("failed", `compile failed:\n${tail(build.log)}`);
    return null;
  }

  const run = runConsumer(tc, id, build.executable, genDir);
  into.runs.push(run);
  logLines.push(
    `exit code: ${run.exitCode}`,
    `stdout:\n${run.stdout}`,
    `stderr:\n${run.stderr}`,
    `expected stdout:\n${scenario.expectedStdout}`,
  );
  into.logs.push({ id, text: `${logLines.join("\n")}\n` });

  if (run.exitCode !== 0) {
    finish("failed", `exit code ${run.exitCode}; stderr:\n${tail(run.stderr)}`);
  } else if (run.stdout !== scenario.expectedStdout) {
    finish("failed", `stdout mismatch: ${firstDifference(scenario.expectedStdout, run.stdout)}`);
  } else if (run.stderr !== "") {
    finish("failed", `unexpected stderr:\n${tail(run.stderr)}`);
  } else {
    finish("passed");
  }
  return run;
}

function executeScenario(
  tc: Toolchain,
  scenario: Scenario,
  genDir: string,
  runtimeObject: string,
  into: Execution,
): void {
  const captured = new Map<Mode, RunResult | null>();
  for (const mode of modesOf(scenario)) {
    captured.set(
      mode,
      executeScenarioMode(tc, scenario, mode, genDir, runtimeObject, into),
    );
  }
  if (scenario.modes !== "both") {
    return;
  }

  // The invariant checked here is byte-identity between the two
  // captures themselves, independent of the pinned expectation.
  const id = `${scenario.name}[mode-equivalence]`;
  const withEx = captured.get("exceptions");
  const withoutEx = captured.get("no-exceptions");
  let report: CaseReport;
  if (!withEx || !withoutEx) {
    report = {
      id,
      status: "failed",
      timeSeconds: 0,
      detail: "a mode failed to build, so the outputs cannot be compared",
    };
  } else if (withEx.stdout === withoutEx.stdout) {
    report = { id, status: "passed", timeSeconds: 0 };
  } else {
    report = {
      id,
      status: "failed",
      timeSeconds: 0,
      detail: `stdout diverges between modes: ${firstDifference(withEx.stdout, withoutEx.stdout)}`,
    };
  }
  into.cases.push(report);
  into.logs.push({
    id,
    text:
      `case: ${id}\n` +
      `exceptions stdout:\n${withEx?.stdout ?? "<no build>"}\n` +
      `no-exceptions stdout:\n${withoutEx?.stdout ?? "<no build>"}\n`,
  });
}

/** The negative test: try/catch must not compile under -fno-exceptions. */
function executeNegativeCompile(
  tc: Toolchain,
  genDir: string,
  runtimeObject: string,
  into: Execution,
): void {
  const started = Date.now();
  const build = buildConsumer(
    tc,
    path.join(CONSUMERS_DIR, "catch_division.cpp"),
    "no-exceptions",
    genDir,
    runtimeObject,
    BUILD_DIR,
    "negative-catch-division",
  );
  const timeSeconds = (Date.now() - started) / 1000;
  into.logs.push({
    id: NEGATIVE_CASE_ID,
    text:
      `case: ${NEGATIVE_CASE_ID}\n` +
      `compile (failure expected): ${build.command.join(" ")}\n` +
      `compiler output:\n${build.log}\n`,
  });
  if (build.ok) {
    into.cases.push({
      id: NEGATIVE_CASE_ID,
      status: "failed",
      timeSeconds,
      detail: "the try/catch consumer compiled under -fno-exceptions",
    });
  } else {
    into.cases.push({ id: NEGATIVE_CASE_ID, status: "passed", timeSeconds });
  }
}

/** Runs everything and writes the report. */
export function runHarness(): HarnessResult {
  const tc = resolveToolchain();
  const checkedIn = checkedInScenarios();
  const variantPlans = VARIANT_MODULES.map((file) => ({
    name: `variant-${path.basename(file, ".eb")}`,
    modes: "both" as const,
    moduleFile: path.join(MODULES_DIR, file),
  }));

  if (!tc.compiler) {
    const reason = "no C++ compiler found";
    const cases: CaseReport[] = [
      ...checkedIn.flatMap(caseIds),
      ...variantPlans.flatMap(caseIds),
      NEGATIVE_CASE_ID,
    ].map((id) => ({ id, status: "skipped" as const, timeSeconds: 0, detail: reason }));
    const { reportPath, logDir } = writeReports(REPORTS_DIR, cases, []);
    return { cases, runs: [], reportPath, logDir, skipped: true };
  }

  fs.rmSync(BUILD_DIR, { recursive: true, force: true });
  fs.mkdirSync(BUILD_DIR, { recursive: true });
  const runtimeObject = compileRuntime(tc, BUILD_DIR);

  // One generation per distinct module file, shared across scenarios.
  const genDirs = new Map<string, { dir: string; module: GeneratedModule }>();
  const ensureGenerated = (moduleFile: string) => {
    let entry = genDirs.get(moduleFile);
    if (!entry) {
      const dir = path.join(BUILD_DIR, `gen-${path.basename(moduleFile, ".eb")}`);
      entry = { dir, module: generateModule(tc, moduleFile, dir) };
      genDirs.set(moduleFile, entry);
    }
    return entry;
  };

  const scenarios: Scenario[] = [...checkedIn];
  for (const plan of variantPlans) {
    const { module } = ensureGenerated(plan.moduleFile);
    const calls = planCalls(tc, plan.moduleFile, module);
    const sourcePath = path.join(BUILD_DIR, `${plan.name}.cpp`);
    fs.writeFileSync(sourcePath, consumerSource(module, calls));
    scenarios.push({
      name: plan.name,
      moduleFile: plan.moduleFile,
      consumerSource: sourcePath,
      expectedStdout: expectedStdout(calls),
      modes: plan.modes,
    });
  }

  const execution: Execution = { cases: [], runs: [], logs: [] };
  for (const scenario of scenarios) {
    const { dir } = ensureGenerated(scenario.moduleFile);
    executeScenario(tc, scenario, dir, runtimeObject, execution);
  }
  executeNegativeCompile(
    tc,
    ensureGenerated(path.join(MODULES_DIR, "functions.eb")).dir,
    runtimeObject,
    execution,
  );

  const { reportPath, logDir } = writeReports(
    REPORTS_DIR,
    execution.cases,
    execution.logs,
  );
  return {
    cases: execution.cases,
    runs: execution.runs,
    reportPath,
    logDir,
    skipped: false,
  };
}
