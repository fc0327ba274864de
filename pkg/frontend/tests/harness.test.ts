import * as fs from "node:fs";
import { beforeAll, describe, expect, it } from "vitest";

import { runHarness } from "../src/harness.js";
import { HarnessResult } from "../src/types.js";

let result: HarnessResult;

beforeAll(() => {
  result = runHarness();
});

function caseById(id: string) {
  const found = result.cases.find((c) => c.id === id);
  expect(found, `case ${id} should be reported`).toBeDefined();
  return found!;
}

function expectPassed(id: string) {
  const c = caseById(id);
  if (result.skipped) {
    expect(c.status).toBe("skipped");
    return;
  }
  expect(c.status, `${id}: ${c.detail ?? ""}`).toBe("passed");
}

describe("listing transliterations", () => {
  it("catch-division builds with exceptions and prints the pinned output", () => {
    expectPassed("catch-division[exceptions]");
  });

  it("expected-division builds under -fno-exceptions and prints the pinned output", () => {
    expectPassed("expected-division[no-exceptions]");
  });
});

describe("mode equivalence", () => {
  it("dual-division runs in both modes", () => {
    expectPassed("dual-division[exceptions]");
    expectPassed("dual-division[no-exceptions]");
  });

  it("both-mode scenarios produce byte-identical stdout", () => {
    const comparisons = result.cases.filter((c) =>
      c.id.endsWith("[mode-equivalence]"),
    );
    expect(comparisons.length).toBeGreaterThanOrEqual(5);
    for (const c of comparisons) {
      if (result.skipped) {
        expect(c.status).toBe("skipped");
      } else {
        expect(c.status, `${c.id}: ${c.detail ?? ""}`).toBe("passed");
      }
    }
  });
});

describe("generated variants", () => {
  it("every variant consumer matches the evaluator's answers in both modes", () => {
    for (const name of ["variant-arith", "variant-unitops", "variant-mixed"]) {
      expectPassed(`${name}[exceptions]`);
      expectPassed(`${name}[no-exceptions]`);
      expectPassed(`${name}[mode-equivalence]`);
    }
  });
});

describe("lifetimes", () => {
  it("every consumer run exits cleanly with zero live error boxes", () => {
    if (result.skipped) {
      expect(result.runs).toHaveLength(0);
      return;
    }
    expect(result.runs.length).toBeGreaterThan(0);
    for (const run of result.runs) {
      // A leaked box makes the consumer itself exit 1 and report on
      // stderr, so clean exits prove leak-freedom.
      expect(run.exitCode, `${run.id}: ${run.stderr}`).toBe(0);
      expect(run.stderr).toBe("");
    }
  });

  it("the stress scenario survives concurrent retain/release", () => {
    expectPassed("stress-shared-error[exceptions]");
    expectPassed("stress-shared-error[no-exceptions]");
    expectPassed("stress-shared-error[mode-equivalence]");
  });
});

describe("negative coverage", () => {
  it("the try/catch consumer does not compile under -fno-exceptions", () => {
    expectPassed("negative-compile[catch-division]");
  });
});

describe("reporting", () => {
  it("writes a JUnit-style report covering every case", () => {
    const xml = fs.readFileSync(result.reportPath, "utf8");
    expect(xml).toContain("<testsuite name=\"cxx-consumer-harness\"");
    expect(xml).toContain(`tests="${result.cases.length}"`);
    for (const c of result.cases) {
      expect(xml).toContain(`name="${c.id}"`);
    }
  });

  it("writes one plain-text log per built case", () => {
    if (result.skipped) {
      return;
    }
    const logs = fs.readdirSync(result.logDir);
    expect(logs.length).toBeGreaterThanOrEqual(result.cases.length);
    for (const file of logs) {
      expect(file.endsWith(".log")).toBe(true);
    }
  });

  it("fails no cases", () => {
    const failed = result.cases.filter((c) => c.status === "failed");
    expect(
      failed.map((c) => `${c.id}: ${c.detail ?? ""}`).join("\n"),
    ).toBe("");
  });
});
