// Command-line entry point: run the whole matrix and report.

import { runHarness } from "./harness.js";

const result = runHarness();
for (const c of result.cases) {
  const detail = c.detail ? ` (${c.detail.split("\n", 1)[0]})` : "";
  console.log(`${c.id}: ${c.status.toUpperCase()}${detail}`);
}
console.log(`report: ${result.reportPath}`);
console.log(`logs: ${result.logDir}`);

if (result.skipped) {
  console.warn("warning: no C++ compiler found; all scenarios skipped");
}
const failed = result.cases.filter((c) => c.status === "failed").length;
process.exit(failed > 0 ? 1 : 0);
