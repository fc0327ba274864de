// JUnit-style XML report and plain-text logs.

import * as fs from "node:fs";
import * as path from "node:path";

import { CaseReport } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

function firstLine(text: string | undefined): string {
  return (text ?? "").split("\n", 1)[0];
}

export function junitXml(suiteName: string, cases: CaseReport[]): string {
  const failures = cases.filter((c) => c.status === "failed").length;
  const skipped = cases.filter((c) => c.status === "skipped").length;
  const time = cases.reduce((sum, c) => sum + c.timeSeconds, 0);
  const rows = cases.map((c) => {
    const open =
      `  <testcase classname="${esc(suiteName)}" name="${esc(c.id)}"` +
      ` time="${c.timeSeconds.toFixed(3)}"`;
    if (c.status === "passed") {
      return `${open}/>`;
    }
    if (c.status === "skipped") {
      const message = c.detail ? ` message="${esc(firstLine(c.detail))}"` : "";
      return `${open}>\n    <skipped${message}/>\n  </testcase>`;
    }
    return (
      `${open}>\n    <failure message="${esc(firstLine(c.detail))}">` +
      `${esc(c.detail ?? "")}</failure>\n  </testcase>`
    );
  });
  return (
    '<?xml version="1.0" encoding="UTF-8"?>\n' +
    `<testsuite name="${esc(suiteName)}" tests="${cases.length}"` +
    ` failures="${failures}" errors="0" skipped="${skipped}"` +
    ` time="${time.toFixed(3)}">\n` +
    rows.join("\n") +
    "\n</testsuite>\n"
  );
}

export interface CaseLog {
  id: string;
  text: string;
}

function safeFileName(id: string): string {
  return id.replace(/[^A-Za-z0-9_.-]/g, "_");
}

/**
 * Writes the XML report plus one plain-text log per case and a
 * one-line-per-case summary.
 */
export function writeReports(
  dir: string,
  cases: CaseReport[],
  logs: CaseLog[],
): { reportPath: string; logDir: string } {
  fs.rmSync(dir, { recursive: true, force: true });
  const logDir = path.join(dir, "logs");
  fs.mkdirSync(logDir, { recursive: true });

  const reportPath = path.join(dir, "junit.xml");
  fs.writeFileSync(reportPath, junitXml("cxx-consumer-harness", cases));

  for (const log of logs) {
    fs.writeFileSync(path.join(logDir, `${safeFileName(log.id)}.log`), log.text);
  }

  const summary = cases
    .map((c) => {
      const detail = c.detail ? ` (${firstLine(c.detail)})` : "";
      return `${c.id}: ${c.status.toUpperCase()}${detail}\n`;
    })
    .join("");
  fs.writeFileSync(path.join(dir, "harness.log"), summary);

  return { reportPath, logDir };
}
