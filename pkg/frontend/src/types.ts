// Shared shapes for the consumer harness.

/** One concrete build flavor of a consumer. */
export type Mode = "exceptions" | "no-exceptions";

/** Which flavors a scenario is built and run under. */
export type Modes = Mode | "both";

/**
 * One consumer program paired with the module it is generated against
 * and the exact stdout it must produce. When `modes` is "both" the
 * same expectation applies to each build, so matching it twice already
 * implies byte-identical output across modes; the harness still
 * compares the two captures directly to report divergence as its own
 * finding.
 */
export interface Scenario {
  name: string;
  /** IDL module source (.eb) the header set is generated from. */
  moduleFile: string;
  /** C++ translation unit (absolute path). */
  consumerSource: string;
  expectedStdout: string;
  modes: Modes;
}

export interface BuildResult {
  ok: boolean;
  executable: string;
  command: string[];
  /** Compiler stdout and stderr, merged. */
  log: string;
}

export interface RunResult {
  id: string;
  exitCode: number | null;
  stdout: string;
  stderr: string;
}

export type CaseStatus = "passed" | "failed" | "skipped";

/** One reportable harness check (a build, a run, or a comparison). */
export interface CaseReport {
  id: string;
  status: CaseStatus;
  timeSeconds: number;
  detail?: string;
}

export interface HarnessResult {
  cases: CaseReport[];
  runs: RunResult[];
  /** Absolute path of the JUnit-style report, once written. */
  reportPath: string;
  /** Directory holding one plain-text log per case. */
  logDir: string;
  /** True when no C++ compiler was found and every case was skipped. */
  skipped: boolean;
}
