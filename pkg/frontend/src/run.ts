// Executes built consumers with the module registry on the search path.

import { capture, Toolchain } from "./toolchain.js";
import { RunResult } from "./types.js";

/**
 * Runs one consumer executable. ERRBRIDGE_MODULE_PATH points at the
 * generation directory so the header's bootstrap can find the
 * module's .ebm registry.
 */
export function runConsumer(
  tc: Toolchain,
  id: string,
  executable: string,
  modulePath: string,
): RunResult {
  const result = capture([executable], {
    env: { ...tc.env, ERRBRIDGE_MODULE_PATH: modulePath },
    timeoutMs: 60_000,
  });
  return {
    id,
    exitCode: result.status,
    stdout: result.stdout,
    stderr: result.stderr,
  };
}
