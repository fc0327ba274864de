// Compiles consumer programs against a generated header set.

import * as path from "node:path";

import { Toolchain, capture } from "./toolchain.js";
import { BuildResult, Mode } from "./types.js";

/**
 * Compiles and links one consumer in one mode. The only difference
 * between the two modes is the -fno-exceptions flag; the generated
 * header reshapes its own API surface around it.
 */
export function buildConsumer(
  tc: Toolchain,
  consumerSource: string,
  mode: Mode,
  genDir: string,
  runtimeObject: string,
  outputDir: string,
  name: string,
): BuildResult {
  if (!tc.compiler) {
    throw new Error("no C++ compiler available");
  }
  const suffix = mode === "exceptions" ? "ex" : "noex";
  const executable = path.join(outputDir, `${name}.${suffix}`);
  const command = [
    tc.compiler,
    "-std=c++17",
    "-Wall",
    ...(mode === "no-exceptions" ? ["-fno-exceptions"] : []),
    "-I",
    genDir,
    consumerSource,
    runtimeObject,
    "-o",
    executable,
    "-pthread",
  ];
  const result = capture(command, { env: tc.env });
  return {
    ok: result.status === 0,
    executable,
    command,
    log: result.stdout + result.stderr,
  };
}
