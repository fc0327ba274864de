// Locates the errbridge CLI and a C++ compiler.

import { spawnSync } from "node:child_process";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

/** frontend/ — this package's root, stable across src/ and dist/. */
export const packageRoot = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)),
  "..",
);

/** The repository root, which holds the Python package's src/ tree. */
export const repoRoot = path.resolve(packageRoot, "..");

export interface Toolchain {
  /** argv prefix for the errbridge CLI. */
  errbridge: string[];
  /** Environment making the errbridge package importable. */
  env: NodeJS.ProcessEnv;
  /** C++ compiler executable, or null when none is installed. */
  compiler: string | null;
}

function respondsToVersion(executable: string): boolean {
  const probe = spawnSync(executable, ["--version"], { encoding: "utf8" });
  return probe.status === 0;
}

/**
 * The CLI is invoked as `python3 -m errbridge` with PYTHONPATH pointing
 * at the checkout, so the harness works without the console script
 * being on PATH.
 */
export function resolveToolchain(): Toolchain {
  const pythonPath = [path.join(repoRoot, "src"), process.env.PYTHONPATH]
    .filter(Boolean)
    .join(path.delimiter);
  const env: NodeJS.ProcessEnv = { ...process.env, PYTHONPATH: pythonPath };

  let compiler: string | null = null;
  const candidates = process.env.CXX
    ? [process.env.CXX]
    : ["clang++", "g++"];
  for (const candidate of candidates) {
    if (respondsToVersion(candidate)) {
      compiler = candidate;
      break;
    }
  }

  return { errbridge: ["python3", "-m", "errbridge"], env, compiler };
}

export interface CommandCapture {
  status: number | null;
  stdout: string;
  stderr: string;
}

/** Runs a command to completion, capturing text output. */
export function capture(
  argv: string[],
  options: { env?: NodeJS.ProcessEnv; timeoutMs?: number } = {},
): CommandCapture {
  const [cmd, ...args] = argv;
  const result = spawnSync(cmd, args, {
    encoding: "utf8",
    env: options.env ?? process.env,
    timeout: options.timeoutMs ?? 120_000,
  });
  if (result.error && (result.error as NodeJS.ErrnoException).code === "ENOENT") {
    return { status: null, stdout: "", stderr: `${cmd}: not found` };
  }
  return {
    status: result.status,
    stdout: result.stdout ?? "",
    stderr: result.stderr ?? "",
  };
}
