// Drives `errbridge gen` and reads back the generated artifacts.

import * as fs from "node:fs";
import * as path from "node:path";

import { capture, Toolchain } from "./toolchain.js";

export type ScalarType = "Int64" | "Float64" | "Bool" | "Unit";

export interface ParamSig {
  name: string;
  type: ScalarType;
}

export interface FunctionSig {
  name: string;
  params: ParamSig[];
  returns: ScalarType;
  throws: boolean;
}

export interface GeneratedModule {
  /** Module name as declared in the IDL source. */
  name: string;
  /** Directory holding the headers and the registry. */
  outDir: string;
  /** `<Module>.h`, the header a consumer includes. */
  headerName: string;
  registryPath: string;
  enums: string[];
  functions: FunctionSig[];
}

/**
 * Generates headers and the module registry for one IDL file. The
 * registry is the canonical JSON form of the module, so it doubles as
 * the machine-readable interface description the harness plans from.
 */
export function generateModule(
  tc: Toolchain,
  moduleFile: string,
  outDir: string,
): GeneratedModule {
  fs.mkdirSync(outDir, { recursive: true });
  const gen = capture([...tc.errbridge, "gen", moduleFile, "--out", outDir], {
    env: tc.env,
  });
  if (gen.status !== 0) {
    throw new Error(
      `gen failed for ${moduleFile} (exit ${gen.status}):\n${gen.stdout}${gen.stderr}`,
    );
  }

  const registryName = fs
    .readdirSync(outDir)
    .find((entry) => entry.endsWith(".ebm"));
  if (!registryName) {
    throw new Error(`gen left no .ebm registry in ${outDir}`);
  }
  const registryPath = path.join(outDir, registryName);
  const registry = JSON.parse(fs.readFileSync(registryPath, "utf8")) as {
    name: string;
    enums: { name: string }[];
    functions: {
      name: string;
      params: { name: string; type: ScalarType }[];
      returns: ScalarType;
      throws: boolean;
    }[];
  };

  return {
    name: registry.name,
    outDir,
    headerName: `${registry.name}.h`,
    registryPath,
    enums: registry.enums.map((e) => e.name),
    functions: registry.functions.map((f) => ({
      name: f.name,
      params: f.params.map((p) => ({ name: p.name, type: p.type })),
      returns: f.returns,
      throws: f.throws,
    })),
  };
}

/**
 * Copies the bundled runtime library source into the build directory.
 * The one-liner is the package's documented recipe for obtaining it.
 */
export function writeRuntimeSource(tc: Toolchain, dir: string): string {
  fs.mkdirSync(dir, { recursive: true });
  const result = capture(
    [
      "python3",
      "-c",
      "import sys; from errbridge.difftest import write_runtime_source; write_runtime_source(sys.argv[1])",
      dir,
    ],
    { env: tc.env },
  );
  if (result.status !== 0) {
    throw new Error(`could not obtain the runtime source:\n${result.stderr}`);
  }
  return path.join(dir, "errbridge_runtime.cpp");
}

/** Compiles the runtime library once; every consumer links the object. */
export function compileRuntime(tc: Toolchain, dir: string): string {
  if (!tc.compiler) {
    throw new Error("no C++ compiler available");
  }
  const source = writeRuntimeSource(tc, dir);
  const object = path.join(dir, "errbridge_runtime.o");
  const result = capture(
    [tc.compiler, "-std=c++17", "-O1", "-c", source, "-o", object],
    { env: tc.env },
  );
  if (result.status !== 0) {
    throw new Error(`runtime library failed to compile:\n${result.stderr}`);
  }
  return object;
}
