import { defineConfig } from "vitest/config";

// The suite drives real compiles and dozens of child processes, so the
// default five-second budgets are nowhere near enough.
export default defineConfig({
  test: {
    testTimeout: 300_000,
    hookTimeout: 300_000,
  },
});
