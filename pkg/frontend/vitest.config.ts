import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // each file spawns its own polydraw server; run files one at a time so
    // wall-clock budgets are not skewed by CPU contention
    fileParallelism: false,
    testTimeout: 200_000,
    hookTimeout: 60_000,
  },
});
