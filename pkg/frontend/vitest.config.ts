import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    testTimeout: 180_000,
    hookTimeout: 120_000,
    // The e2e test owns a live server; keep files sequential.
    fileParallelism: false,
  },
});
