import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // integration specs spawn the annotation service as a subprocess
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
