/// <reference types="vitest/config" />
import { defineConfig } from "vite";

// Dev server proxies API paths to a locally running `quizboard serve`.
const API = "http://127.0.0.1:8000";

export default defineConfig({
  server: {
    proxy: {
      "/games": API,
      "/banks": API,
      "/boards": API,
      "/assets": API,
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
