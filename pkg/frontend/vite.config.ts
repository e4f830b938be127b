import { defineConfig } from "vite";

export default defineConfig({
  server: { port: 5173 },
  test: {
    environment: "jsdom",
    testTimeout: 30000,
    hookTimeout: 60000,
    fileParallelism: false,
  },
});
