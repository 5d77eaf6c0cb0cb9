import { ChildProcess, spawn } from "node:child_process";

import { Handlers, render } from "../src/render.js";
import { AdvisorApp, AdvisorClientLike } from "../src/state.js";

export interface ServiceHandle {
  proc: ChildProcess;
  baseUrl: string;
}

/** Spawn the real advisor service on an ephemeral port and wait for health. */
export async function startService(): Promise<ServiceHandle> {
  const proc = spawn("python3", ["-m", "blindseq.cli", "serve", "--port", "0"], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  let output = "";
  proc.stderr?.on("data", (chunk) => {
    output += String(chunk);
  });
  const port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(
      () => reject(new Error(`service did not announce a port:\n${output}`)),
      90_000,
    );
    proc.stdout?.on("data", (chunk) => {
      output += String(chunk);
      const match = output.match(/listening on http:\/\/[^:]+:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    proc.once("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited with ${code}:\n${output}`));
    });
  });
  const baseUrl = `http://127.0.0.1:${port}`;
  for (let attempt = 0; attempt < 200; attempt += 1) {
    try {
      const response = await fetch(`${baseUrl}/api/health`);
      if (response.ok) return { proc, baseUrl };
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  proc.kill();
  throw new Error(`service never became healthy:\n${output}`);
}

export function stopService(handle: ServiceHandle | undefined): void {
  handle?.proc.kill();
}

/** Mount an app on a fresh DOM root, wiring commits/draws like main.ts does. */
export function mountApp(client: AdvisorClientLike): { app: AdvisorApp; root: HTMLElement } {
  const root = document.createElement("div");
  document.body.textContent = "";
  document.body.append(root);
  const handlers: Handlers = {
    onStart: ({ variant, size, strategy }) =>
      void app.newGame(
        variant === "grid" ? { variant, m: size } : { variant, n: size, strategy },
      ),
    onDraw: (text) => void app.enterDraw(text),
    onCommit: (placement) => void app.commit(placement),
    onReset: () => app.reset(),
  };
  const app = new AdvisorApp(client, (view) => render(root, view, handlers));
  app.reset();
  return { app, root };
}
