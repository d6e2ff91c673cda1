/** Spawns a real polydraw server for the tests; the viewer code under test
 * only ever talks to it over HTTP. */

import { type ChildProcess, spawn } from "node:child_process";
import { setTimeout as sleep } from "node:timers/promises";

export interface ServerHandle {
  base: string;
  stop: () => Promise<void>;
}

export async function spawnServer(
  port: number,
  args: string[],
): Promise<ServerHandle> {
  const proc: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "polydraw.cli",
      "serve",
      "--listen",
      `127.0.0.1:${port}`,
      ...args,
    ],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  let stderr = "";
  proc.stderr?.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });
  const exited = new Promise<void>((resolve) => {
    proc.on("exit", () => resolve());
  });

  const base = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 40_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited early: ${stderr.slice(0, 2000)}`);
    }
    try {
      const resp = await fetch(`${base}/sessions`);
      if (resp.ok) break;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill("SIGKILL");
      throw new Error(`server never became ready: ${stderr.slice(0, 2000)}`);
    }
    await sleep(120);
  }

  return {
    base,
    stop: async () => {
      proc.kill("SIGTERM");
      await Promise.race([exited, sleep(5000)]);
      if (proc.exitCode === null) proc.kill("SIGKILL");
      await exited;
    },
  };
}
