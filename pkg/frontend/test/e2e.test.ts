/**
 * End-to-end: a scripted protocol client plays a 50-step session against
 * the real Python session service, rendering every frame through the UI
 * with DOM hygiene assertions, then downloads the trajectory log,
 * validates its schema, and feeds it back through the Python metrics and
 * log-likelihood tooling.
 */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { JSDOM } from "jsdom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { frameOf, HttpTransport, SessionClient } from "../src/client.js";
import { Frame, validateTrajectoryLog } from "../src/protocol.js";
import {
  applyCreated,
  applyResponse,
  initialViewModel,
  ViewModel,
} from "../src/state.js";
import { render } from "../src/render.js";
import { assertHygiene } from "./dom.test.js";

const PORT = 8733;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = resolve(__dirname, "..", "..");

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 60_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/openapi.json`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolveSleep) => setTimeout(resolveSleep, 500));
  }
  throw new Error("session service did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "treasurehunt.cli", "serve", "--port", String(PORT),
     "--stream-port", ""],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

describe("scripted 50-step session", () => {
  it("plays end-to-end and produces a valid, analyzable log", async () => {
    const dom = new JSDOM("<!doctype html><div id='app'></div>");
    globalThis.document = dom.window.document as unknown as Document;
    const root = dom.window.document.getElementById(
      "app",
    ) as unknown as HTMLElement;
    const noop = {
      onSelectTarget() {}, onReveal() {}, onClassify() {},
      onDownloadLog() {}, onEndSession() {},
    };

    const client = new SessionClient(new HttpTransport(BASE));
    const created = await client.create({
      layout: "human10x10",
      n_targets: 10,
      seed: 7,
      horizon: 500,
      budget: 20,
    });
    expect(created.frame.k).toBe(0);
    let vm: ViewModel = applyCreated(initialViewModel(), created);
    render(root, vm, noop);
    assertHygiene(root, created.frame);

    // Simple scripted policy: reveal twice then classify when a target is
    // in reach; otherwise drive forward and turn right when little
    // clearance remains dead ahead.
    let lastPosterior: number[] | null = null;
    for (let step = 0; step < 50; step += 1) {
      const frame = vm.frame as Frame;
      const reachable = frame.targets.find(
        (t) => t.in_active && !t.classified,
      );
      let response;
      if (reachable && reachable.revealed_values.length < 2 &&
          frame.budget_left > 0) {
        response = await client.command({
          action: { kind: "stop" },
          test: { target: reachable.id },
        });
        if (response.kind === "reveal_result") {
          expect(response.target).toBe(reachable.id);
          expect(response.posterior.length).toBe(created.classes);
          lastPosterior = response.posterior;
        }
      } else if (reachable) {
        const posterior = lastPosterior ?? [1];
        const cls = posterior.indexOf(Math.max(...posterior));
        response = await client.command({
          action: { kind: "stop" },
          classify: { target: reachable.id, class: cls },
        });
        lastPosterior = null;
      } else {
        const ahead = frame.rays
          .filter(([rel]) => Math.abs(rel) < 0.3)
          .map(([, dist]) => dist);
        const clearance = ahead.length ? Math.min(...ahead) : 1;
        response = await client.command({
          action:
            clearance < 0.4
              ? { kind: "turn_right", magnitude: 1.0 }
              : { kind: "forward", magnitude: 1.0 },
        });
      }
      expect(response.kind).not.toBe("error");
      vm = applyResponse(vm, response);
      const rendered = frameOf(response);
      if (rendered !== null) {
        render(root, vm, noop);
        assertHygiene(root, rendered);
      }
    }
    expect(vm.commandCount).toBe(50);
    expect((vm.frame as Frame).k).toBe(50);

    // Download, schema-validate, and analyze the log with the Python tools.
    const jsonl = await client.downloadLog();
    const rowCount = validateTrajectoryLog(jsonl);
    expect(rowCount).toBe(50);
    const dir = mkdtempSync(join(tmpdir(), "treasurehunt-ui-"));
    const logPath = join(dir, "session.jsonl");
    writeFileSync(logPath, jsonl);

    const loglik = spawnSync(
      "python3",
      ["-m", "treasurehunt.cli", "loglik", logPath],
      { cwd: REPO_ROOT, encoding: "utf8" },
    );
    expect(loglik.status, loglik.stderr).toBe(0);
    expect(loglik.stdout).toMatch(/adaptive_switch/);

    const metrics = spawnSync(
      "python3",
      [
        "-c",
        [
          "import sys, treasurehunt as th",
          "log = th.TrajectoryLog.from_jsonl(open(sys.argv[1]).read())",
          "m = th.compute_metrics(log)",
          "print(m.objective)",
        ].join("\n"),
        logPath,
      ],
      { cwd: REPO_ROOT, encoding: "utf8" },
    );
    expect(metrics.status, metrics.stderr).toBe(0);
    expect(Number.isFinite(Number(metrics.stdout.trim()))).toBe(true);

    const end = await client.end();
    expect(end.reason).toBe("client");
  });
});
