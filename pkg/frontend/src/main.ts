/**
 * Browser bootstrap: connect to the session service, then run the
 * render / command loop.  Query parameters select the scenario:
 * ?layout=fog20x20&targets=10&seed=1&fog=1.0&budget=30&horizon=25000
 */

import { HttpTransport, SessionClient } from "./client.js";
import { bindKeyboard } from "./keyboard.js";
import { CommandRequest, validateTrajectoryLog } from "./protocol.js";
import {
  applyCreated,
  applyResponse,
  initialViewModel,
  selectTarget,
  ViewModel,
} from "./state.js";
import { Handlers, render } from "./render.js";

export async function start(root: HTMLElement): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("service") ?? "";
  const client = new SessionClient(new HttpTransport(base));
  let vm: ViewModel = initialViewModel();

  const handlers: Handlers = {
    onSelectTarget(id) {
      vm = selectTarget(vm, id);
      render(root, vm, handlers);
    },
    onReveal(id) {
      void send({ action: { kind: "stop" }, test: { target: id } });
    },
    onClassify(id, cls) {
      void send({
        action: { kind: "stop" },
        classify: { target: id, class: cls },
      });
    },
    onDownloadLog() {
      void downloadLog();
    },
    onEndSession() {
      void client.end();
    },
  };

  async function send(request: CommandRequest): Promise<void> {
    const response = await client.command(request);
    vm = applyResponse(vm, response);
    render(root, vm, handlers);
  }

  async function downloadLog(): Promise<void> {
    const jsonl = await client.downloadLog();
    validateTrajectoryLog(jsonl);
    const blob = new Blob([jsonl], { type: "application/jsonl" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = `session-${vm.session ?? "log"}.jsonl`;
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  }

  try {
    const created = await client.create({
      layout: params.get("layout") ?? "human10x10",
      n_targets: Number(params.get("targets") ?? 10),
      seed: Number(params.get("seed") ?? 0),
      horizon: Number(params.get("horizon") ?? 5000),
      budget: Number(params.get("budget") ?? 60),
      fog_radius: params.has("fog") ? Number(params.get("fog")) : null,
    });
    vm = applyCreated(vm, created);
  } catch (error) {
    root.textContent = `could not start session: ${String(error)}`;
    return;
  }
  render(root, vm, handlers);
  bindKeyboard(window, send);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void start(document.getElementById("app") as HTMLElement);
}
