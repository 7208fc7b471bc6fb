/**
 * DOM + canvas renderer.  Renders exclusively from the ViewModel, which in
 * turn holds only frame content: visible targets, revealed feature values,
 * ray distances, budget and step counters.  Class ground truth and
 * out-of-FOV targets never exist client-side, so they cannot be rendered.
 */

import { TargetInfo } from "./protocol.js";
import { selectedTarget, ViewModel } from "./state.js";

export interface Handlers {
  onSelectTarget(id: number | null): void;
  onReveal(id: number): void;
  onClassify(id: number, cls: number): void;
  onDownloadLog(): void;
  onEndSession(): void;
}

const AGENT_COLOR = "#ffd54f";
const TARGET_COLOR = "#4fc3f7";
const TARGET_ACTIVE_COLOR = "#81c784";
const RAY_COLOR = "rgba(255,255,255,0.25)";
const OBSTACLE_COLOR = "#455a64";
const FLOOR_COLOR = "#263238";
const FOG_COLOR = "rgba(0,0,0,0.82)";

function el(
  tag: string,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function targetLabel(vm: ViewModel, target: TargetInfo): string {
  const parts = [
    `target ${target.id}`,
    `${target.range.toFixed(2)} m`,
    `${((target.bearing * 180) / Math.PI).toFixed(0)}°`,
  ];
  if (target.classified) {
    parts.push("classified");
  } else if (target.in_active) {
    parts.push("in reach");
  }
  return parts.join(" · ");
}

function renderHud(vm: ViewModel): HTMLElement {
  const hud = el("div", { id: "hud", class: "hud" });
  const frame = vm.frame;
  if (frame === null) {
    hud.append(el("span", { id: "status" }, "connecting…"));
    return hud;
  }
  hud.append(
    el("span", { id: "steps" }, `step ${frame.k} / ${frame.horizon}`),
    el("span", { id: "budget" }, `budget left ${frame.budget_left}`),
    el(
      "span",
      { id: "status" },
      vm.end !== null ? `ended: ${vm.end.reason}` : frame.done ? "done" : "live",
    ),
  );
  return hud;
}

function renderTargetPanel(vm: ViewModel, handlers: Handlers): HTMLElement {
  const panel = el("div", { id: "targets", class: "targets" });
  const frame = vm.frame;
  if (frame === null) {
    return panel;
  }
  for (const target of frame.targets) {
    const row = el("div", {
      class: "target-row",
      "data-target-id": String(target.id),
    });
    const button = el("button", { type: "button" }, targetLabel(vm, target));
    button.addEventListener("click", () => handlers.onSelectTarget(target.id));
    row.append(button);
    const revealed = el("ul", { class: "revealed" });
    target.revealed_values.forEach((valueIndex, featureIndex) => {
      const feature = vm.features[featureIndex];
      const name = feature?.name ?? `feature ${featureIndex + 1}`;
      const value = feature?.values[valueIndex] ?? String(valueIndex);
      revealed.append(el("li", {}, `${name}: ${value}`));
    });
    row.append(revealed);
    panel.append(row);
  }
  return panel;
}

function renderDialog(vm: ViewModel, handlers: Handlers): HTMLElement | null {
  const target = selectedTarget(vm);
  if (target === null) {
    return null;
  }
  const dialog = el("div", {
    id: "dialog",
    class: "dialog",
    "data-target-id": String(target.id),
  });
  dialog.append(el("h3", {}, `target ${target.id}`));
  const revealButton = el(
    "button",
    { id: "reveal", type: "button" },
    target.revealed_values.length >= vm.features.length
      ? "all features revealed"
      : `reveal ${vm.features[target.revealed_values.length]?.name ?? "next feature"} (cost 1)`,
  );
  revealButton.addEventListener("click", () => handlers.onReveal(target.id));
  dialog.append(revealButton);
  const classify = el("div", { id: "classify-options" });
  for (let cls = 0; cls < vm.classes; cls += 1) {
    const button = el(
      "button",
      { type: "button", "data-class": String(cls) },
      `classify as class ${cls + 1}`,
    );
    button.addEventListener("click", () =>
      handlers.onClassify(target.id, cls),
    );
    classify.append(button);
  }
  dialog.append(classify);
  const close = el("button", { id: "close-dialog", type: "button" }, "close");
  close.addEventListener("click", () => handlers.onSelectTarget(null));
  dialog.append(close);
  return dialog;
}

function renderToasts(vm: ViewModel): HTMLElement {
  const box = el("div", { id: "toasts" });
  if (vm.lastReveal !== null) {
    box.append(
      el(
        "div",
        { class: "toast reveal" },
        `target ${vm.lastReveal.target}: ${vm.lastReveal.feature} = ${vm.lastReveal.value}` +
          ` · posterior [${vm.lastReveal.posterior.map((p) => p.toFixed(2)).join(", ")}]`,
      ),
    );
  }
  if (vm.lastError !== null) {
    box.append(el("div", { class: "toast error" }, vm.lastError));
  }
  return box;
}

function renderEndScreen(vm: ViewModel, handlers: Handlers): HTMLElement | null {
  if (vm.end === null) {
    return null;
  }
  const screen = el("div", { id: "end-screen" });
  screen.append(el("h2", {}, `session over (${vm.end.reason})`));
  const download = el(
    "button",
    { id: "download-log", type: "button" },
    "download trajectory log",
  );
  download.addEventListener("click", () => handlers.onDownloadLog());
  screen.append(download);
  return screen;
}

function getContext(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  try {
    return canvas.getContext("2d");
  } catch {
    return null; // headless DOM without canvas support
  }
}

function drawMap(canvas: HTMLCanvasElement, vm: ViewModel): void {
  const ctx = getContext(canvas);
  const frame = vm.frame;
  if (ctx === null || frame === null) {
    return; // headless environment or no frame yet
  }
  const [xmin, ymin, xmax, ymax] = vm.bounds;
  const scale = Math.min(
    canvas.width / (xmax - xmin),
    canvas.height / (ymax - ymin),
  );
  const toPx = (x: number, y: number): [number, number] => [
    (x - xmin) * scale,
    canvas.height - (y - ymin) * scale,
  ];

  ctx.fillStyle = FLOOR_COLOR;
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = OBSTACLE_COLOR;
  for (const polygon of vm.obstacles) {
    ctx.beginPath();
    polygon.forEach(([x, y], i) => {
      const [px, py] = toPx(x, y);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.closePath();
    ctx.fill();
  }

  const [ax, ay, heading] = frame.pose;
  const [apx, apy] = toPx(ax, ay);

  // Rays (what the sensor actually measured this step).
  ctx.strokeStyle = RAY_COLOR;
  ctx.lineWidth = 1;
  for (const [relative, distance] of frame.rays) {
    const angle = heading + relative;
    const [ex, ey] = toPx(
      ax + distance * Math.cos(angle),
      ay + distance * Math.sin(angle),
    );
    ctx.beginPath();
    ctx.moveTo(apx, apy);
    ctx.lineTo(ex, ey);
    ctx.stroke();
  }

  // Visible targets, placed from egocentric range/bearing only.
  for (const target of frame.targets) {
    const angle = heading + target.bearing;
    const [tx, ty] = toPx(
      ax + target.range * Math.cos(angle),
      ay + target.range * Math.sin(angle),
    );
    ctx.fillStyle = target.in_active ? TARGET_ACTIVE_COLOR : TARGET_COLOR;
    ctx.beginPath();
    ctx.arc(tx, ty, 6, 0, 2 * Math.PI);
    ctx.fill();
  }

  // Agent marker.
  ctx.fillStyle = AGENT_COLOR;
  ctx.beginPath();
  ctx.moveTo(
    apx + 8 * Math.cos(-heading),
    apy + 8 * Math.sin(-heading),
  );
  ctx.lineTo(
    apx + 8 * Math.cos(-heading + (3 * Math.PI) / 4),
    apy + 8 * Math.sin(-heading + (3 * Math.PI) / 4),
  );
  ctx.lineTo(
    apx + 8 * Math.cos(-heading - (3 * Math.PI) / 4),
    apy + 8 * Math.sin(-heading - (3 * Math.PI) / 4),
  );
  ctx.closePath();
  ctx.fill();

  // Fog of war: punch the visibility disc out of a dark overlay.
  ctx.save();
  ctx.fillStyle = FOG_COLOR;
  ctx.beginPath();
  ctx.rect(0, 0, canvas.width, canvas.height);
  ctx.arc(apx, apy, frame.sensing_radius * scale, 0, 2 * Math.PI, true);
  ctx.fill("evenodd");
  ctx.restore();
}

/** Rebuild the full UI for a view model (no client-side prediction). */
export function render(
  root: HTMLElement,
  vm: ViewModel,
  handlers: Handlers,
): void {
  root.replaceChildren();
  const canvas = el("canvas", {
    id: "map",
    width: "600",
    height: "600",
  }) as HTMLCanvasElement;
  root.append(canvas);
  drawMap(canvas, vm);
  root.append(renderHud(vm));
  root.append(renderTargetPanel(vm, handlers));
  const dialog = renderDialog(vm, handlers);
  if (dialog !== null) {
    root.append(dialog);
  }
  root.append(renderToasts(vm));
  const endScreen = renderEndScreen(vm, handlers);
  if (endScreen !== null) {
    root.append(endScreen);
  }
}
