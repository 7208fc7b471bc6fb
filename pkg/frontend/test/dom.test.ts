/**
 * DOM-level information-hygiene tests: the renderer shows only what the
 * current frame contains — in-FOV targets and their revealed features —
 * and never class ground truth.
 */

import { JSDOM } from "jsdom";
import { beforeEach, describe, expect, it } from "vitest";

import { Frame } from "../src/protocol.js";
import { applyCreated, initialViewModel, selectTarget, ViewModel } from "../src/state.js";
import { Handlers, render } from "../src/render.js";
import { makeCreated, makeFrame } from "./unit.test.js";

const noopHandlers: Handlers = {
  onSelectTarget() {},
  onReveal() {},
  onClassify() {},
  onDownloadLog() {},
  onEndSession() {},
};

let dom: JSDOM;
let root: HTMLElement;

beforeEach(() => {
  dom = new JSDOM("<!doctype html><div id='app'></div>");
  globalThis.document = dom.window.document as unknown as Document;
  root = dom.window.document.getElementById("app") as unknown as HTMLElement;
});

/** Every target id in the DOM must come from the frame's visible set. */
export function assertHygiene(rootEl: HTMLElement, frame: Frame): void {
  const visible = new Set(frame.targets.map((t) => String(t.id)));
  for (const node of rootEl.querySelectorAll("[data-target-id]")) {
    expect(visible).toContain(node.getAttribute("data-target-id"));
  }
  for (const target of frame.targets) {
    const row = rootEl.querySelector(
      `.target-row[data-target-id='${target.id}']`,
    );
    expect(row).not.toBeNull();
    // Exactly the revealed features are listed, nothing more.
    expect(row!.querySelectorAll("li").length).toBe(
      target.revealed_values.length,
    );
  }
  const text = rootEl.textContent ?? "";
  // Ground-truth vocabulary must never reach the page.
  for (const forbidden of ["true_class", "unacc", "ground truth"]) {
    expect(text).not.toContain(forbidden);
  }
}

function vmWith(frame: Frame): ViewModel {
  return applyCreated(initialViewModel(), makeCreated(frame));
}

describe("renderer hygiene", () => {
  it("renders only in-FOV targets", () => {
    const frame = makeFrame({
      targets: [
        {
          id: 4, range: 2.0, bearing: 0.4, in_active: false, in_passive: true,
          revealed_values: [1], classified: false,
        },
      ],
    });
    render(root, vmWith(frame), noopHandlers);
    assertHygiene(root, frame);
    expect(root.querySelectorAll(".target-row").length).toBe(1);
  });

  it("never shows class labels for unclassified targets", () => {
    const frame = makeFrame({
      targets: [
        {
          id: 0, range: 0.8, bearing: 0, in_active: true, in_passive: true,
          revealed_values: [], classified: false,
        },
      ],
    });
    const vm = selectTarget(vmWith(frame), 0);
    render(root, vm, noopHandlers);
    assertHygiene(root, frame);
    // The classify dialog offers generic options; it does not state an answer.
    const buttons = root.querySelectorAll("#classify-options button");
    expect(buttons.length).toBe(2);
  });

  it("shows HUD counters from the frame only", () => {
    const frame = makeFrame({ k: 17, budget_left: 3 });
    render(root, vmWith(frame), noopHandlers);
    expect(root.querySelector("#steps")?.textContent).toBe("step 17 / 100");
    expect(root.querySelector("#budget")?.textContent).toBe("budget left 3");
  });

  it("renders the end screen with a log download control", () => {
    let vm = vmWith(makeFrame());
    vm = {
      ...vm,
      end: { kind: "end", v: 1, session: "abc", reason: "horizon", metrics: {} },
    };
    render(root, vm, noopHandlers);
    expect(root.querySelector("#download-log")).not.toBeNull();
  });
});
