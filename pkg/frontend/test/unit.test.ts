/**
 * Unit tests for the protocol schemas, the client, the view-model
 * reducer, and the keyboard binding (one keypress = one command).
 */

import { describe, expect, it } from "vitest";

import { frameOf, SessionClient, Transport } from "../src/client.js";
import { bindKeyboard, commandForKey } from "../src/keyboard.js";
import {
  CommandResponse,
  Created,
  Frame,
  FrameSchema,
  validateTrajectoryLog,
} from "../src/protocol.js";
import {
  applyCreated,
  applyResponse,
  initialViewModel,
  selectTarget,
} from "../src/state.js";

export function makeFrame(overrides: Partial<Frame> = {}): Frame {
  return {
    kind: "frame",
    v: 1,
    session: "abc",
    k: 0,
    horizon: 100,
    budget_left: 10,
    pose: [1, 1, 0],
    rays: [[0, 2.5]],
    targets: [],
    sensing_radius: 5,
    active_radius: 1.2,
    done: false,
    ...overrides,
  };
}

export function makeCreated(frame: Frame): Created {
  return {
    kind: "created",
    v: 1,
    session: frame.session,
    map: { bounds: [0, 0, 10, 10], obstacles: [[[2, 2], [3, 2], [3, 3]]] },
    features: [
      { name: "buying", values: ["low", "high"] },
      { name: "safety", values: ["low", "high"] },
    ],
    classes: 2,
    frame,
  };
}

class FakeTransport implements Transport {
  public posts: Array<{ path: string; body: unknown }> = [];
  constructor(private readonly responses: unknown[]) {}

  async post(path: string, body: unknown): Promise<unknown> {
    this.posts.push({ path, body });
    return this.responses.shift();
  }
  async get(): Promise<unknown> {
    return this.responses.shift();
  }
  async getText(): Promise<string> {
    return String(this.responses.shift());
  }
  async delete(): Promise<unknown> {
    return this.responses.shift();
  }
}

describe("protocol schemas", () => {
  it("accepts a well-formed frame", () => {
    expect(FrameSchema.parse(makeFrame())).toBeTruthy();
  });

  it("rejects frames carrying ground truth or unknown fields", () => {
    const leaky = { ...makeFrame(), true_classes: [0, 1] };
    expect(() => FrameSchema.parse(leaky)).toThrow();
    const leakyTarget = {
      ...makeFrame(),
      targets: [
        {
          id: 0,
          range: 1,
          bearing: 0,
          in_active: true,
          in_passive: true,
          revealed_values: [],
          classified: false,
          true_class: 1,
        },
      ],
    };
    expect(() => FrameSchema.parse(leakyTarget)).toThrow();
  });

  it("validates a trajectory log line by line", () => {
    const header = JSON.stringify({
      kind: "header", v: 1, workspace: {}, net: {}, pressure: {},
      agent: {}, seed: 0,
    });
    const row = JSON.stringify({
      kind: "row", k: 0, pose: [1, 1, 0], action: ["forward", 1.0],
      blocked: false, test: null, z: null, o: [], si: [], J: 0,
      b_inc: 0, d_inc: 0.1, classify: null,
    });
    expect(validateTrajectoryLog(`${header}\n${row}\n`)).toBe(1);
    expect(() => validateTrajectoryLog(`${row}\n${row}\n`)).toThrow();
    expect(() => validateTrajectoryLog("")).toThrow();
  });
});

describe("session client", () => {
  it("creates a session and sends commands against it", async () => {
    const frame = makeFrame({ k: 1 });
    const transport = new FakeTransport([makeCreated(makeFrame()), frame]);
    const client = new SessionClient(transport);
    const created = await client.create({ layout: "human10x10" });
    expect(created.session).toBe("abc");
    const response = await client.command({
      action: { kind: "forward", magnitude: 1 },
    });
    expect(frameOf(response)?.k).toBe(1);
    expect(transport.posts[1]?.path).toBe("/v1/session/abc/command");
  });

  it("surfaces create errors", async () => {
    const transport = new FakeTransport([
      { kind: "error", message: "unknown layout 'nope'" },
    ]);
    const client = new SessionClient(transport);
    await expect(client.create({ layout: "nope" })).rejects.toThrow(
      /unknown layout/,
    );
  });

  it("rejects malformed responses", async () => {
    const transport = new FakeTransport([
      makeCreated(makeFrame()),
      { kind: "frame", v: 1 },
    ]);
    const client = new SessionClient(transport);
    await client.create({});
    await expect(client.command({})).rejects.toThrow();
  });
});

describe("view-model reducer", () => {
  const created = makeCreated(makeFrame());

  it("applies frames and counts commands", () => {
    let vm = applyCreated(initialViewModel(), created);
    const next = makeFrame({ k: 1 });
    vm = applyResponse(vm, next);
    expect(vm.frame?.k).toBe(1);
    expect(vm.commandCount).toBe(1);
  });

  it("keeps the previous frame on in-band errors", () => {
    let vm = applyCreated(initialViewModel(), created);
    vm = applyResponse(vm, {
      kind: "error",
      message: "budget exhausted",
    } as CommandResponse);
    expect(vm.lastError).toMatch(/budget/);
    expect(vm.frame?.k).toBe(0);
    expect(vm.commandCount).toBe(0);
  });

  it("only allows selecting in-FOV targets and drops stale selections", () => {
    const visible = makeFrame({
      targets: [
        {
          id: 3, range: 1, bearing: 0, in_active: true, in_passive: true,
          revealed_values: [], classified: false,
        },
      ],
    });
    let vm = applyCreated(initialViewModel(), makeCreated(visible));
    vm = selectTarget(vm, 7);
    expect(vm.selectedTarget).toBeNull();
    vm = selectTarget(vm, 3);
    expect(vm.selectedTarget).toBe(3);
    vm = applyResponse(vm, makeFrame({ k: 1, targets: [] }));
    expect(vm.selectedTarget).toBeNull();
  });

  it("records reveal results and session end", () => {
    let vm = applyCreated(initialViewModel(), created);
    vm = applyResponse(vm, {
      kind: "reveal_result",
      v: 1,
      session: "abc",
      target: 0,
      feature: "buying",
      value_index: 1,
      value: "high",
      posterior: [0.3, 0.7],
      frame: makeFrame({ k: 2 }),
    });
    expect(vm.lastReveal?.value).toBe("high");
    vm = applyResponse(vm, {
      kind: "end",
      v: 1,
      session: "abc",
      reason: "horizon",
      metrics: {},
    });
    expect(vm.end?.reason).toBe("horizon");
  });
});

describe("keyboard", () => {
  it("maps movement keys and ignores others", () => {
    expect(commandForKey("ArrowUp")?.action?.kind).toBe("forward");
    expect(commandForKey("a")?.action?.kind).toBe("turn_left");
    expect(commandForKey("x")).toBeNull();
  });

  it("emits exactly one command per keypress and none while in flight", async () => {
    const sent: string[] = [];
    let resolveSend: (() => void) | null = null;
    const listeners: Array<(e: Event) => void> = [];
    const target = {
      addEventListener: (_: string, fn: EventListenerOrEventListenerObject) =>
        listeners.push(fn as (e: Event) => void),
      removeEventListener: () => {},
    };
    const detach = bindKeyboard(target, (request) => {
      sent.push(request.action?.kind ?? "?");
      return new Promise<void>((resolve) => {
        resolveSend = resolve;
      });
    });
    const press = (key: string, repeat = false) =>
      listeners[0]?.({ key, repeat, preventDefault() {} } as unknown as Event);
    press("ArrowUp");
    press("ArrowUp"); // still in flight: dropped
    press("ArrowUp", true); // auto-repeat: dropped
    expect(sent).toEqual(["forward"]);
    resolveSend!();
    await Promise.resolve(); // let the .finally() run
    await Promise.resolve();
    press("ArrowLeft");
    expect(sent).toEqual(["forward", "turn_left"]);
    detach();
  });
});
