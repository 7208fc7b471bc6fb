/**
 * Keyboard controls: one keypress maps to exactly one command.  Key
 * auto-repeat is suppressed, and no new command is emitted while the
 * previous one is still in flight (strictly sequential exchange).
 */

import { CommandRequest } from "./protocol.js";

const KEY_ACTIONS: Record<string, CommandRequest> = {
  ArrowUp: { action: { kind: "forward", magnitude: 1.0 } },
  w: { action: { kind: "forward", magnitude: 1.0 } },
  ArrowLeft: { action: { kind: "turn_left", magnitude: 1.0 } },
  a: { action: { kind: "turn_left", magnitude: 1.0 } },
  ArrowRight: { action: { kind: "turn_right", magnitude: 1.0 } },
  d: { action: { kind: "turn_right", magnitude: 1.0 } },
  ArrowDown: { action: { kind: "stop" } },
  s: { action: { kind: "stop" } },
};

export function commandForKey(key: string): CommandRequest | null {
  const request = KEY_ACTIONS[key];
  return request === undefined ? null : request;
}

/**
 * Attach keyboard handling; returns a detach function.  ``send`` is awaited
 * so a held key cannot queue more than one command.
 */
export function bindKeyboard(
  target: Pick<EventTarget, "addEventListener" | "removeEventListener">,
  send: (request: CommandRequest) => Promise<void>,
): () => void {
  let busy = false;
  const onKeyDown = (event: Event) => {
    const keyboardEvent = event as KeyboardEvent;
    if (keyboardEvent.repeat || busy) {
      return;
    }
    const request = commandForKey(keyboardEvent.key);
    if (request === null) {
      return;
    }
    keyboardEvent.preventDefault();
    busy = true;
    void send(request).finally(() => {
      busy = false;
    });
  };
  target.addEventListener("keydown", onKeyDown);
  return () => target.removeEventListener("keydown", onKeyDown);
}
