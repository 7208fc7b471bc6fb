/**
 * View model: the pure projection of protocol frames into what the UI
 * renders.  Holds only frame content — information hygiene is inherited
 * from the protocol, and nothing else is ever mixed in.
 */

import {
  CommandResponse,
  Created,
  EndMessage,
  Frame,
  TargetInfo,
} from "./protocol.js";
import { frameOf } from "./client.js";

export interface FeatureDef {
  name: string;
  values: string[];
}

export interface RevealToast {
  target: number;
  feature: string;
  value: string;
  posterior: number[];
}

export interface ViewModel {
  session: string | null;
  bounds: [number, number, number, number];
  obstacles: [number, number][][];
  features: FeatureDef[];
  classes: number;
  frame: Frame | null;
  /** Target currently selected for the reveal/classify dialog. */
  selectedTarget: number | null;
  lastReveal: RevealToast | null;
  lastError: string | null;
  end: EndMessage | null;
  commandCount: number;
}

export function initialViewModel(): ViewModel {
  return {
    session: null,
    bounds: [0, 0, 1, 1],
    obstacles: [],
    features: [],
    classes: 2,
    frame: null,
    selectedTarget: null,
    lastReveal: null,
    lastError: null,
    end: null,
    commandCount: 0,
  };
}

export function applyCreated(vm: ViewModel, created: Created): ViewModel {
  return {
    ...initialViewModel(),
    session: created.session,
    bounds: created.map.bounds,
    obstacles: created.map.obstacles,
    features: created.features,
    classes: created.classes,
    frame: created.frame,
  };
}

export function applyResponse(
  vm: ViewModel,
  response: CommandResponse,
): ViewModel {
  if (response.kind === "error") {
    // In-band error: the session stays live, the previous frame stands.
    return { ...vm, lastError: response.message };
  }
  const next: ViewModel = {
    ...vm,
    lastError: null,
    lastReveal: null,
    commandCount: vm.commandCount + 1,
  };
  if (response.kind === "end") {
    return { ...next, end: response };
  }
  const frame = frameOf(response);
  if (frame !== null) {
    next.frame = frame;
    if (
      next.selectedTarget !== null &&
      !frame.targets.some((t) => t.id === next.selectedTarget)
    ) {
      next.selectedTarget = null; // selection must stay within the FOV
    }
  }
  if (response.kind === "reveal_result") {
    next.lastReveal = {
      target: response.target,
      feature: response.feature,
      value: response.value,
      posterior: response.posterior,
    };
  }
  if (response.end !== undefined && response.end !== null) {
    next.end = response.end;
  }
  return next;
}

export function selectTarget(vm: ViewModel, id: number | null): ViewModel {
  if (id !== null && !(vm.frame?.targets.some((t) => t.id === id) ?? false)) {
    return vm; // only in-FOV targets are selectable
  }
  return { ...vm, selectedTarget: id };
}

export function selectedTarget(vm: ViewModel): TargetInfo | null {
  if (vm.selectedTarget === null || vm.frame === null) {
    return null;
  }
  return vm.frame.targets.find((t) => t.id === vm.selectedTarget) ?? null;
}
