/**
 * Session protocol v1: typed message schemas.
 *
 * Every frame carries only egocentric information: ray distances, visible
 * targets with their revealed features so far, remaining budget and steps.
 * The schemas are strict (unknown keys rejected) so that any server-side
 * leakage of ground truth fails validation instead of silently flowing
 * into the view model.
 */

import { z } from "zod";

export const PROTOCOL_VERSION = 1;

export const TargetInfoSchema = z
  .object({
    id: z.number().int().nonnegative(),
    range: z.number().nonnegative(),
    bearing: z.number(),
    in_active: z.boolean(),
    in_passive: z.boolean(),
    revealed_values: z.array(z.number().int().nonnegative()),
    classified: z.boolean(),
  })
  .strict();

export type TargetInfo = z.infer<typeof TargetInfoSchema>;

export const EndSchema = z
  .object({
    kind: z.literal("end"),
    v: z.literal(PROTOCOL_VERSION),
    session: z.string(),
    reason: z.string(),
    metrics: z.record(z.unknown()),
  })
  .strict();

export type EndMessage = z.infer<typeof EndSchema>;

export const FrameSchema = z
  .object({
    kind: z.literal("frame"),
    v: z.literal(PROTOCOL_VERSION),
    session: z.string(),
    k: z.number().int().nonnegative(),
    horizon: z.number().int().positive(),
    budget_left: z.number().int(),
    pose: z.tuple([z.number(), z.number(), z.number()]),
    rays: z.array(z.tuple([z.number(), z.number()])),
    targets: z.array(TargetInfoSchema),
    sensing_radius: z.number().positive(),
    active_radius: z.number().positive(),
    done: z.boolean(),
    end: EndSchema.optional(),
  })
  .strict();

export type Frame = z.infer<typeof FrameSchema>;

export const CreatedSchema = z
  .object({
    kind: z.literal("created"),
    v: z.literal(PROTOCOL_VERSION),
    session: z.string(),
    map: z
      .object({
        bounds: z.tuple([z.number(), z.number(), z.number(), z.number()]),
        obstacles: z.array(z.array(z.tuple([z.number(), z.number()]))),
      })
      .strict(),
    features: z.array(
      z.object({ name: z.string(), values: z.array(z.string()) }).strict(),
    ),
    classes: z.number().int().min(2),
    frame: FrameSchema,
  })
  .strict();

export type Created = z.infer<typeof CreatedSchema>;

export const RevealResultSchema = z
  .object({
    kind: z.literal("reveal_result"),
    v: z.literal(PROTOCOL_VERSION),
    session: z.string(),
    target: z.number().int().nonnegative(),
    feature: z.string(),
    value_index: z.number().int().nonnegative(),
    value: z.string(),
    posterior: z.array(z.number()),
    frame: FrameSchema,
    end: EndSchema.optional(),
  })
  .strict();

export type RevealResult = z.infer<typeof RevealResultSchema>;

export const ClassifyResultSchema = z
  .object({
    kind: z.literal("classify_result"),
    v: z.literal(PROTOCOL_VERSION),
    session: z.string(),
    target: z.number().int().nonnegative(),
    assigned: z.number().int().nonnegative(),
    frame: FrameSchema,
    end: EndSchema.optional(),
  })
  .strict();

export type ClassifyResult = z.infer<typeof ClassifyResultSchema>;

export const ErrorSchema = z
  .object({
    kind: z.literal("error"),
    v: z.number().int().optional(),
    message: z.string(),
  })
  .strict();

export type ErrorMessage = z.infer<typeof ErrorSchema>;

/** Any message a command can come back with. */
export const CommandResponseSchema = z.union([
  FrameSchema,
  RevealResultSchema,
  ClassifyResultSchema,
  EndSchema,
  ErrorSchema,
]);

export type CommandResponse = z.infer<typeof CommandResponseSchema>;

export type ActionKind = "forward" | "turn_left" | "turn_right" | "stop";

export interface CommandRequest {
  action?: { kind: ActionKind; magnitude?: number };
  test?: { target: number };
  classify?: { target: number; class: number };
}

export interface CreateRequest {
  layout?: string;
  n_targets?: number;
  seed?: number;
  horizon?: number;
  budget?: number;
  fog_radius?: number | null;
  net?: { source: "car" } | { source: "random"; seed?: number; n_features?: number; arity?: number };
}

/* -------- trajectory log (JSON lines) ---------------------------------- */

export const LogRowSchema = z
  .object({
    kind: z.literal("row"),
    k: z.number().int().nonnegative(),
    pose: z.tuple([z.number(), z.number(), z.number()]),
    action: z.tuple([z.string(), z.number()]),
    blocked: z.boolean(),
    test: z.tuple([z.string(), z.number()]).nullable(),
    z: z.number().int().nullable(),
    o: z.array(z.number().int()),
    si: z.array(z.number().int()),
    J: z.number().int().nonnegative(),
    b_inc: z.number(),
    d_inc: z.number().nonnegative(),
    classify: z.tuple([z.number().int(), z.number().int()]).nullable(),
  })
  .strict();

export const LogHeaderSchema = z.object({
  kind: z.literal("header"),
  v: z.number().int(),
  workspace: z.record(z.unknown()),
  net: z.record(z.unknown()),
  pressure: z.record(z.unknown()),
  agent: z.record(z.unknown()),
  seed: z.number().int(),
  strategy: z.string().optional(),
});

/** Validate a downloaded JSON-lines trajectory log; returns the row count. */
export function validateTrajectoryLog(jsonl: string): number {
  const lines = jsonl.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("empty trajectory log");
  }
  LogHeaderSchema.parse(JSON.parse(lines[0] as string));
  for (const line of lines.slice(1)) {
    LogRowSchema.parse(JSON.parse(line));
  }
  return lines.length - 1;
}
