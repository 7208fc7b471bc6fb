/**
 * Protocol client: one request in flight at a time, every response
 * schema-validated before it reaches the view model.
 */

import {
  CommandRequest,
  CommandResponse,
  CommandResponseSchema,
  Created,
  CreatedSchema,
  CreateRequest,
  EndMessage,
  Frame,
  FrameSchema,
  PROTOCOL_VERSION,
} from "./protocol.js";

/** Minimal transport: POST/GET/DELETE JSON against the session service. */
export interface Transport {
  post(path: string, body: unknown): Promise<unknown>;
  get(path: string): Promise<unknown>;
  getText(path: string): Promise<string>;
  delete(path: string): Promise<unknown>;
}

export class HttpTransport implements Transport {
  constructor(private readonly baseUrl: string) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw new Error(`HTTP ${response.status} for ${path}`);
    }
    return response;
  }

  async post(path: string, body: unknown): Promise<unknown> {
    const response = await this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return response.json();
  }

  async get(path: string): Promise<unknown> {
    return (await this.request(path)).json();
  }

  async getText(path: string): Promise<string> {
    return (await this.request(path)).text();
  }

  async delete(path: string): Promise<unknown> {
    return (await this.request(path, { method: "DELETE" })).json();
  }
}

export class ProtocolMismatchError extends Error {}

export class SessionClient {
  private sessionId: string | null = null;
  private inFlight = false;

  constructor(private readonly transport: Transport) {}

  get session(): string | null {
    return this.sessionId;
  }

  async create(request: CreateRequest): Promise<Created> {
    const raw = await this.transport.post("/v1/session", request);
    const maybeError = raw as { kind?: string; message?: string };
    if (maybeError.kind === "error") {
      throw new Error(maybeError.message ?? "session create failed");
    }
    const created = CreatedSchema.parse(raw);
    if (created.v !== PROTOCOL_VERSION) {
      throw new ProtocolMismatchError(`server protocol v${created.v}`);
    }
    this.sessionId = created.session;
    return created;
  }

  /** One command, one schema-validated response.  Strictly sequential. */
  async command(request: CommandRequest): Promise<CommandResponse> {
    if (this.sessionId === null) {
      throw new Error("no live session");
    }
    if (this.inFlight) {
      throw new Error("a command is already in flight");
    }
    this.inFlight = true;
    try {
      const raw = await this.transport.post(
        `/v1/session/${this.sessionId}/command`,
        request,
      );
      return CommandResponseSchema.parse(raw);
    } finally {
      this.inFlight = false;
    }
  }

  async frame(): Promise<Frame> {
    if (this.sessionId === null) {
      throw new Error("no live session");
    }
    return FrameSchema.parse(
      await this.transport.get(`/v1/session/${this.sessionId}/frame`),
    );
  }

  async downloadLog(): Promise<string> {
    if (this.sessionId === null) {
      throw new Error("no live session");
    }
    return this.transport.getText(`/v1/session/${this.sessionId}/log`);
  }

  async end(): Promise<EndMessage> {
    if (this.sessionId === null) {
      throw new Error("no live session");
    }
    const raw = await this.transport.delete(`/v1/session/${this.sessionId}`);
    this.sessionId = null;
    const parsed = CommandResponseSchema.parse(raw);
    if (parsed.kind !== "end") {
      throw new Error(`expected end message, got ${parsed.kind}`);
    }
    return parsed;
  }
}

/** Extract the frame embedded in any non-error command response. */
export function frameOf(response: CommandResponse): Frame | null {
  if (response.kind === "frame") {
    return response;
  }
  if (
    response.kind === "reveal_result" ||
    response.kind === "classify_result"
  ) {
    return response.frame;
  }
  return null;
}
