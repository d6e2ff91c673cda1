/** Typed fetch client for the drawing service.  Every request the client
 * sends can be recorded verbatim, so a user session doubles as a replayable
 * gesture script. */

import type { CommandRecord, ErrorPayload, ScenePayload } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ErrorPayload | null,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

/** One HTTP request exactly as sent: enough to replay it byte for byte. */
export interface RecordedRequest {
  method: "GET" | "POST";
  path: string;
  session: string | null;
  body: string | null;
}

export type Recorder = (req: RecordedRequest) => void;

function errorFrom(status: number, text: string): ApiError {
  let payload: ErrorPayload | null = null;
  let detail = text;
  try {
    const parsed = JSON.parse(text);
    if (parsed && typeof parsed.error === "string") {
      payload = parsed as ErrorPayload;
      detail = `${payload.error}: ${payload.detail}`;
    } else if (parsed && parsed.detail !== undefined) {
      detail =
        typeof parsed.detail === "string"
          ? parsed.detail
          : JSON.stringify(parsed.detail);
    }
  } catch {
    // non-JSON body: keep the raw text
  }
  return new ApiError(status, payload, detail);
}

export async function replayRequest(
  base: string,
  req: RecordedRequest,
): Promise<Response> {
  const url = new URL(req.path, base);
  if (req.session !== null) url.searchParams.set("session", req.session);
  return fetch(url, {
    method: req.method,
    headers: req.body === null ? {} : { "content-type": "application/json" },
    body: req.body,
  });
}

export class Client {
  constructor(
    readonly base: string,
    readonly recorder: Recorder | null = null,
  ) {}

  private async request(
    method: "GET" | "POST",
    path: string,
    session: string | null,
    body: string | null,
  ): Promise<Response> {
    const record: RecordedRequest = { method, path, session, body };
    this.recorder?.(record);
    return replayRequest(this.base, record);
  }

  private async json<T>(
    method: "GET" | "POST",
    path: string,
    session: string | null,
    body: unknown = null,
  ): Promise<T> {
    const resp = await this.request(
      method,
      path,
      session,
      body === null ? null : JSON.stringify(body),
    );
    const text = await resp.text();
    if (!resp.ok) throw errorFrom(resp.status, text);
    return JSON.parse(text) as T;
  }

  async sessions(): Promise<Record<string, string>> {
    return this.json("GET", "/sessions", null);
  }

  /** Scene with the raw response bytes, for byte-level parity checks. */
  async sceneRaw(
    session: string | null,
  ): Promise<{ bytes: string; payload: ScenePayload }> {
    const resp = await this.request("GET", "/scene", session, null);
    const bytes = await resp.text();
    if (!resp.ok) throw errorFrom(resp.status, bytes);
    return { bytes, payload: JSON.parse(bytes) as ScenePayload };
  }

  async scene(session: string | null): Promise<ScenePayload> {
    return (await this.sceneRaw(session)).payload;
  }

  async log(session: string | null): Promise<CommandRecord[]> {
    const d = await this.json<{ commands: CommandRecord[] }>(
      "GET",
      "/log",
      session,
    );
    return d.commands;
  }

  async selectFacet(
    session: string | null,
    marked: number[],
  ): Promise<ScenePayload> {
    return this.json("POST", "/schlegel/select_facet", session, { marked });
  }

  async zoom(
    session: string | null,
    zeta: number | string,
  ): Promise<ScenePayload> {
    return this.json("POST", "/schlegel/zoom", session, { zeta });
  }

  async dragFacetVertex(
    session: string | null,
    vertex: number,
    displacement: (number | string)[],
  ): Promise<ScenePayload> {
    return this.json("POST", "/schlegel/drag", session, {
      vertex,
      displacement,
    });
  }

  async dragNonFacetVertex(
    session: string | null,
    vertex: number,
    target: (number | string)[],
  ): Promise<ScenePayload> {
    return this.json("POST", "/schlegel/drag", session, { vertex, target });
  }

  async springParams(
    session: string | null,
    params: Record<string, number>,
  ): Promise<ScenePayload> {
    return this.json("POST", "/spring/params", session, params);
  }

  async springStep(
    session: string | null,
    count: number,
  ): Promise<ScenePayload> {
    return this.json("POST", "/spring/step", session, { count });
  }
}
