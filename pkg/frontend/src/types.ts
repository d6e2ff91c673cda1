/** Wire types for the polydraw drawing service. */

export interface SceneNode {
  id: string;
  position: number[];
  label: string;
  kind: string;
  color: string | null;
}

export interface SceneEdge {
  source: string;
  target: string;
  kind: string;
  color_class: number | null;
  color: string | null;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  faces: string[][];
  metadata: Record<string, unknown>;
}

/** Zoom, boundedness and viewpoint of a Schlegel session. */
export interface SchlegelSummary {
  facet: number;
  zoom: number;
  zoom_exact: string;
  bounded: boolean;
  viewpoint: string[];
}

export interface SpringParamsSummary {
  delta_rep: number;
  delta_visc: number;
  delta_lin: number;
  rest_length: number;
  step_scale: number;
  threshold: number;
  seed: number;
}

export interface SpringSummary {
  iteration: number;
  fluctuation: number;
  params: SpringParamsSummary;
  objective: Record<string, number> | null;
}

export type SessionKind = "schlegel" | "spring";

/** Every scene and command response carries the authoritative scene plus
 * the session's state summary. */
export interface ScenePayload {
  scene: Scene;
  state: SchlegelSummary | SpringSummary;
  session_kind: SessionKind;
}

/** Domain rejections come back as HTTP 409 with this body. */
export interface ErrorPayload {
  error: string;
  detail: string;
}

export interface CommandRecord {
  op: string;
  payload: Record<string, unknown>;
}

export function isSchlegelSummary(
  s: SchlegelSummary | SpringSummary,
): s is SchlegelSummary {
  return "zoom_exact" in s;
}
