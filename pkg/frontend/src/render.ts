/** Pure scene-to-drawlist rendering: everything the DOM layer paints is
 * computed here, so it can be tested without a browser. */

import { type Camera, project } from "./camera.js";
import type { Scene } from "./types.js";

export class SceneFormatError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "SceneFormatError";
  }
}

/** Same dimension-class scale the server uses for edge color classes. */
const CLASS_COLORS: Record<number, string> = {
  1: "#cc2222",
  2: "#aa44aa",
  3: "#7744bb",
  4: "#2233cc",
};

const NODE_KIND_COLORS: Record<string, string> = {
  base: "#333333",
  generic: "#1166cc",
  primal: "#1166cc",
  dual: "#cc7700",
  generator: "#118833",
  taxon: "#118833",
};

const EDGE_KIND_COLORS: Record<string, string> = {
  base: "#333333",
  generic: "#777777",
  primal: "#1166cc",
  dual: "#cc7700",
  artificial: "#bbbbbb",
};

export function classColor(k: number | null): string | null {
  if (k === null) return null;
  if (k < 1) return "#888888";
  return CLASS_COLORS[k] ?? CLASS_COLORS[4]!;
}

export function nodeColor(kind: string, override: string | null): string {
  return override ?? NODE_KIND_COLORS[kind] ?? NODE_KIND_COLORS.generic!;
}

export function edgeColor(
  kind: string,
  colorClass: number | null,
  override: string | null,
): string {
  return (
    override ??
    classColor(colorClass) ??
    EDGE_KIND_COLORS[kind] ??
    EDGE_KIND_COLORS.generic!
  );
}

export interface DrawPoint {
  id: string;
  x: number;
  y: number;
  r: number;
  color: string;
  label: string;
  selected: boolean;
  highlighted: boolean;
}

export interface DrawLine {
  source: string;
  target: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
  width: number;
  highlighted: boolean;
}

export interface LegendEntry {
  label: string;
  color: string;
}

export interface DrawList {
  points: DrawPoint[];
  lines: DrawLine[];
  legend: LegendEntry[];
  dim: 2 | 3;
}

export interface RenderOptions {
  camera: Camera;
  hideArtificial?: boolean;
  selection?: ReadonlySet<string>;
  /** Index into metadata.cells (Schlegel scenes): nodes and edges of that
   * cell are flagged for emphasis. */
  highlightCell?: number | null;
}

function checkScene(scene: Scene): 2 | 3 {
  if (!Array.isArray(scene.nodes) || !Array.isArray(scene.edges)) {
    throw new SceneFormatError("scene needs node and edge lists");
  }
  let dim: 2 | 3 | null = null;
  const ids = new Set<string>();
  for (const n of scene.nodes) {
    if (typeof n.id !== "string" || !Array.isArray(n.position)) {
      throw new SceneFormatError("malformed scene node");
    }
    if (n.position.length !== 2 && n.position.length !== 3) {
      throw new SceneFormatError(
        `node ${n.id} has ${n.position.length} coordinates`,
      );
    }
    const d = n.position.length as 2 | 3;
    if (dim === null) dim = d;
    else if (dim !== d) throw new SceneFormatError("mixed node dimensions");
    if (ids.has(n.id)) throw new SceneFormatError(`duplicate node ${n.id}`);
    ids.add(n.id);
  }
  for (const e of scene.edges) {
    if (!ids.has(e.source) || !ids.has(e.target)) {
      throw new SceneFormatError(
        `edge ${e.source}-${e.target} references a missing node`,
      );
    }
  }
  return dim ?? 2;
}

/** Vertex ids of the requested cell from a Schlegel scene's metadata. */
export function cellNodeIds(scene: Scene, index: number): Set<string> {
  const cells = scene.metadata.cells;
  if (!Array.isArray(cells)) {
    throw new SceneFormatError("scene has no cell list");
  }
  const cell = cells[index];
  if (!Array.isArray(cell)) {
    throw new SceneFormatError(`no cell ${index} (of ${cells.length})`);
  }
  return new Set(cell.map((v) => String(v)));
}

export function cellCount(scene: Scene): number {
  const cells = scene.metadata.cells;
  return Array.isArray(cells) ? cells.length : 0;
}

export function renderScene(scene: Scene, opts: RenderOptions): DrawList {
  const dim = checkScene(scene);
  const selection = opts.selection ?? new Set<string>();
  const highlight =
    opts.highlightCell === null || opts.highlightCell === undefined
      ? null
      : cellNodeIds(scene, opts.highlightCell);

  const projected = new Map<string, [number, number]>();
  const points: DrawPoint[] = [];
  for (const n of scene.nodes) {
    const [x, y] = project(opts.camera, n.position);
    projected.set(n.id, [x, y]);
    const hi = highlight !== null && highlight.has(n.id);
    points.push({
      id: n.id,
      x,
      y,
      r: hi || selection.has(n.id) ? 6 : 4,
      color: nodeColor(n.kind, n.color),
      label: n.label,
      selected: selection.has(n.id),
      highlighted: hi,
    });
  }

  const lines: DrawLine[] = [];
  const legendSeen = new Map<string, string>();
  for (const e of scene.edges) {
    if (opts.hideArtificial && e.kind === "artificial") continue;
    const [x1, y1] = projected.get(e.source)!;
    const [x2, y2] = projected.get(e.target)!;
    const color = edgeColor(e.kind, e.color_class, e.color);
    const hi =
      highlight !== null && highlight.has(e.source) && highlight.has(e.target);
    lines.push({
      source: e.source,
      target: e.target,
      x1,
      y1,
      x2,
      y2,
      color,
      width: hi ? 2.5 : 1,
      highlighted: hi,
    });
    const label =
      e.color_class !== null ? `dimension ${e.color_class}` : e.kind;
    if (!legendSeen.has(label)) legendSeen.set(label, color);
  }

  const legend = [...legendSeen.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([label, color]) => ({ label, color }));
  return { points, lines, legend, dim };
}

/** Nearest drawn point within `radius` of the pointer, for picking. */
export function pick(
  draw: DrawList,
  x: number,
  y: number,
  radius = 10,
): string | null {
  let best: string | null = null;
  let bestDist = radius * radius;
  for (const p of draw.points) {
    const d = (p.x - x) * (p.x - x) + (p.y - y) * (p.y - y);
    if (d <= bestDist) {
      bestDist = d;
      best = p.id;
    }
  }
  return best;
}
