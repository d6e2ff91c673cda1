/** Viewer session: the single source of geometric truth is the server.
 * Every gesture posts a command and adopts the authoritative scene from the
 * response; rejected commands surface the server's error in a banner and
 * leave the scene exactly as it was. */

import { ApiError, type Client } from "./api.js";
import { type Camera, DEFAULT_CAMERA, dragVector, rotate } from "./camera.js";
import {
  cellCount,
  type DrawList,
  renderScene,
  SceneFormatError,
} from "./render.js";
import {
  isSchlegelSummary,
  type Scene,
  type ScenePayload,
  type SchlegelSummary,
  type SessionKind,
  type SpringSummary,
} from "./types.js";

export class ViewerSession {
  scene: Scene | null = null;
  summary: SchlegelSummary | SpringSummary | null = null;
  kind: SessionKind | null = null;
  readonly selection = new Set<string>();
  camera: Camera = { ...DEFAULT_CAMERA };
  banner: string | null = null;
  hideArtificial = false;
  highlightCell: number | null = null;

  constructor(
    readonly client: Client,
    readonly session: string | null,
  ) {}

  async refresh(): Promise<void> {
    this.adopt(await this.client.scene(this.session));
  }

  private adopt(payload: ScenePayload): void {
    this.scene = payload.scene;
    this.summary = payload.state;
    this.kind = payload.session_kind;
    this.banner = null;
    if (this.highlightCell !== null &&
        this.highlightCell >= cellCount(payload.scene)) {
      this.highlightCell = null;
    }
    for (const id of this.selection) {
      if (!payload.scene.nodes.some((n) => n.id === id)) {
        this.selection.delete(id);
      }
    }
  }

  /** Run one gesture; on a domain rejection, show the banner and re-fetch
   * the authoritative scene so any optimistic pointer feedback snaps back. */
  private async gesture(
    send: () => Promise<ScenePayload>,
  ): Promise<boolean> {
    try {
      this.adopt(await send());
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        await this.refresh().catch(() => {});
        this.banner = err.message; // after the refresh, which clears it
        return false;
      }
      throw err;
    }
  }

  draw(): DrawList {
    if (this.scene === null) {
      return { points: [], lines: [], legend: [], dim: 2 };
    }
    try {
      return renderScene(this.scene, {
        camera: this.camera,
        hideArtificial: this.hideArtificial,
        selection: this.selection,
        highlightCell: this.highlightCell,
      });
    } catch (err) {
      if (err instanceof SceneFormatError) {
        this.banner = `malformed scene: ${err.message}`;
        return { points: [], lines: [], legend: [], dim: 2 };
      }
      throw err;
    }
  }

  toggleSelect(id: string): void {
    if (this.selection.has(id)) this.selection.delete(id);
    else this.selection.add(id);
  }

  orbit(dyaw: number, dpitch: number): void {
    this.camera = rotate(this.camera, dyaw, dpitch);
  }

  get schlegel(): SchlegelSummary | null {
    return this.summary !== null && isSchlegelSummary(this.summary)
      ? this.summary
      : null;
  }

  get spring(): SpringSummary | null {
    return this.summary !== null && !isSchlegelSummary(this.summary)
      ? this.summary
      : null;
  }

  /** Rebase the diagram on the facet spanned by the selected vertices.
   * The selection is kept when the server rejects it, so the user can
   * refine the marked set and try again. */
  async rebaseToSelection(): Promise<boolean> {
    const marked = [...this.selection].map(Number).sort((a, b) => a - b);
    const ok = await this.gesture(() =>
      this.client.selectFacet(this.session, marked),
    );
    if (ok) this.selection.clear();
    return ok;
  }

  async setZoom(zeta: number | string): Promise<boolean> {
    return this.gesture(() => this.client.zoom(this.session, zeta));
  }

  private axisScales(): number[] {
    const scales = this.scene?.metadata.axis_scales;
    if (!Array.isArray(scales)) {
      throw new SceneFormatError("scene has no axis scales");
    }
    return scales as number[];
  }

  private scenePosition(id: string): number[] {
    const node = this.scene?.nodes.find((n) => n.id === id);
    if (!node) throw new SceneFormatError(`no node ${id}`);
    return node.position;
  }

  /** Drag a vertex by a pointer displacement.  Base-facet vertices send a
   * chart displacement; all other vertices send the chart point they should
   * land on.  Scene coordinates are axis-rescaled chart coordinates, so the
   * conversion divides by the recorded scales. */
  async dragVertex(id: string, dx: number, dy: number): Promise<boolean> {
    if (this.scene === null) return false;
    const scales = this.axisScales();
    const pos = this.scenePosition(id);
    const delta = dragVector(this.camera, pos.length as 2 | 3, dx, dy);
    const kind = this.scene.nodes.find((n) => n.id === id)?.kind;
    if (kind === "base") {
      const displacement = delta.map((d, i) => d / scales[i]!);
      return this.gesture(() =>
        this.client.dragFacetVertex(this.session, Number(id), displacement),
      );
    }
    const target = pos.map((x, i) => (x + delta[i]!) / scales[i]!);
    return this.gesture(() =>
      this.client.dragNonFacetVertex(this.session, Number(id), target),
    );
  }

  async setSpringParams(params: Record<string, number>): Promise<boolean> {
    return this.gesture(() => this.client.springParams(this.session, params));
  }

  async step(count: number): Promise<boolean> {
    return this.gesture(() => this.client.springStep(this.session, count));
  }
}
