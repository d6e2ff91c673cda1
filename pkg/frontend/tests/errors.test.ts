/** Scripted browser-flow test: server rejections must surface in the
 * banner and leave both the session state and the scene untouched. */

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { ViewerSession } from "../src/state.js";
import type { Scene } from "../src/types.js";
import { type ServerHandle, spawnServer } from "./helpers.js";

let server: ServerHandle;
let client: Client;
let ui: ViewerSession;

beforeAll(async () => {
  server = await spawnServer(8812, ["--schlegel", "cube 4", "--seed", "3"]);
  client = new Client(server.base);
  ui = new ViewerSession(client, null);
  await ui.refresh();
});

afterAll(async () => {
  await server.stop();
});

async function sceneBytes(): Promise<string> {
  return (await client.sceneRaw(null)).bytes;
}

describe("error surfacing", () => {
  it("shows the ambiguous-facet error inline and keeps the selection editable", async () => {
    const before = await sceneBytes();
    ui.toggleSelect("0"); // one vertex lies on several facets
    const ok = await ui.rebaseToSelection();
    expect(ok).toBe(false);
    expect(ui.banner).toContain("ambiguous facet");
    expect(ui.selection.has("0")).toBe(true); // still editable
    expect(await sceneBytes()).toBe(before);

    // refine the marked set to a full facet (any diagram cell is one)
    const cells = ui.scene!.metadata.cells as number[][];
    ui.selection.clear();
    for (const v of cells[0]!) ui.toggleSelect(String(v));
    expect(await ui.rebaseToSelection()).toBe(true);
    expect(ui.banner).toBeNull();
    expect(ui.selection.size).toBe(0);
    expect(await sceneBytes()).not.toBe(before);
  });

  it("rejects an invalid drag, snaps back, and stays usable", async () => {
    const before = await sceneBytes();
    const victim = ui.scene!.nodes.find((n) => n.kind !== "base")!;
    const ok = await ui.dragVertex(victim.id, 80, 80);
    expect(ok).toBe(false);
    expect(ui.banner).not.toBeNull();
    // the authoritative scene was re-fetched: nothing moved
    expect(await sceneBytes()).toBe(before);
    const node = ui.scene!.nodes.find((n) => n.id === victim.id)!;
    expect(node.position).toEqual(victim.position);

    // the session is not corrupted: the next valid gesture succeeds
    expect(await ui.setZoom("1/2")).toBe(true);
    expect(ui.banner).toBeNull();
    expect(ui.schlegel!.zoom_exact).toBe("1/2");
  });

  it("only accepted commands reach the server log", async () => {
    const log = await client.log(null);
    expect(log.map((c) => c.op)).toEqual(["select_facet", "zoom"]);
  });

  it("renders a malformed scene as a banner instead of crashing", () => {
    const broken = new ViewerSession(client, null);
    broken.scene = {
      nodes: [
        {
          id: "x",
          position: [1, 2, 3, 4, 5],
          label: "",
          kind: "generic",
          color: null,
        },
      ],
      edges: [],
      faces: [],
      metadata: {},
    } as Scene;
    const draw = broken.draw();
    expect(draw.points).toHaveLength(0);
    expect(broken.banner).toContain("malformed scene");
  });
});
