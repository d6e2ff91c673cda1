/** Browser entry: an SVG wireframe bound to one server session, with the
 * Schlegel controls (facet rebase, zoom, drags) and the spring console
 * (parameter sliders, step/run/pause).  All geometry comes from the server;
 * this file only wires DOM events to ViewerSession gestures. */

import { Client } from "./api.js";
import { pick } from "./render.js";
import { SPRING_SLIDERS, zoomFromSlider } from "./gestures.js";
import { ViewerSession } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const VIEW = 720;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

class App {
  readonly client: Client;
  session: ViewerSession;
  running = false;

  readonly banner = el("div", { class: "banner" });
  readonly status = el("div", { class: "status" });
  readonly controls = el("div", { class: "controls" });
  readonly svg = document.createElementNS(SVG_NS, "svg");

  constructor(base: string, name: string | null) {
    this.client = new Client(base);
    this.session = new ViewerSession(this.client, name);
    this.svg.setAttribute("viewBox", `${-VIEW / 2} ${-VIEW / 2} ${VIEW} ${VIEW}`);
    this.svg.setAttribute("width", String(VIEW));
    this.svg.setAttribute("height", String(VIEW));
  }

  async start(root: HTMLElement): Promise<void> {
    root.append(this.banner, this.controls, this.status, this.svg);
    await this.session.refresh();
    this.buildControls();
    this.bindPointer();
    this.paint();
  }

  paint(): void {
    const s = this.session;
    this.banner.textContent = s.banner ?? "";
    this.banner.style.display = s.banner === null ? "none" : "block";

    const sch = s.schlegel;
    const spr = s.spring;
    if (sch !== null) {
      this.status.textContent =
        `facet ${sch.facet} · zoom ${sch.zoom_exact}` +
        ` · ${sch.bounded ? "bounded" : "unbounded"} beyond-region`;
    } else if (spr !== null) {
      this.status.textContent =
        `iteration ${spr.iteration}` +
        ` · fluctuation ${spr.fluctuation.toExponential(3)}` +
        (spr.objective !== null ? " · vertical force on" : "");
    }

    while (this.svg.firstChild) this.svg.firstChild.remove();
    const draw = s.draw();
    const fit = 280;
    for (const line of draw.lines) {
      const e = document.createElementNS(SVG_NS, "line");
      e.setAttribute("x1", String(line.x1 * fit));
      e.setAttribute("y1", String(-line.y1 * fit));
      e.setAttribute("x2", String(line.x2 * fit));
      e.setAttribute("y2", String(-line.y2 * fit));
      e.setAttribute("stroke", line.color);
      e.setAttribute("stroke-width", String(line.width));
      this.svg.append(e);
    }
    for (const p of draw.points) {
      const c = document.createElementNS(SVG_NS, "circle");
      c.setAttribute("cx", String(p.x * fit));
      c.setAttribute("cy", String(-p.y * fit));
      c.setAttribute("r", String(p.r));
      c.setAttribute("fill", p.selected ? "#dd1111" : p.color);
      c.setAttribute("data-id", p.id);
      if (p.highlighted) c.setAttribute("stroke", "#dd9900");
      this.svg.append(c);
    }
    let ly = -VIEW / 2 + 16;
    for (const entry of draw.legend) {
      const t = document.createElementNS(SVG_NS, "text");
      t.setAttribute("x", String(-VIEW / 2 + 10));
      t.setAttribute("y", String(ly));
      t.setAttribute("fill", entry.color);
      t.textContent = entry.label;
      this.svg.append(t);
      ly += 16;
    }
  }

  buildControls(): void {
    this.controls.replaceChildren();
    const s = this.session;
    if (s.kind === "schlegel") this.buildSchlegelControls();
    if (s.kind === "spring") this.buildSpringControls();

    const toggle = el("label", {}, " hide artificial edges ");
    const box = el("input", { type: "checkbox" });
    box.addEventListener("change", () => {
      s.hideArtificial = box.checked;
      this.paint();
    });
    toggle.prepend(box);
    this.controls.append(toggle);
  }

  buildSchlegelControls(): void {
    const s = this.session;
    const zoom = el("input", {
      type: "range",
      min: "0",
      max: "1",
      step: "0.01",
    });
    zoom.addEventListener("change", () => {
      void s.setZoom(zoomFromSlider(Number(zoom.value))).then(() =>
        this.paint(),
      );
    });
    const exact = el("input", { type: "text", placeholder: "zoom, e.g. 1/3" });
    exact.addEventListener("change", () => {
      if (exact.value.trim() === "") return;
      void s.setZoom(exact.value.trim()).then(() => this.paint());
    });
    const rebase = el("button", {}, "rebase on marked facet");
    rebase.addEventListener("click", () => {
      void s.rebaseToSelection().then(() => {
        this.paint();
      });
    });
    const prev = el("button", {}, "previous cell");
    const next = el("button", {}, "next cell");
    const move = (d: number) => {
      const count = s.scene ? (s.scene.metadata.cells as unknown[]).length : 0;
      if (count === 0) return;
      const cur = s.highlightCell ?? -1;
      s.highlightCell = ((cur + d) % count + count) % count;
      this.paint();
    };
    prev.addEventListener("click", () => move(-1));
    next.addEventListener("click", () => move(1));
    this.controls.append(zoom, exact, rebase, prev, next);
  }

  buildSpringControls(): void {
    const s = this.session;
    for (const spec of SPRING_SLIDERS) {
      const wrap = el("label", {}, ` ${spec.label} `);
      const input = el("input", {
        type: "range",
        min: String(spec.min),
        max: String(spec.max),
        step: String(spec.step),
      });
      input.addEventListener("change", () => {
        void s
          .setSpringParams({ [spec.param]: Number(input.value) })
          .then(() => this.paint());
      });
      wrap.prepend(input);
      this.controls.append(wrap);
    }
    const stepBtn = el("button", {}, "step ×25");
    stepBtn.addEventListener("click", () => {
      void s.step(25).then(() => this.paint());
    });
    const runBtn = el("button", {}, "run");
    const pauseBtn = el("button", {}, "pause");
    const loop = async (): Promise<void> => {
      while (this.running) {
        await s.step(10);
        this.paint();
      }
    };
    runBtn.addEventListener("click", () => {
      if (!this.running) {
        this.running = true;
        void loop();
      }
    });
    pauseBtn.addEventListener("click", () => {
      this.running = false;
    });
    const vertical = el("button", {}, "toggle vertical force");
    vertical.addEventListener("click", () => {
      const current = s.spring?.params.delta_lin ?? 0;
      void s
        .setSpringParams({ delta_lin: current > 0 ? 0 : 1 })
        .then(() => this.paint());
    });
    this.controls.append(stepBtn, runBtn, pauseBtn, vertical);
  }

  bindPointer(): void {
    const s = this.session;
    const fit = 280;
    let dragId: string | null = null;
    let sx = 0;
    let sy = 0;
    let moved = false;

    const toScene = (ev: PointerEvent): [number, number] => {
      const r = this.svg.getBoundingClientRect();
      const x = ((ev.clientX - r.left) / r.width - 0.5) * VIEW;
      const y = ((ev.clientY - r.top) / r.height - 0.5) * VIEW;
      return [x / fit, -y / fit];
    };

    this.svg.addEventListener("pointerdown", (ev) => {
      const [x, y] = toScene(ev);
      dragId = pick(s.draw(), x, y, 12 / fit);
      sx = ev.clientX;
      sy = ev.clientY;
      moved = false;
      this.svg.setPointerCapture(ev.pointerId);
    });
    this.svg.addEventListener("pointermove", (ev) => {
      if (ev.buttons === 0) return;
      if (Math.abs(ev.clientX - sx) + Math.abs(ev.clientY - sy) > 3) {
        moved = true;
      }
      if (dragId === null) {
        s.orbit((ev.clientX - sx) * 0.01, (ev.clientY - sy) * 0.01);
        sx = ev.clientX;
        sy = ev.clientY;
        this.paint();
      }
    });
    this.svg.addEventListener("pointerup", (ev) => {
      const id = dragId;
      dragId = null;
      if (id === null) return;
      if (!moved) {
        s.toggleSelect(id);
        this.paint();
        return;
      }
      if (s.kind !== "schlegel") return;
      const dx = (ev.clientX - sx) / fit;
      const dy = -(ev.clientY - sy) / fit;
      void s.dragVertex(id, dx, dy).then(() => this.paint());
    });
  }
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (root === null) return;
  const base =
    new URLSearchParams(window.location.search).get("server") ??
    window.location.origin;
  const client = new Client(base);
  const sessions = await client.sessions();
  const names = Object.keys(sessions).sort();
  const app = new App(base, names.length === 1 ? null : (names[0] ?? null));
  await app.start(root);
}

if (typeof document !== "undefined") {
  void boot().catch((err) => {
    const root = document.getElementById("app");
    if (root !== null) {
      root.textContent = `failed to reach the drawing service: ${err}`;
    }
  });
}
