"""Drawing scenes: a renderer-independent graph picture plus exporters.

A Scene is nodes with 2D or 3D float positions, edges with an optional
colour class, optional face cycles (used by the OBJ exporter), and free-form
JSON metadata.  Serialization is deterministic: keys sorted, floats via
their shortest round-trip repr, so equal scenes give identical bytes.

Edge colours come from a fixed absolute scale indexed by dimension class
(1 red, 2 and 3 purple shades, 4 blue, higher clamps to blue); the scale is
not renormalized per scene.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DimensionMismatch, ValidationError
from .geom.graphs import Graph

DIMENSION_COLORS = {1: "#cc2222", 2: "#aa44aa", 3: "#7744bb", 4: "#2233cc"}


def color_for_class(k: int | None) -> str | None:
    if k is None:
        return None
    if k < 1:
        return "#888888"
    return DIMENSION_COLORS.get(k, DIMENSION_COLORS[4])


@dataclass(frozen=True)
class SceneNode:
    id: str
    position: tuple[float, ...]
    label: str = ""
    kind: str = "generic"
    color: str | None = None


@dataclass(frozen=True)
class SceneEdge:
    source: str
    target: str
    kind: str = "generic"
    color_class: int | None = None
    color: str | None = None


@dataclass(frozen=True)
class Scene:
    nodes: tuple[SceneNode, ...]
    edges: tuple[SceneEdge, ...]
    faces: tuple[tuple[str, ...], ...] = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate scene node ids")
        dims = {len(n.position) for n in self.nodes}
        if len(dims) > 1:
            raise ValidationError("mixed position dimensions")
        if dims and dims - {2, 3}:
            raise ValidationError("positions must be 2D or 3D")
        known = set(ids)
        for e in self.edges:
            if e.source not in known or e.target not in known:
                raise ValidationError(f"edge endpoint missing: {e.source}-{e.target}")
        for f in self.faces:
            for u in f:
                if u not in known:
                    raise ValidationError(f"face vertex missing: {u}")

    @property
    def dim(self) -> int:
        return len(self.nodes[0].position) if self.nodes else 0


def scene_from_embedding(G: Graph, positions: Mapping[str, Sequence[float]],
                         edge_classes: Mapping | None = None,
                         metadata: dict | None = None,
                         faces: Sequence[Sequence[str]] = ()) -> Scene:
    """Scene for a graph drawing; node kinds/labels carried over from the
    graph, edge colours from the given dimension classes."""
    nodes = []
    for u in G.nodes:
        p = positions[u]
        nodes.append(SceneNode(u, tuple(float(c) for c in p),
                               label=G.label(u), kind=G.kind(u)))
    edges = []
    classes = dict(edge_classes or {})
    for u, v in G.edges:
        k = classes.get((u, v), classes.get((v, u)))
        edges.append(SceneEdge(u, v, color_class=k, color=color_for_class(k)))
    return Scene(tuple(nodes), tuple(edges),
                 tuple(tuple(f) for f in faces), dict(metadata or {}))


def scene_from_polytope(P, metadata: dict | None = None) -> Scene:
    """3-polytope as a scene: vertex positions, skeleton edges, facet cycles
    ordered along each facet's boundary and oriented outward."""
    from .geom.lattice import graph_of
    from .geom.polytope import _bits

    if P.dim != 3:
        raise DimensionMismatch("polytope scenes are for 3-polytopes")
    G = graph_of(P)
    if P.embedding is None:
        scales = (1.0, 1.0, 1.0)
    else:
        # orthogonal chart axes have different lengths; rescaling per axis
        # makes the picture similar to the ambient shape
        scales = tuple(P.embedding.axis_scales())
    pos = {str(i): tuple(float(c) * s for c, s in zip(v, scales))
           for i, v in enumerate(P.vertices)}
    adj = G.adjacency()
    faces = []
    for fi, inc in enumerate(P.incidence):
        members = {str(i) for i in _bits(inc)}
        start = min(members, key=int)
        cycle = [start]
        prev = None
        cur = start
        while True:
            nxt = next(w for w in adj[cur] if w in members and w != prev)
            if nxt == start:
                break
            cycle.append(nxt)
            prev, cur = cur, nxt
        faces.append(_orient_outward(P, fi, cycle, pos))
    return scene_from_embedding(G, pos, metadata=metadata, faces=faces)


def _orient_outward(P, facet_idx: int, cycle: list[str], pos) -> tuple[str, ...]:
    a, _ = P.facets[facet_idx]  # chart-space outward normal; the per-axis
    # display rescaling is positive, so the orientation sign carries over
    nx = ny = nz = 0.0
    k = len(cycle)
    for i in range(k):
        x1, y1, z1 = pos[cycle[i]]
        x2, y2, z2 = pos[cycle[(i + 1) % k]]
        nx += (y1 - y2) * (z1 + z2)
        ny += (z1 - z2) * (x1 + x2)
        nz += (x1 - x2) * (y1 + y2)
    dot = nx * float(a[0]) + ny * float(a[1]) + nz * float(a[2])
    if dot < 0:
        cycle = [cycle[0]] + cycle[:0:-1]
    return tuple(cycle)


# -- serialization ----------------------------------------------------------

def scene_to_dict(s: Scene) -> dict:
    return {
        "nodes": [{"id": n.id, "position": list(n.position), "label": n.label,
                   "kind": n.kind, "color": n.color} for n in s.nodes],
        "edges": [{"source": e.source, "target": e.target, "kind": e.kind,
                   "color_class": e.color_class, "color": e.color}
                  for e in s.edges],
        "faces": [list(f) for f in s.faces],
        "metadata": s.metadata,
    }


def scene_from_dict(data: dict) -> Scene:
    try:
        nodes = tuple(SceneNode(d["id"], tuple(float(c) for c in d["position"]),
                                d.get("label", ""), d.get("kind", "generic"),
                                d.get("color"))
                      for d in data["nodes"])
        edges = tuple(SceneEdge(d["source"], d["target"], d.get("kind", "generic"),
                                d.get("color_class"), d.get("color"))
                      for d in data["edges"])
        faces = tuple(tuple(f) for f in data.get("faces", []))
        meta = dict(data.get("metadata", {}))
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed scene data: {e}") from None
    return Scene(nodes, edges, faces, meta)


def scene_to_json(s: Scene) -> str:
    return json.dumps(scene_to_dict(s), sort_keys=True, indent=1)


def scene_from_json(text: str) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"bad JSON: {e}") from None
    return scene_from_dict(data)


# -- exporters --------------------------------------------------------------

def export_scene(s: Scene, fmt: str) -> bytes:
    if fmt == "json":
        return scene_to_json(s).encode()
    if fmt == "svg":
        return export_svg(s).encode()
    if fmt == "obj":
        return export_obj(s).encode()
    raise ValidationError(f"unknown export format {fmt!r}")


def _project_2d(s: Scene) -> dict[str, tuple[float, float]]:
    if s.dim == 2:
        return {n.id: (n.position[0], n.position[1]) for n in s.nodes}
    cam = s.metadata.get("camera")
    if s.dim == 3 and cam:
        rows = [[float(c) for c in row] for row in cam]
        if len(rows) != 2 or any(len(r) != 3 for r in rows):
            raise DimensionMismatch("camera must be a 2x3 projection matrix")
        return {n.id: (sum(r * c for r, c in zip(rows[0], n.position)),
                       sum(r * c for r, c in zip(rows[1], n.position)))
                for n in s.nodes}
    raise DimensionMismatch(
        "SVG needs a 2D scene or a 3D scene with a camera in metadata")


def export_svg(s: Scene) -> str:
    pts = _project_2d(s)
    xs = [p[0] for p in pts.values()] or [0.0]
    ys = [p[1] for p in pts.values()] or [0.0]
    pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    scale = 600.0 / max(w, h)

    def sx(x): return (x - x0) * scale
    def sy(y): return (h - (y - y0)) * scale  # flip: svg y grows downward

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{round(w*scale)}" '
           f'height="{round(h*scale)}" viewBox="0 0 {round(w*scale)} {round(h*scale)}">']
    for e in s.edges:
        a, b = pts[e.source], pts[e.target]
        color = e.color or "#333333"
        out.append(f'<line x1="{sx(a[0]):.3f}" y1="{sy(a[1]):.3f}" '
                   f'x2="{sx(b[0]):.3f}" y2="{sy(b[1]):.3f}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
    for n in s.nodes:
        p = pts[n.id]
        fill = n.color or ("#cc6600" if n.kind == "taxon" else "#222222")
        out.append(f'<circle cx="{sx(p[0]):.3f}" cy="{sy(p[1]):.3f}" r="3.5" '
                   f'fill="{fill}"/>')
        if n.label and n.label != n.id:
            out.append(f'<text x="{sx(p[0])+5:.3f}" y="{sy(p[1])-5:.3f}" '
                       f'font-size="11">{n.label}</text>')
    out.append("</svg>")
    return "\n".join(out)


def export_obj(s: Scene) -> str:
    """Wavefront OBJ: vertex records, face records from the scene's faces,
    remaining edges as polyline records."""
    index = {n.id: i + 1 for i, n in enumerate(s.nodes)}
    out = ["# polydraw scene"]
    for n in s.nodes:
        x, y, z = (tuple(n.position) + (0.0,))[:3]
        out.append(f"v {x!r} {y!r} {z!r}")
    in_face = set()
    for f in s.faces:
        out.append("f " + " ".join(str(index[u]) for u in f))
        for k in range(len(f)):
            a, b = f[k], f[(k + 1) % len(f)]
            in_face.add(frozenset((a, b)))
    for e in s.edges:
        if frozenset((e.source, e.target)) not in in_face:
            out.append(f"l {index[e.source]} {index[e.target]}")
    out.append("")
    return "\n".join(out)
