"""Tight spans of finite metric spaces.

For a dissimilarity delta on taxa t_1..t_n the unbounded polyhedron

    P_delta = { x in R^n : x_i + x_j >= delta(t_i, t_j) for all i <= j }

(i = j included, forcing x >= 0) has a bounded subcomplex whose faces encode
how tree-like the metric is: trees give maximal bounded dimension 1, and
each taxon t_i appears as the vertex h_i = (delta(t_i, t_j))_j.  Drawings
use the spring embedder on the subcomplex's 1-skeleton, either with uniform
desired lengths (combinatorial) or with lengths from max-norm distances of
the vertex coordinates (approximate_metric); edges are coloured by the
highest dimension of a bounded face containing them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidMetric, ValidationError
from .geom.graphs import Graph, graph
from .geom.polytope import Polyhedron, _bits, faces_of_polyhedron, polyhedron_from_inequalities
from .rational import Vec
from . import spring
from .scene import Scene, scene_from_embedding


@dataclass(frozen=True)
class Metric:
    taxa: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.taxa)
        if len(set(self.taxa)) != n:
            raise InvalidMetric("duplicate taxa")
        if len(self.dist) != n or any(len(r) != n for r in self.dist):
            raise InvalidMetric("matrix shape does not match taxa")
        for i in range(n):
            if self.dist[i][i] != 0:
                raise InvalidMetric("diagonal must be zero")
            for j in range(n):
                if self.dist[i][j] != self.dist[j][i]:
                    raise InvalidMetric("matrix must be symmetric")
                if i != j and self.dist[i][j] <= 0:
                    raise InvalidMetric("off-diagonal entries must be positive")

    @property
    def n(self) -> int:
        return len(self.taxa)

    def row(self, i: int) -> Vec:
        return tuple(self.dist[i])


def metric(taxa: Sequence[str], matrix: Sequence[Sequence]) -> Metric:
    return Metric(tuple(taxa),
                  tuple(tuple(Fraction(x) for x in row) for row in matrix))


def metric_from_text(text: str) -> Metric:
    """Parse a metric: JSON {"taxa": [...], "matrix": [[...]]} or a plain
    table, one line per taxon: label followed by the upper-triangle row
    (starting at the diagonal zero) or the full row."""
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        return metric(data["taxa"], data["matrix"])
    taxa = []
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        taxa.append(parts[0])
        rows.append([Fraction(x) for x in parts[1:]])
    n = len(taxa)
    lens = [len(r) for r in rows]
    full = [[Fraction(0)] * n for _ in range(n)]
    if lens == [n] * n:
        full = [list(r) for r in rows]
    elif lens == [n - i for i in range(n)]:
        for i, row in enumerate(rows):
            for k, x in enumerate(row):
                full[i][i + k] = x
                full[i + k][i] = x
    else:
        raise InvalidMetric(f"rows must be full or upper-triangular, got lengths {lens}")
    return metric(taxa, full)


def polyhedron_of_metric(m: Metric) -> Polyhedron:
    n = m.n
    ineqs = []
    for i in range(n):
        for j in range(i, n):
            a = [Fraction(0)] * n
            a[i] -= 1
            a[j] -= 1
            ineqs.append((tuple(a), -m.dist[i][j]))
    return polyhedron_from_inequalities(ineqs, n)


@dataclass(frozen=True)
class BoundedComplex:
    """Bounded faces of a pointed polyhedron, as vertex-index sets with
    dimensions; edge_dims gives each 1-face the highest dimension of a
    bounded face containing it."""

    vertices: tuple[Vec, ...]
    faces: tuple[tuple[tuple[int, ...], int], ...]
    edge_dims: dict
    max_dim: int

    def edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(f) for f, d in self.faces if d == 1)


def bounded_subcomplex(poly: Polyhedron) -> BoundedComplex:
    all_faces = faces_of_polyhedron(poly)
    bounded = [(vm, d) for vm, rm, d in all_faces if rm == 0]
    faces = []
    max_dim = 0
    for vm, d in bounded:
        faces.append((tuple(_bits(vm)), d))
        max_dim = max(max_dim, d)
    edge_dims = {}
    for vm, d in bounded:
        if d != 1:
            continue
        e = tuple(_bits(vm))
        top = max(dd for vm2, dd in bounded if vm & vm2 == vm)
        edge_dims[e] = top
    return BoundedComplex(tuple(poly.vertices), tuple(sorted(faces)),
                          edge_dims, max_dim)


def taxon_vertex_map(m: Metric, complex_: BoundedComplex) -> dict[str, int | None]:
    """Taxon t_i matched to the subcomplex vertex equal to its distance row
    (always a vertex for a genuine metric); None when absent."""
    lookup = {v: k for k, v in enumerate(complex_.vertices)}
    return {t: lookup.get(m.row(i)) for i, t in enumerate(m.taxa)}


def tight_span(m: Metric) -> tuple[Polyhedron, BoundedComplex, dict]:
    poly = polyhedron_of_metric(m)
    comp = bounded_subcomplex(poly)
    return poly, comp, taxon_vertex_map(m, comp)


def is_treelike(m: Metric) -> bool:
    """Tree metrics have tight spans with no bounded face above dimension 1."""
    _, comp, _ = tight_span(m)
    return comp.max_dim <= 1


def skeleton_graph(m: Metric, comp: BoundedComplex,
                   taxa_map: dict) -> Graph:
    """1-skeleton of the bounded subcomplex with taxa marked and labelled."""
    inv = {v: t for t, v in taxa_map.items() if v is not None}
    ids = {}
    for k in range(len(comp.vertices)):
        ids[k] = f"t:{inv[k]}" if k in inv else f"v{k}"
    nodes = [ids[k] for k in range(len(comp.vertices))]
    kinds = {ids[k]: ("taxon" if k in inv else "generic") for k in ids}
    labels = {ids[k]: (inv[k] if k in inv else "") for k in ids}
    edges = [(ids[a], ids[b]) for a, b in comp.edges()]
    return graph(nodes, edges, kinds=kinds, labels=labels)


def visualize_tightspan(m: Metric, mode: str = "approximate_metric",
                        params: spring.SpringParams | None = None,
                        seed: int = 0) -> Scene:
    """Spring drawing of the bounded subcomplex.

    combinatorial: every edge wants the default rest length.
    approximate_metric: desired lengths are max-norm distances between the
    endpoint coordinate vectors, normalized to unit mean (the iteration is
    only stable near unit lengths; ratios are preserved and the scale factor
    is recorded in the metadata).
    """
    if mode not in ("combinatorial", "approximate_metric"):
        raise ValidationError(f"unknown mode {mode!r}")
    poly, comp, tmap = tight_span(m)
    G = skeleton_graph(m, comp, tmap)
    lengths = None
    scale = None
    if mode == "approximate_metric":
        coords = {}
        inv = {v: t for t, v in tmap.items() if v is not None}
        for k, v in enumerate(comp.vertices):
            nid = f"t:{inv[k]}" if k in inv else f"v{k}"
            coords[nid] = [float(c) for c in v]
        raw = spring.desired_lengths_from_coordinates(G, coords, norm="max")
        scale = sum(raw.values()) / len(raw) if raw else 1.0
        lengths = {e: l / scale for e, l in raw.items()}
    if params is None:
        # keep the update linearly stable: damp the step below the
        # stiffest spring's oscillation limit
        lmin = min(lengths.values()) if lengths else 1.0
        maxdeg = max((G.degree(u) for u in G.nodes), default=1)
        params = spring.SpringParams(
            seed=seed, step_scale=min(0.2, 3.0 * lmin / (2 * maxdeg)))
    st, converged = spring.run(G, params, lengths=lengths)
    order = {u: k for k, u in enumerate(G.nodes)}
    idx_of = {k: u for k, u in enumerate(G.nodes)}
    classes = {}
    for (a, b), dim in comp.edge_dims.items():
        classes[(idx_of[a], idx_of[b])] = dim
    meta = {
        "kind": "tightspan",
        "mode": mode,
        "max_dim": comp.max_dim,
        "treelike": comp.max_dim <= 1,
        "converged": converged,
        "iterations": st.iteration,
    }
    if scale is not None:
        meta["length_scale"] = scale
    return scene_from_embedding(G, st.positions(), edge_classes=classes,
                                metadata=meta)
