"""Primal-dual graphs of simplicial complexes.

The pd-graph of a complex K is the disjoint union of its 1-skeleton (primal
nodes) and its facet-adjacency graph (dual nodes, one per facet, joined when
two facets share a ridge), plus an artificial edge between a primal node v
and a dual node F whenever v is a vertex of F.  Giving the artificial edges
a small desired length pulls each dual node into the interior of its facet
in a spring drawing, so the primal and dual pictures interleave correctly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .geom.graphs import Graph, graph
from . import spring
from .scene import Scene, SceneEdge, scene_from_embedding


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[str, ...]
    facets: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex labels")
        vs = set(self.vertices)
        sets = []
        for f in self.facets:
            if len(set(f)) != len(f):
                raise ValidationError(f"facet with repeated vertex: {f}")
            if not set(f) <= vs:
                raise ValidationError(f"facet uses unknown vertices: {f}")
            if not f:
                raise ValidationError("empty facet")
            sets.append(frozenset(f))
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and a <= b:
                    raise ValidationError("facet contained in another facet")

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def f_vector(self) -> tuple[int, ...]:
        """Number of faces in each dimension, counting every subset of a
        facet once."""
        faces: set[frozenset] = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(f, k))
        top = max(len(f) for f in faces)
        out = [0] * top
        for f in faces:
            out[len(f) - 1] += 1
        return tuple(out)

    def skeleton_edges(self) -> list[tuple[str, str]]:
        idx = {v: i for i, v in enumerate(self.vertices)}
        es = set()
        for f in self.facets:
            for a, b in itertools.combinations(f, 2):
                es.add((a, b) if idx[a] < idx[b] else (b, a))
        return sorted(es, key=lambda e: (idx[e[0]], idx[e[1]]))


def simplicial_complex(vertices: Iterable[str],
                       facets: Iterable[Sequence[str]]) -> SimplicialComplex:
    return SimplicialComplex(tuple(str(v) for v in vertices),
                             tuple(tuple(str(v) for v in f) for f in facets))


def complex_from_text(text: str) -> SimplicialComplex:
    """JSON {"vertices": [...], "facets": [[...]]} or OFF-style text
    (counts line, coordinate lines, then faces as index lists)."""
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        return simplicial_complex(data["vertices"], data["facets"])
    lines = [l.split("#")[0].strip() for l in text.splitlines()]
    lines = [l for l in lines if l]
    if lines and lines[0].upper() == "OFF":
        lines = lines[1:]
    try:
        nv, nf = int(lines[0].split()[0]), int(lines[0].split()[1])
        body = lines[1:]
        facets = []
        for l in body[nv:nv + nf]:
            parts = l.split()
            k = int(parts[0])
            facets.append([parts[1 + i] for i in range(k)])
        return simplicial_complex([str(i) for i in range(nv)], facets)
    except (IndexError, ValueError) as e:
        raise ValidationError(f"cannot parse complex: {e}") from None


@dataclass(frozen=True)
class PdGraph:
    """Primal-dual graph; node ids are "p:<label>" and "d:<facet index>"."""

    complex: SimplicialComplex
    graph: Graph
    edge_kinds: dict = field(compare=False)
    non_manifold: bool = False

    def primal_id(self, v: str) -> str:
        return f"p:{v}"

    def dual_id(self, i: int) -> str:
        return f"d:{i}"

    def counts(self) -> dict[str, int]:
        c = {"primal": 0, "dual": 0, "artificial": 0}
        for e in self.graph.edges:
            c[self.edge_kinds[e]] += 1
        return c


def build_pd_graph(K: SimplicialComplex) -> PdGraph:
    pid = {v: f"p:{v}" for v in K.vertices}
    nodes = [pid[v] for v in K.vertices]
    kinds = {pid[v]: "primal" for v in K.vertices}
    labels = {pid[v]: v for v in K.vertices}
    for i in range(len(K.facets)):
        nodes.append(f"d:{i}")
        kinds[f"d:{i}"] = "dual"
        labels[f"d:{i}"] = f"F{i}"
    edges = []
    ekind = {}
    for a, b in K.skeleton_edges():
        edges.append((pid[a], pid[b]))
        ekind[(pid[a], pid[b])] = "primal"
    # dual adjacency: facets sharing a set that is a ridge of both; a ridge
    # with three or more cofacets gets the full clique and flags the complex
    ridges: dict[frozenset, list[int]] = {}
    for i, f in enumerate(K.facets):
        for r in itertools.combinations(sorted(f), len(f) - 1):
            ridges.setdefault(frozenset(r), []).append(i)
    non_manifold = False
    dual_pairs = set()
    for r, cof in ridges.items():
        if len(cof) > 2:
            non_manifold = True
        for i, j in itertools.combinations(sorted(set(cof)), 2):
            if len(K.facets[i]) == len(r) + 1 and len(K.facets[j]) == len(r) + 1:
                dual_pairs.add((i, j))
    for i, j in sorted(dual_pairs):
        edges.append((f"d:{i}", f"d:{j}"))
        ekind[(f"d:{i}", f"d:{j}")] = "dual"
    for i, f in enumerate(K.facets):
        for v in f:
            edges.append((pid[v], f"d:{i}"))
            ekind[(pid[v], f"d:{i}")] = "artificial"
    G = graph(nodes, edges, kinds=kinds, labels=labels)
    ekind = {G.edge_key(u, v): k for (u, v), k in ekind.items()}
    return PdGraph(K, G, ekind, non_manifold)


def pd_lengths(pd: PdGraph, primal: float = 1.0, dual: float = 1.0,
               artificial: float = 0.3) -> dict:
    if min(primal, dual, artificial) <= 0:
        raise ValidationError("desired lengths must be positive")
    table = {"primal": primal, "dual": dual, "artificial": artificial}
    return {e: table[pd.edge_kinds[e]] for e in pd.graph.edges}


def embed_pd(pd: PdGraph, lengths: Mapping | None = None,
             params: spring.SpringParams | None = None, seed: int = 0):
    if lengths is None:
        lengths = pd_lengths(pd)
    if params is None:
        lmin = min(lengths.values()) if lengths else 1.0
        maxdeg = max((pd.graph.degree(u) for u in pd.graph.nodes), default=1)
        params = spring.SpringParams(
            seed=seed, step_scale=min(0.2, 3.0 * lmin / (2 * maxdeg)))
    return spring.run(pd.graph, params, lengths=lengths)


def visualize_pd(pd: PdGraph, lengths: Mapping | None = None,
                 params: spring.SpringParams | None = None,
                 seed: int = 0, hide_artificial: bool = False) -> Scene:
    """Spring drawing of the pd-graph; artificial edges steer the layout and
    can be left out of the picture afterwards."""
    st, converged = embed_pd(pd, lengths, params, seed=seed)
    meta = {
        "kind": "pdgraph",
        "converged": converged,
        "iterations": st.iteration,
        "non_manifold": pd.non_manifold,
        "counts": pd.counts(),
        "dual_containment": dual_containment_fraction(pd, st.positions()),
    }
    S = scene_from_embedding(pd.graph, st.positions(), metadata=meta)
    edges = tuple(SceneEdge(e.source, e.target,
                            kind=pd.edge_kinds[(e.source, e.target)])
                  for e in S.edges)
    if hide_artificial:
        edges = tuple(e for e in edges if e.kind != "artificial")
    return Scene(S.nodes, edges, S.faces, S.metadata)


def dual_containment_fraction(pd: PdGraph, positions: Mapping) -> float:
    """Fraction of facets whose dual node sits inside the convex hull of the
    facet's primal nodes in the embedding (barycentric test, 1e-9 slack)."""
    K = pd.complex
    good = 0
    for i, f in enumerate(K.facets):
        P = np.array([[float(c) for c in positions[f"p:{v}"]] for v in f])
        q = np.array([float(c) for c in positions[f"d:{i}"]])
        A = np.vstack([P.T, np.ones(len(f))])
        b = np.concatenate([q, [1.0]])
        w, res, *_ = np.linalg.lstsq(A, b, rcond=None)
        if np.allclose(A @ w, b, atol=1e-9) and np.all(w >= -1e-9):
            good += 1
    return good / max(len(K.facets), 1)


def tetrahedron_boundary() -> SimplicialComplex:
    vs = ["a", "b", "c", "d"]
    return simplicial_complex(vs, itertools.combinations(vs, 3))


def cube4_triangulation() -> SimplicialComplex:
    """Sixteen-simplex triangulation of the 4-cube: cut the eight
    odd-parity corners, then cone the remaining cross-polytope core
    from 0000 over its facets opposite to that vertex."""
    def lab(u):
        return format(u, "04b")

    vertices = [lab(u) for u in range(16)]
    facets = []
    for u in range(16):
        if bin(u).count("1") % 2 == 1:
            facets.append([lab(u)] + [lab(u ^ (1 << k)) for k in range(4)])
    # even vertices form a cross-polytope with antipodal pairs (v, v ^ 15);
    # its facets pick one vertex from each pair
    pairs = []
    seen = set()
    for u in range(16):
        if bin(u).count("1") % 2 == 0 and u not in seen:
            pairs.append((u, u ^ 15))
            seen.update((u, u ^ 15))
    for choice in itertools.product(*pairs):
        if 15 in choice:
            facets.append([lab(0)] + [lab(u) for u in choice if u != 0])
    return simplicial_complex(vertices, facets)


def kuhn_cells(origin: tuple[int, int, int]) -> list[list[str]]:
    """Six-tetrahedra triangulation of a unit grid cube, compatible across
    neighbouring cubes (all cubes are cut along the same diagonal)."""
    def lab(p):
        return ",".join(str(c) for c in p)

    x, y, z = origin
    out = []
    for perm in itertools.permutations(range(3)):
        p = [x, y, z]
        cell = [lab(p)]
        for axis in perm:
            p = list(p)
            p[axis] += 1
            cell.append(lab(p))
        out.append(cell)
    return out


def genus2_solid() -> SimplicialComplex:
    """Solid 5 x 3 x 1 block of grid cubes with two cubes removed to cut
    two holes, each cube triangulated into six tetrahedra."""
    holes = {(1, 1, 0), (3, 1, 0)}
    facets = []
    used = set()
    for x in range(5):
        for y in range(3):
            if (x, y, 0) in holes:
                continue
            for cell in kuhn_cells((x, y, 0)):
                facets.append(cell)
                used.update(cell)
    order = sorted(used, key=lambda s: tuple(int(c) for c in s.split(",")))
    return simplicial_complex(order, facets)
