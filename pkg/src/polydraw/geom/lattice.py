"""Face lattice, graph and dual graph of a polytope.

Faces are identified with their vertex sets, stored as bitmasks over the
polytope's vertex indices.  Every proper face is an intersection of facets,
so closing the facet vertex-sets under pairwise intersection enumerates all
of them; ranks come from exact affine-rank computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..rational import clear_denominators, int_rank, vsub
from .graphs import Graph, graph
from .polytope import Polytope, _bits


def _closure_masks(P: Polytope) -> tuple[int, ...]:
    """All face vertex-masks: top, facets and their iterated intersections.

    The empty face is included as mask 0.  Cached on the polytope.
    """
    masks = P._cache.get("face_masks")
    if masks is None:
        top = (1 << P.n_vertices) - 1
        seen = {top, 0}
        seen.update(P.incidence)
        queue = list(P.incidence)
        while queue:
            m = queue.pop()
            for f in P.incidence:
                g = m & f
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
        masks = tuple(sorted(seen))
        P._cache["face_masks"] = masks
    return masks


def _mask_rank(P: Polytope, mask: int) -> int:
    """Affine dimension of the vertex set selected by ``mask`` (-1 if empty)."""
    vs = [P.vertices[i] for i in _bits(mask)]
    if not vs:
        return -1
    if len(vs) <= 2:
        return len(vs) - 1
    base = vs[0]
    rows = [clear_denominators(vsub(p, base)) for p in vs[1:]]
    return int_rank(rows)


@dataclass(frozen=True)
class FaceLattice:
    """Graded face lattice: masks with ranks, -1 (empty face) through dim (P)."""

    dim: int
    faces: tuple[int, ...]           # vertex masks, sorted
    ranks: tuple[int, ...]           # parallel to faces
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def faces_of_rank(self, r: int) -> tuple[int, ...]:
        by = self._cache.get("by_rank")
        if by is None:
            by = {}
            for m, rk in zip(self.faces, self.ranks):
                by.setdefault(rk, []).append(m)
            by = {rk: tuple(ms) for rk, ms in by.items()}
            self._cache["by_rank"] = by
        return by.get(r, ())

    def f_vector(self) -> tuple[int, ...]:
        """(f_0, ..., f_{dim-1}): number of faces of each proper dimension."""
        return tuple(len(self.faces_of_rank(r)) for r in range(self.dim))

    def covers(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs (sub, super) of masks with rank difference one."""
        out = []
        for r in range(-1, self.dim):
            lower = self.faces_of_rank(r)
            upper = self.faces_of_rank(r + 1)
            for lo in lower:
                for up in upper:
                    if lo & up == lo:
                        out.append((lo, up))
        return tuple(out)

    def euler_characteristic(self) -> int:
        """Alternating sum over proper nonempty faces: sum_k (-1)^k f_k."""
        return sum((-1) ** r * len(self.faces_of_rank(r)) for r in range(self.dim))


def face_lattice(P: Polytope) -> FaceLattice:
    lat = P._cache.get("lattice")
    if lat is None:
        masks = _closure_masks(P)
        ranks = tuple(_mask_rank(P, m) for m in masks)
        lat = FaceLattice(P.dim, masks, ranks)
        P._cache["lattice"] = lat
    return lat


def faces_of_dim(P: Polytope, k: int) -> tuple[tuple[int, ...], ...]:
    """Vertex index tuples of all k-dimensional faces."""
    lat = face_lattice(P)
    return tuple(tuple(_bits(m)) for m in lat.faces_of_rank(k))


def graph_of(P: Polytope) -> Graph:
    """1-skeleton; node ids are vertex indices as strings.

    A pair of vertices forms an edge exactly when the smallest face
    containing both is one-dimensional, i.e. its vertex mask has two bits.
    """
    g = P._cache.get("graph")
    if g is None:
        nodes = [str(i) for i in range(P.n_vertices)]
        edges = []
        for m in _closure_masks(P):
            if m.bit_count() == 2:
                i = (m & -m).bit_length() - 1
                j = m.bit_length() - 1
                edges.append((str(i), str(j)))
        edges.sort(key=lambda e: (int(e[0]), int(e[1])))
        g = graph(nodes, edges, kinds={u: "primal" for u in nodes})
        P._cache["graph"] = g
    return g


def dual_graph_of(P: Polytope) -> Graph:
    """Facet adjacency graph: facets joined when they share a ridge."""
    g = P._cache.get("dual_graph")
    if g is None:
        nodes = [str(i) for i in range(P.n_facets)]
        edges = []
        for i in range(P.n_facets):
            for j in range(i + 1, P.n_facets):
                if _mask_rank(P, P.incidence[i] & P.incidence[j]) == P.dim - 2:
                    edges.append((str(i), str(j)))
        g = graph(nodes, edges, kinds={u: "dual" for u in nodes})
        P._cache["dual_graph"] = g
    return g


def is_simple(P: Polytope) -> bool:
    """Simple polytopes: every vertex lies on exactly dim facets."""
    return all(m.bit_count() == P.dim for m in P.vertex_facet_masks())


def f_vector(P: Polytope) -> tuple[int, ...]:
    return face_lattice(P).f_vector()


def vertices_of_face(P: Polytope, mask: int) -> Iterator[int]:
    return _bits(mask)
