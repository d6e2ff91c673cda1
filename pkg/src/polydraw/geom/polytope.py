"""Polytope and polyhedron types with exact dual descriptions.

A ``Polytope`` always carries both descriptions: vertices in intrinsic
(full-dimensional) coordinates and irredundant facet inequalities with
primitive integral data, plus the facet-vertex incidence as bitmasks.
Lower-dimensional input is restricted to a rational chart of its affine
hull; the chart is kept so ambient coordinates remain available.

``Polyhedron`` is the unbounded-capable variant used by the tight-span and
tropical modules: vertices plus extreme rays, possibly with redundant
inequalities (activity masks are stored for both generators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import EmptyPolyhedron, NotFullDimensional
from ..rational import (
    AffineChart,
    IntVec,
    Vec,
    affine_rank,
    clear_denominators,
    int_rank,
    vdot,
    vec,
    vscale,
    vsub,
)
from .dd import enumerate_polyhedron

Facet = tuple[IntVec, int]  # (a, b): a . x <= b, (a, b) jointly primitive


def _facet_of(a: Sequence, b) -> Facet:
    row = clear_denominators(tuple(Fraction(x) for x in a) + (Fraction(b),))
    return row[:-1], row[-1]


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple[Vec, ...]
    facets: tuple[Facet, ...]
    incidence: tuple[int, ...]  # per facet: bitmask over vertex indices
    embedding: AffineChart | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def ambient_dim(self) -> int:
        if self.embedding is None:
            return self.dim
        return len(self.embedding.origin)

    def ambient_vertices(self) -> tuple[Vec, ...]:
        if self.embedding is None:
            return self.vertices
        return tuple(self.embedding.to_ambient(v) for v in self.vertices)

    def vertex_facet_masks(self) -> tuple[int, ...]:
        """Per vertex: bitmask of the facets it lies on."""
        masks = self._cache.get("vfm")
        if masks is None:
            masks = [0] * self.n_vertices
            for i, inc in enumerate(self.incidence):
                m = inc
                while m:
                    low = m & -m
                    masks[low.bit_length() - 1] |= 1 << i
                    m ^= low
            masks = tuple(masks)
            self._cache["vfm"] = masks
        return masks

    def contains(self, x: Sequence) -> bool:
        p = vec(x)
        return all(vdot(a, p) <= b for a, b in self.facets)

    def contains_strictly(self, x: Sequence) -> bool:
        p = vec(x)
        return all(vdot(a, p) < b for a, b in self.facets)

    def barycenter(self) -> Vec:
        n = self.n_vertices
        acc = self.vertices[0]
        for v in self.vertices[1:]:
            acc = tuple(a + b for a, b in zip(acc, v))
        return vscale(Fraction(1, n), acc)

    def __repr__(self) -> str:
        return (f"Polytope(dim={self.dim}, vertices={self.n_vertices}, "
                f"facets={self.n_facets})")


@dataclass(frozen=True)
class Polyhedron:
    dim: int
    inequalities: tuple[Facet, ...]
    vertices: tuple[Vec, ...]
    rays: tuple[IntVec, ...]
    vertex_activity: tuple[int, ...]  # per inequality: bitmask over vertices
    ray_activity: tuple[int, ...]     # per inequality: bitmask over rays

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def is_bounded(self) -> bool:
        return not self.rays

    def __repr__(self) -> str:
        return (f"Polyhedron(dim={self.dim}, vertices={len(self.vertices)}, "
                f"rays={len(self.rays)}, inequalities={len(self.inequalities)})")


def convex_hull(points: Sequence[Sequence]) -> Polytope:
    """Exact convex hull of rational points.

    Works in the chart of the affine hull (polarity about the barycenter
    reduces facet enumeration to vertex enumeration, which the double
    description kernel performs).  Input order of the surviving vertices is
    preserved.
    """
    pts: list[Vec] = []
    seen = set()
    for p in points:
        q = vec(p)
        if q not in seen:
            seen.add(q)
            pts.append(q)
    if not pts:
        raise EmptyPolyhedron("hull of no points")
    ambient = len(pts[0])
    chart = AffineChart(pts[0], [vsub(p, pts[0]) for p in pts])
    k = chart.dim
    if k == ambient:
        coords = pts
        embedding = None
    else:
        coords = [chart.to_chart(p) for p in pts]
        embedding = chart
    if k == 0:
        return Polytope(0, ((),), (), (), embedding)

    n = len(coords)
    c = vscale(Fraction(1, n), [sum(p[j] for p in coords) for j in range(k)])
    shifted = [vsub(p, c) for p in coords]
    polar_ineqs = [(y, Fraction(1)) for y in shifted]
    zverts, zrays = enumerate_polyhedron(polar_ineqs, k)
    assert not zrays, "polar of a full-dimensional point set must be bounded"

    facets = []
    for z in zverts:
        facets.append(_facet_of(z, 1 + vdot(z, c)))

    # tightness masks over all input points, then keep points of full tight rank
    tight_rows: list[list[int]] = [[] for _ in range(n)]
    masks_all = []
    for (a, b) in facets:
        m = 0
        for i, p in enumerate(coords):
            if vdot(a, p) == b:
                m |= 1 << i
                tight_rows[i].append(a)
        masks_all.append(m)
    keep = [i for i in range(n) if len(tight_rows[i]) >= k
            and int_rank(tight_rows[i]) == k]
    remap = {old: new for new, old in enumerate(keep)}
    vertices = tuple(coords[i] for i in keep)
    incidence = []
    for m in masks_all:
        mm = 0
        q = m
        while q:
            low = q & -q
            old = low.bit_length() - 1
            if old in remap:
                mm |= 1 << remap[old]
            q ^= low
        incidence.append(mm)
    return Polytope(k, vertices, tuple(facets), tuple(incidence), embedding)


def polytope_from_inequalities(ineqs: Sequence[tuple[Sequence, object]],
                               dim: int) -> Polytope:
    """Bounded H-description to a canonical Polytope (irredundant facets)."""
    verts, rays = enumerate_polyhedron(ineqs, dim)
    if rays:
        raise NotFullDimensional("system is unbounded; use polyhedron_from_inequalities")
    return convex_hull(verts)


def polyhedron_from_inequalities(ineqs: Sequence[tuple[Sequence, object]],
                                 dim: int) -> Polyhedron:
    """Pointed polyhedron {x : a.x <= b} with generators and activity masks."""
    verts, rays = enumerate_polyhedron(ineqs, dim)
    norm = tuple(_facet_of(a, b) for a, b in ineqs)
    vact = []
    ract = []
    for a, b in norm:
        mv = 0
        for i, v in enumerate(verts):
            if vdot(a, v) == b:
                mv |= 1 << i
        mr = 0
        for i, r in enumerate(rays):
            if vdot(a, r) == 0:
                mr |= 1 << i
        vact.append(mv)
        ract.append(mr)
    return Polyhedron(dim, norm, tuple(verts), tuple(rays),
                      tuple(vact), tuple(ract))


def polar(P: Polytope) -> Polytope:
    """Polar dual about the vertex barycenter (an interior point).

    Vertices of the polar correspond to facets of P and vice versa; the
    incidence matrix is transposed.
    """
    c = P.barycenter()
    pverts = []
    for a, b in P.facets:
        denom = Fraction(b) - vdot(a, c)
        assert denom > 0, "barycenter must be interior"
        pverts.append(tuple(Fraction(ai) / denom for ai in a))
    pfacets = []
    for v in P.vertices:
        pfacets.append(_facet_of(vsub(v, c), 1))
    # transpose of the incidence: polar facet j tight at polar vertex i
    # iff original vertex j lies on original facet i
    inc = []
    for j in range(P.n_vertices):
        m = 0
        for i in range(P.n_facets):
            if (P.incidence[i] >> j) & 1:
                m |= 1 << i
        inc.append(m)
    return Polytope(P.dim, tuple(pverts), tuple(pfacets), tuple(inc), None)


def faces_of_polyhedron(poly: Polyhedron) -> list[tuple[int, int, int]]:
    """All nonempty faces as (vertex_mask, ray_mask, dim) triples.

    Faces are intersections of inequality-activity generator sets, closed
    under pairwise intersection, plus the polyhedron itself.  Dimension is
    the affine rank of the face's vertices plus the ray-space rank it spans.
    """
    nv = len(poly.vertices)
    nr = len(poly.rays)
    top = ((1 << nv) - 1, (1 << nr) - 1)
    seeds = list(zip(poly.vertex_activity, poly.ray_activity))
    seen = {top}
    queue = [top]
    out = [top]
    while queue:
        vm, rm = queue.pop()
        for sv, sr in seeds:
            nvm, nrm = vm & sv, rm & sr
            if nvm == 0:
                continue  # faces of a pointed polyhedron contain a vertex
            key = (nvm, nrm)
            if key not in seen:
                seen.add(key)
                queue.append(key)
                out.append(key)
    result = []
    for vm, rm in out:
        vs = [poly.vertices[i] for i in _bits(vm)]
        rs = [vec(poly.rays[i]) for i in _bits(rm)]
        if rs:
            base = vs[0]
            rows = [vsub(p, base) for p in vs[1:]] + rs
            d = int_rank([clear_denominators(r) for r in rows])
        else:
            d = affine_rank(vs)
        result.append((vm, rm, d))
    result.sort(key=lambda t: (t[2], t[0], t[1]))
    return result


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
