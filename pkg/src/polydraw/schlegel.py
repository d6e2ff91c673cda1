"""Schlegel diagrams of polytopes, exact over the rationals.

The projection through a viewpoint v beyond the base facet F = {a.x = b}
onto the facet's hyperplane is

    pi(x) = v + (b - a.v) / (a.x - a.v) * (x - v),

defined for every x in the polytope because a.v > b forces the denominator
negative and bounded away from zero.  A viewpoint is valid when it violates
F's inequality and satisfies all other facet inequalities strictly; the set
of valid viewpoints over an anchor w in relint(F) along a ray r is the
interval (0, lambda_max) where

    lambda_max = min over facets F' != F with a'.r > 0 of (b' - a'.w) / (a'.r)

(unbounded when no facet normal sees the ray).  Zoom values zeta in (0, 1)
parametrize the interval: v = w + zeta * lambda_max * r in the bounded case
and v = w + zeta / (1 - zeta) * r otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    AmbiguousFacet,
    InvalidViewpoint,
    NoSuchFace,
    NotFullDimensional,
    ValidationError,
)
from .geom.lattice import _closure_masks, _mask_rank, face_lattice, graph_of
from .geom.polytope import Polytope, _bits, convex_hull
from .rational import (
    AffineChart,
    Vec,
    clear_denominators,
    vadd,
    vdot,
    vec,
    vscale,
    vsub,
)


@dataclass(frozen=True)
class SchlegelState:
    """Viewpoint bookkeeping for one base facet.

    viewpoint = anchor + t * ray with t > 0; zoom is the interval parameter
    (t / lambda_max when bounded, t / (1 + t) otherwise).
    """

    polytope: Polytope
    facet: int
    anchor: Vec
    ray: Vec
    zoom: Fraction
    lam_max: Fraction | None
    viewpoint: Vec

    def summary(self) -> dict:
        return {
            "facet": self.facet,
            "zoom": float(self.zoom),
            "zoom_exact": str(self.zoom),
            "bounded": self.lam_max is not None,
            "viewpoint": [str(x) for x in self.viewpoint],
        }


@dataclass(frozen=True)
class SchlegelDiagram:
    """Projected vertex positions in an orthogonal rational chart of aff(F),
    together with the induced polytopal subdivision (all proper faces except
    F itself, projected into F)."""

    polytope: Polytope
    facet: int
    chart: AffineChart
    positions: tuple[Vec, ...]          # chart coordinates per vertex index
    cells: tuple[tuple[int, int], ...]  # (vertex mask, face dim), F excluded
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def top_cells(self) -> tuple[int, ...]:
        d = self.polytope.dim
        return tuple(m for m, r in self.cells if r == d - 1)

    def cell_hull(self, mask: int) -> Polytope:
        """Exact hull of a cell's projected vertices (in chart coordinates)."""
        hulls = self._cache.setdefault("hulls", {})
        H = hulls.get(mask)
        if H is None:
            H = convex_hull([self.positions[i] for i in _bits(mask)])
            hulls[mask] = H
        return H


def facet_chart(P: Polytope, facet: int) -> AffineChart:
    """Deterministic orthogonal chart of the base facet's affine hull."""
    charts = P._cache.setdefault("facet_charts", {})
    ch = charts.get(facet)
    if ch is None:
        vs = [P.vertices[i] for i in _bits(P.incidence[facet])]
        ch = AffineChart(vs[0], [vsub(p, vs[0]) for p in vs[1:]])
        charts[facet] = ch
    return ch


def _check_facet(P: Polytope, facet: int) -> None:
    if P.dim < 2:
        raise NotFullDimensional("Schlegel diagrams need dimension >= 2")
    if not 0 <= facet < P.n_facets:
        raise NoSuchFace(f"facet index {facet} out of range")


def relint_point(P: Polytope, facet: int) -> Vec:
    """Barycenter of the facet's vertices: a relative-interior anchor."""
    idxs = list(_bits(P.incidence[facet]))
    acc = P.vertices[idxs[0]]
    for i in idxs[1:]:
        acc = vadd(acc, P.vertices[i])
    return vscale(Fraction(1, len(idxs)), acc)


def in_relint_of_facet(P: Polytope, facet: int, w: Sequence) -> bool:
    """On the facet's hyperplane, strictly inside every other facet."""
    p = vec(w)
    a, b = P.facets[facet]
    if vdot(a, p) != b:
        return False
    return all(vdot(a2, p) < b2
               for j, (a2, b2) in enumerate(P.facets) if j != facet)


def beyond_limit(P: Polytope, facet: int, w: Sequence, r: Sequence) -> Fraction | None:
    """Largest t with w + t*r still valid (None when unbounded).

    Requires a.r > 0 for the base facet so the ray actually leaves it.
    """
    a, b = P.facets[facet]
    rv = vec(r)
    if vdot(a, rv) <= 0:
        raise InvalidViewpoint("ray does not leave the base facet")
    lam: Fraction | None = None
    for j, (a2, b2) in enumerate(P.facets):
        if j == facet:
            continue
        ar = vdot(a2, rv)
        if ar > 0:
            t = (b2 - vdot(a2, vec(w))) / ar
            if lam is None or t < lam:
                lam = t
    return lam


def viewpoint_valid(P: Polytope, facet: int, v: Sequence) -> bool:
    """Beyond F: violates F's inequality, strictly satisfies all others."""
    _check_facet(P, facet)
    p = vec(v)
    a, b = P.facets[facet]
    if vdot(a, p) <= b:
        return False
    return all(vdot(a2, p) < b2
               for j, (a2, b2) in enumerate(P.facets) if j != facet)


def _state_from(P: Polytope, facet: int, w: Vec, r: Vec, t: Fraction) -> SchlegelState:
    lam = beyond_limit(P, facet, w, r)
    if lam is None:
        zoom = t / (1 + t)
    else:
        zoom = t / lam
        if not 0 < zoom < 1:
            raise InvalidViewpoint("viewpoint parameter out of range")
    return SchlegelState(P, facet, w, r, zoom, lam, vadd(w, vscale(t, r)))


def initial_state(P: Polytope, facet: int, zoom: Fraction | None = None) -> SchlegelState:
    """Anchor at the facet barycenter, ray along the inner normal direction
    of the facet (pointing outward), zoom defaulting to 1/2."""
    _check_facet(P, facet)
    if zoom is None:
        zoom = Fraction(1, 2)
    w = relint_point(P, facet)
    a, _ = P.facets[facet]
    r = vec(a)  # outward normal of a.x <= b
    return set_zoom(SchlegelState(P, facet, w, r, Fraction(1, 2),
                                  beyond_limit(P, facet, w, r), w), zoom)


def set_zoom(state: SchlegelState, zeta) -> SchlegelState:
    """Move the viewpoint to interval parameter zeta in (0, 1)."""
    zeta = Fraction(zeta)
    if not 0 < zeta < 1:
        raise InvalidViewpoint(f"zoom must lie strictly between 0 and 1, got {zeta}")
    if state.lam_max is not None:
        t = zeta * state.lam_max
    else:
        t = zeta / (1 - zeta)
    v = vadd(state.anchor, vscale(t, state.ray))
    return SchlegelState(state.polytope, state.facet, state.anchor, state.ray,
                         zeta, state.lam_max, v)


def state_for_viewpoint(P: Polytope, facet: int, v: Sequence,
                        anchor: Sequence | None = None) -> SchlegelState:
    """Adopt an explicit viewpoint (validated), deriving ray and zoom."""
    _check_facet(P, facet)
    pv = vec(v)
    if not viewpoint_valid(P, facet, pv):
        raise InvalidViewpoint("point is not beyond the chosen facet")
    w = vec(anchor) if anchor is not None else relint_point(P, facet)
    if not in_relint_of_facet(P, facet, w):
        raise InvalidViewpoint("anchor must lie in the facet's relative interior")
    u = vsub(pv, w)
    r = vec(clear_denominators(u))
    # u = t * r with t > 0
    k = next(i for i, x in enumerate(r) if x != 0)
    t = u[k] / r[k]
    if t <= 0:
        raise InvalidViewpoint("viewpoint does not lie over the anchor")
    return _state_from(P, facet, w, r, t)


def project_point(P: Polytope, facet: int, v: Vec, x: Sequence) -> Vec:
    a, b = P.facets[facet]
    av = vdot(a, v)
    denom = vdot(a, vec(x)) - av
    return vadd(v, vscale((b - av) / denom, vsub(vec(x), v)))


def diagram(state: SchlegelState) -> SchlegelDiagram:
    """Project all vertices into the base facet's chart and collect cells."""
    P = state.polytope
    f = state.facet
    if not viewpoint_valid(P, f, state.viewpoint):
        raise InvalidViewpoint("state's viewpoint is not beyond its facet")
    ch = facet_chart(P, f)
    pos = tuple(ch.to_chart(project_point(P, f, state.viewpoint, x))
                for x in P.vertices)
    cells = _diagram_cells(P, f)
    return SchlegelDiagram(P, f, ch, pos, cells)


def _diagram_cells(P: Polytope, facet: int) -> tuple[tuple[int, int], ...]:
    key = ("cells", facet)
    cells = P._cache.get(key)
    if cells is None:
        lat = face_lattice(P)
        top = (1 << P.n_vertices) - 1
        fmask = P.incidence[facet]
        out = []
        for m, r in zip(lat.faces, lat.ranks):
            if m == 0 or m == top or m == fmask:
                continue
            out.append((m, r))
        cells = tuple(out)
        P._cache[key] = cells
    return cells


def select_facet(P: Polytope, marked: Sequence[int]) -> int:
    """Unique facet containing all marked vertices.

    Raises AmbiguousFacet when several facets match and NoSuchFace when none
    does; the error detail lists the candidates.
    """
    if not marked:
        raise ValidationError("no vertices marked")
    mset = set()
    for i in marked:
        i = int(i)
        if not 0 <= i < P.n_vertices:
            raise NoSuchFace(f"vertex index {i} out of range")
        mset.add(i)
    need = 0
    for i in mset:
        need |= 1 << i
    hits = [j for j in range(P.n_facets) if P.incidence[j] & need == need]
    if not hits:
        raise NoSuchFace("no facet contains all marked vertices")
    if len(hits) > 1:
        raise AmbiguousFacet("marked vertices lie on facets " +
                             ", ".join(map(str, hits)))
    return hits[0]


def drag_facet_vertex(state: SchlegelState, vertex: int,
                      displacement: Sequence) -> SchlegelState:
    """Drag a vertex of the base facet by a displacement inside aff(F).

    Anchor and viewpoint move in opposite directions (w -> w - d, v -> v + d)
    and the ray is re-derived; the displacement is clamped by bisection to
    the largest admissible fraction when the full move would leave the valid
    region.
    """
    P = state.polytope
    f = state.facet
    if not (P.incidence[f] >> int(vertex)) & 1:
        raise NoSuchFace(f"vertex {vertex} is not on the base facet")
    d = vec(displacement)
    a, _ = P.facets[f]
    if vdot(a, d) != 0:
        raise ValidationError("displacement must be parallel to the base facet")
    if all(x == 0 for x in d):
        return state

    def attempt(scale: Fraction) -> SchlegelState | None:
        dd = vscale(scale, d)
        w2 = vsub(state.anchor, dd)
        v2 = vadd(state.viewpoint, dd)
        if not in_relint_of_facet(P, f, w2):
            return None
        if not viewpoint_valid(P, f, v2):
            return None
        u = vsub(v2, w2)
        r2 = vec(clear_denominators(u))
        k = next(i for i, x in enumerate(r2) if x != 0)
        t = u[k] / r2[k]
        if t <= 0:
            return None
        try:
            return _state_from(P, f, w2, r2, t)
        except InvalidViewpoint:
            return None

    full = attempt(Fraction(1))
    if full is not None:
        return full
    lo, hi = Fraction(0), Fraction(1)
    best = None
    for _ in range(40):
        mid = (lo + hi) / 2
        cand = attempt(mid)
        if cand is None:
            hi = mid
        else:
            best = cand
            lo = mid
    if best is None:
        raise InvalidViewpoint("displacement leaves no admissible move")
    return best


def drag_nonfacet_vertex(state: SchlegelState, vertex: int,
                         target_chart: Sequence) -> SchlegelState:
    """Drag a projected non-facet vertex to a target point of the diagram.

    The new viewpoint is the unique point on the line through the dragged
    polytope vertex x and the target's preimage p in aff(F) such that
    pi(x) = p; it is validated and the state re-anchored, with bisection
    toward the old viewpoint as the clamp when the exact solution is not a
    valid viewpoint.
    """
    P = state.polytope
    f = state.facet
    vertex = int(vertex)
    if (P.incidence[f] >> vertex) & 1:
        raise ValidationError(f"vertex {vertex} lies on the base facet; "
                              "use the facet drag")
    ch = facet_chart(P, f)
    p = ch.to_ambient([Fraction(c) for c in target_chart])
    x = P.vertices[vertex]
    # Any viewpoint on the line through x and p projects x exactly to p
    # (p lies on the facet hyperplane), so the drag reduces to picking a
    # valid viewpoint on that line: intersect it with the beyond region,
    # an open interval in the line parameter s for v(s) = p + s*(x - p).
    dirv = vsub(x, p)
    if all(c == 0 for c in dirv):
        raise InvalidViewpoint("dragged vertex lies on the facet hyperplane")
    empty, lo_s, hi_s = _valid_interval_on_line(P, f, p, dirv)
    if empty:
        raise InvalidViewpoint("no valid viewpoint realizes this drag")
    if lo_s is None and hi_s is None:
        s = Fraction(1)
    elif hi_s is None:
        s = lo_s + 1
    elif lo_s is None:
        s = hi_s - 1
    else:
        s = (lo_s + hi_s) / 2
    v2 = vadd(p, vscale(s, dirv))
    if not viewpoint_valid(P, f, v2):
        raise InvalidViewpoint("no valid viewpoint realizes this drag")
    return state_for_viewpoint(P, f, v2, state.anchor)


def _valid_interval_on_line(P: Polytope, facet: int, p: Vec, dirv: Vec):
    """Open s-interval where p + s*dirv is a valid viewpoint for the facet.

    Returns (empty, lo, hi); lo/hi of None mean unbounded on that side.
    The interval lies on the beyond side of the base facet.
    """
    lo: Fraction | None = None
    hi: Fraction | None = None
    # each constraint reads c*s < e; the base facet appears with flipped sense
    constraints = []
    for j, (a2, b2) in enumerate(P.facets):
        c, e = vdot(a2, vec(dirv)), Fraction(b2) - vdot(a2, vec(p))
        if j == facet:
            c, e = -c, -e
        constraints.append((c, e))
    for c, e in constraints:
        if c == 0:
            if e <= 0:
                return (True, None, None)
            continue
        t = e / c
        if c > 0:
            hi = t if hi is None or t < hi else hi
        else:
            lo = t if lo is None or t > lo else lo
    if lo is not None and hi is not None and lo >= hi:
        return (True, None, None)
    return (False, lo, hi)


def scene_of(state: SchlegelState) -> "Scene":
    """Drawable scene of the diagram: chart positions rescaled per axis to
    true lengths, skeleton edges, top cells and the state summary in the
    metadata (with the raw axis scales so commands can be mapped back to
    exact chart coordinates)."""
    from .errors import DimensionMismatch
    from .scene import Scene, SceneEdge, SceneNode

    P = state.polytope
    dia = diagram(state)
    k = len(dia.chart.basis)
    if k not in (2, 3):
        raise DimensionMismatch(f"cannot draw a {k}-dimensional diagram")
    scales = dia.chart.axis_scales()
    base = P.incidence[state.facet]
    nodes = []
    for i, c in enumerate(dia.positions):
        pos = tuple(float(x) * s for x, s in zip(c, scales))
        kind = "base" if (base >> i) & 1 else "generic"
        nodes.append(SceneNode(str(i), pos, kind=kind))
    G = graph_of(P)
    edges = []
    for u, v in G.edges:
        on_base = ((base >> int(u)) & 1) and ((base >> int(v)) & 1)
        edges.append(SceneEdge(u, v, kind="base" if on_base else "generic"))
    cells = [sorted(_bits(m)) for m in dia.top_cells()]
    meta = {
        "kind": "schlegel",
        "state": state.summary(),
        "cells": sorted(cells),
        "axis_scales": list(scales),
    }
    return Scene(tuple(nodes), tuple(edges), (), meta)
