"""Rubber-band (Tutte) embeddings, Maxwell-Cremona lifts and Steinitz-style
realization of 3-polytopes from their graphs.

Nailing the nodes of one face to a convex polygon and letting every other
node settle at the weighted barycenter of its neighbours minimizes the total
spring energy sum_e delta_e |e|^2; for a planar 3-connected graph with a
face as the boundary the equilibrium drawing is crossing-free (Tutte).  An
equilibrium stress extends to the boundary triangle and induces a piecewise
linear convex lift of the drawing (Maxwell-Cremona); taking the convex hull
of the lifted points realizes the graph as a 3-polytope.  When the graph has
no triangular face its planar dual does, and polarity brings the realization
back.

The planar pipeline is exact: Tutte systems are solved over the rationals,
so lifts are exactly face-consistent and hulls need no tolerances.  The
general ``tutte_embed`` (arbitrary fixed nodes, any dimension) is the
floating-point drawing variant with an explicit residual guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import spsolve

from .errors import (
    LiftInconsistent,
    NoSuchFace,
    NotPlanar,
    NotTriconnected,
    ValidationError,
)
from .geom.graphs import Graph, graph, k_connected, to_networkx
from .geom.lattice import graph_of
from .geom.polytope import Polytope, _bits, convex_hull, polar
from .rational import Vec, solve, vec

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class PlaneEmbedding:
    """Straight-line plane drawing with its face cycles.

    ``faces`` are vertex cycles with a consistent orientation convention
    (each undirected edge occurs once per direction across the two incident
    faces); ``outer`` indexes the unbounded face.  Positions are exact.
    """

    graph: Graph
    positions: dict  # node -> (Fraction, Fraction)
    faces: tuple[tuple[str, ...], ...]
    outer: int

    def position(self, u: str) -> tuple[Fraction, Fraction]:
        return self.positions[u]


def planar_faces(G: Graph) -> tuple[tuple[str, ...], ...]:
    """Face cycles of a planar embedding (combinatorially unique for
    3-connected graphs).  Deterministic for a fixed node order."""
    ok, emb = nx.check_planarity(to_networkx(G))
    if not ok:
        raise NotPlanar("graph admits no plane embedding")
    faces = []
    seen = set()
    for u in G.nodes:
        for v in sorted(emb[u], key=G.index().__getitem__):
            if (u, v) in seen:
                continue
            cycle = emb.traverse_face(u, v, mark_half_edges=seen)
            faces.append(tuple(cycle))
    return tuple(faces)


def _find_face(faces: Sequence[tuple[str, ...]], cycle: Sequence[str]) -> int:
    want = list(cycle)
    for i, f in enumerate(faces):
        if len(f) != len(want):
            continue
        k = len(f)
        doubled = list(f) + list(f)
        rev = doubled[::-1]
        for off in range(k):
            if doubled[off:off + k] == want or rev[off:off + k] == want:
                return i
    raise NoSuchFace("requested outer cycle is not a face of the embedding")


def convex_polygon(k: int) -> list[tuple[Fraction, Fraction]]:
    """Rational points in strictly convex position approximating a regular
    k-gon (dyadic rounding of the unit circle, convexity verified)."""
    if k < 3:
        raise ValidationError("polygon needs at least 3 vertices")
    den = 1 << 20
    pts = []
    for i in range(k):
        ang = 2 * np.pi * i / k
        pts.append((Fraction(round(np.cos(ang) * den), den),
                    Fraction(round(np.sin(ang) * den), den)))
    for i in range(k):
        a, b, c = pts[i], pts[(i + 1) % k], pts[(i + 2) % k]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if cross <= 0:
            raise ValidationError("rounded polygon lost convexity")
    return pts


def _edge_weights(G: Graph, weights: Mapping | None) -> dict:
    w = {}
    for e in G.edges:
        w[e] = Fraction(1)
    if weights:
        for (u, v), val in dict(weights).items():
            e = G.edge_key(u, v)
            if e not in w:
                raise ValidationError(f"weight for non-edge {e}")
            val = Fraction(val)
            if val <= 0:
                raise ValidationError("weights must be positive")
            w[e] = val
    return w


def tutte_exact(G: Graph, fixed: Mapping[str, Sequence],
                weights: Mapping | None = None) -> dict[str, Vec]:
    """Equilibrium positions over the rationals: every free node at the
    weighted barycenter of its neighbours."""
    if not fixed:
        raise ValidationError("at least one node must be fixed")
    w = _edge_weights(G, weights)
    free = [u for u in G.nodes if u not in fixed]
    dim = len(next(iter(fixed.values())))
    fx = {u: vec(p) for u, p in fixed.items()}
    if not free:
        return fx
    fidx = {u: i for i, u in enumerate(free)}
    adj = G.adjacency()
    rows = []
    rhs = [[Fraction(0)] * len(free) for _ in range(dim)]
    for u in free:
        row = [Fraction(0)] * len(free)
        total = Fraction(0)
        for nb in adj[u]:
            ww = w[G.edge_key(u, nb)]
            total += ww
            if nb in fidx:
                row[fidx[nb]] -= ww
            else:
                for c in range(dim):
                    rhs[c][fidx[u]] += ww * fx[nb][c]
        if total == 0:
            raise ValidationError(f"isolated free node {u!r}")
        row[fidx[u]] += total
        rows.append(row)
    coords = []
    for c in range(dim):
        sol = solve(rows, rhs[c])
        if sol is None:
            raise ValidationError("singular equilibrium system "
                                  "(free component without fixed anchor?)")
        coords.append(sol)
    out = dict(fx)
    for u in free:
        out[u] = tuple(coords[c][fidx[u]] for c in range(dim))
    return out


def tutte_embed(G: Graph, fixed: Mapping[str, Sequence],
                weights: Mapping | None = None) -> dict[str, np.ndarray]:
    """Floating-point rubber-band embedding (sparse SPD solve).

    Raises unless the residual of every equilibrium equation is <= 1e-10.
    """
    if not fixed:
        raise ValidationError("at least one node must be fixed")
    w = {e: float(v) for e, v in _edge_weights(G, weights).items()}
    free = [u for u in G.nodes if u not in fixed]
    dim = len(next(iter(fixed.values())))
    out = {u: np.asarray([float(c) for c in p]) for u, p in fixed.items()}
    if not free:
        return out
    fidx = {u: i for i, u in enumerate(free)}
    adj = G.adjacency()
    r_i, r_j, r_v = [], [], []
    rhs = np.zeros((len(free), dim))
    for u in free:
        total = 0.0
        for nb in adj[u]:
            ww = w[G.edge_key(u, nb)]
            total += ww
            if nb in fidx:
                r_i.append(fidx[u]); r_j.append(fidx[nb]); r_v.append(-ww)
            else:
                rhs[fidx[u]] += ww * out[nb]
        r_i.append(fidx[u]); r_j.append(fidx[u]); r_v.append(total)
    L = csr_matrix((r_v, (r_i, r_j)), shape=(len(free), len(free)))
    X = spsolve(L, rhs)
    X = X.reshape(len(free), dim)
    res = np.abs(L @ X - rhs).max()
    if not res <= RESIDUAL_TOL:
        raise ValidationError(f"equilibrium residual {res:.2e} exceeds 1e-10")
    for u in free:
        out[u] = X[fidx[u]]
    return out


def tutte_planar(G: Graph, outer: Sequence[str] | None = None,
                 weights: Mapping | None = None,
                 outer_positions: Mapping[str, Sequence] | None = None) -> PlaneEmbedding:
    """Crossing-free straight-line drawing of a planar 3-connected graph
    with one face nailed to a convex polygon; exact rational positions."""
    if G.n < 4:
        raise ValidationError("need at least 4 nodes")
    faces = planar_faces(G)  # raises NotPlanar
    if not k_connected(G, 3):
        raise NotTriconnected("graph is not 3-connected")
    if outer is None:
        oidx = 0
    else:
        oidx = _find_face(faces, list(outer))
    boundary = faces[oidx]
    if outer_positions is None:
        poly = convex_polygon(len(boundary))
        fixed = {u: poly[i] for i, u in enumerate(boundary)}
    else:
        fixed = {u: tuple(Fraction(c) for c in outer_positions[u])
                 for u in boundary}
        for i in range(len(boundary)):
            a = fixed[boundary[i]]
            b = fixed[boundary[(i + 1) % len(boundary)]]
            c = fixed[boundary[(i + 2) % len(boundary)]]
            cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cr == 0:
                raise ValidationError("outer positions must be strictly convex")
    pos = tutte_exact(G, fixed, weights)
    return PlaneEmbedding(G, pos, faces, oidx)


def _rot90(d: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (-d[1], d[0])


def maxwell_lift(emb: PlaneEmbedding,
                 stress: Mapping | None = None) -> dict[str, Fraction]:
    """Heights of the convex lift induced by an equilibrium stress.

    Interior-edge stresses default to 1; the outer face must be a triangle
    (its three stresses are completed from the boundary equilibrium) unless
    the given stress already covers the boundary.  The outer face lifts to
    the zero plane.  Exact; inconsistencies raise LiftInconsistent.
    """
    G = emb.graph
    pos = {u: (Fraction(p[0]), Fraction(p[1])) for u, p in emb.positions.items()}
    w = {}
    for e in G.edges:
        w[e] = Fraction(1)
    given = set()
    if stress:
        for (u, v), val in dict(stress).items():
            e = G.edge_key(u, v)
            w[e] = Fraction(val)
            given.add(e)
    boundary = emb.faces[emb.outer]
    bedges = [G.edge_key(boundary[i], boundary[(i + 1) % len(boundary)])
              for i in range(len(boundary))]
    if not all(e in given for e in bedges):
        if len(boundary) != 3:
            raise LiftInconsistent("boundary stress completion needs a "
                                   "triangular outer face")
        _complete_boundary_stress(G, pos, w, boundary)
    _check_equilibrium(G, pos, w)

    # propagate affine functions l_f(x) = g_f . x + c_f over the dual tree;
    # the relative orientation of the two face traversals fixes the sign,
    # tried globally both ways and verified edge by edge
    owners: dict[tuple[str, str], int] = {}
    for i, f in enumerate(emb.faces):
        for k in range(len(f)):
            owners[(f[k], f[(k + 1) % len(f)])] = i
    last_err = None
    for sign in (1, -1):
        try:
            return _propagate(emb, pos, w, owners, sign)
        except LiftInconsistent as e:
            last_err = e
    raise last_err


def _complete_boundary_stress(G: Graph, pos, w, boundary) -> None:
    a, b, c = boundary
    unknown = [G.edge_key(a, b), G.edge_key(b, c), G.edge_key(c, a)]
    adj = G.adjacency()
    rows = []
    rhs = []
    for v in boundary:
        balance = [Fraction(0), Fraction(0)]
        coef = [[Fraction(0)] * 3, [Fraction(0)] * 3]
        for nb in adj[v]:
            e = G.edge_key(v, nb)
            d = (pos[nb][0] - pos[v][0], pos[nb][1] - pos[v][1])
            if e in unknown:
                k = unknown.index(e)
                coef[0][k] += d[0]
                coef[1][k] += d[1]
            else:
                balance[0] += w[e] * d[0]
                balance[1] += w[e] * d[1]
        rows.append(coef[0]); rhs.append(-balance[0])
        rows.append(coef[1]); rhs.append(-balance[1])
    sol = solve(rows, rhs)
    if sol is None:
        raise LiftInconsistent("boundary stresses cannot balance the interior")
    for e, val in zip(unknown, sol):
        w[e] = val


def _check_equilibrium(G: Graph, pos, w) -> None:
    adj = G.adjacency()
    for v in G.nodes:
        fx = fy = Fraction(0)
        for nb in adj[v]:
            ww = w[G.edge_key(v, nb)]
            fx += ww * (pos[nb][0] - pos[v][0])
            fy += ww * (pos[nb][1] - pos[v][1])
        if fx != 0 or fy != 0:
            raise LiftInconsistent(f"stress not in equilibrium at node {v!r}")


def _propagate(emb: PlaneEmbedding, pos, w, owners, sign) -> dict[str, Fraction]:
    G = emb.graph
    nf = len(emb.faces)
    planes: list[tuple[Fraction, Fraction, Fraction] | None] = [None] * nf
    planes[emb.outer] = (Fraction(0), Fraction(0), Fraction(0))
    stack = [emb.outer]
    visited = {emb.outer}
    while stack:
        fi = stack.pop()
        gx, gy, c = planes[fi]
        f = emb.faces[fi]
        for k in range(len(f)):
            u, v = f[k], f[(k + 1) % len(f)]
            gi = owners.get((v, u))
            if gi is None:
                raise LiftInconsistent("unmatched half-edge in face data")
            ww = w[G.edge_key(u, v)]
            d = (pos[v][0] - pos[u][0], pos[v][1] - pos[u][1])
            rx, ry = _rot90(d)
            g2 = (gx + sign * ww * rx, gy + sign * ww * ry)
            c2 = c + (gx - g2[0]) * pos[u][0] + (gy - g2[1]) * pos[u][1]
            # both endpoints must agree across the wall
            for q in (u, v):
                lhs = gx * pos[q][0] + gy * pos[q][1] + c
                rhs = g2[0] * pos[q][0] + g2[1] * pos[q][1] + c2
                if lhs != rhs:
                    raise LiftInconsistent("face planes disagree on a shared edge")
            if gi in visited:
                e0 = planes[gi]
                if e0 != (g2[0], g2[1], c2):
                    raise LiftInconsistent("stress does not close up around a cycle")
            else:
                planes[gi] = (g2[0], g2[1], c2)
                visited.add(gi)
                stack.append(gi)
    heights: dict[str, Fraction] = {}
    for fi, f in enumerate(emb.faces):
        gx, gy, c = planes[fi]
        for u in f:
            h = gx * pos[u][0] + gy * pos[u][1] + c
            if u in heights:
                if heights[u] != h:
                    raise LiftInconsistent("incident faces lift a node differently")
            else:
                heights[u] = h
    # normalize: interior below the boundary plane
    interior = [u for u in G.nodes if u not in set(emb.faces[emb.outer])]
    if interior and sum(heights[u] for u in interior) > 0:
        heights = {u: -h for u, h in heights.items()}
    return heights


def realize_graph(G: Graph) -> tuple[Polytope, dict[str, int]]:
    """Realize a planar 3-connected graph as a 3-polytope.

    Pipeline: pick a triangular face of G (or of its planar dual), nail it,
    Tutte-embed, lift, take the exact hull; the dual route finishes with a
    polar.  Returns the polytope and the node -> vertex-index map; the
    realized graph equals G edge-for-edge under that map.
    """
    faces = planar_faces(G)
    if not k_connected(G, 3):
        raise NotTriconnected("graph is not 3-connected")
    tri = next((i for i, f in enumerate(faces) if len(f) == 3), None)
    if tri is not None:
        return _realize_with_triangle(G, faces, tri)
    # no triangular face: the dual has one (some node of G has degree 3)
    dual, face_nodesets = _planar_dual(G, faces)
    dfaces = planar_faces(dual)
    dtri = next((i for i, f in enumerate(dfaces) if len(f) == 3), None)
    assert dtri is not None, "planar 3-connected graph or its dual has a triangle"
    Q, dmap = _realize_with_triangle(dual, dfaces, dtri)
    P = polar(Q)
    # polar vertex i sits at facet i of Q; identify each dual-embedding face
    # (a cycle of G-faces) with the unique G-node common to those faces
    mapping: dict[str, int] = {}
    pg = graph_of(P)
    hull_faces = _facet_nodesets(Q, dmap)
    for i, nodeset in enumerate(hull_faces):
        common = None
        for fname in nodeset:
            s = face_nodesets[fname]
            common = s if common is None else common & s
        if common is None or len(common) != 1:
            raise LiftInconsistent("dual realization does not close up")
        mapping[next(iter(common))] = i
    _check_realization(G, P, mapping)
    return P, mapping


def _realize_with_triangle(G: Graph, faces, tri: int) -> tuple[Polytope, dict[str, int]]:
    boundary = faces[tri]
    fixed = {boundary[0]: (Fraction(0), Fraction(0)),
             boundary[1]: (Fraction(1), Fraction(0)),
             boundary[2]: (Fraction(0), Fraction(1))}
    pos = tutte_exact(G, fixed)
    emb = PlaneEmbedding(G, pos, faces, tri)
    heights = maxwell_lift(emb)
    pts = [(pos[u][0], pos[u][1], heights[u]) for u in G.nodes]
    P = convex_hull(pts)
    if P.n_vertices != G.n:
        raise LiftInconsistent("lift lost vertices in the hull")
    lookup = {v: i for i, v in enumerate(P.vertices)}
    mapping = {u: lookup[pt] for u, pt in zip(G.nodes, pts)}
    _check_realization(G, P, mapping)
    return P, mapping


def _check_realization(G: Graph, P: Polytope, mapping: dict[str, int]) -> None:
    got = graph_of(P)
    inv = {v: u for u, v in mapping.items()}
    hull_edges = {frozenset((inv[int(a)], inv[int(b)])) for a, b in got.edges}
    want = {frozenset(e) for e in G.edges}
    if hull_edges != want:
        raise LiftInconsistent("realized polytope graph differs from the input")


def _planar_dual(G: Graph, faces) -> tuple[Graph, dict[str, frozenset]]:
    """Dual graph: one node per face, one edge across every G-edge."""
    names = [f"f{i}" for i in range(len(faces))]
    nodesets = {names[i]: frozenset(faces[i]) for i in range(len(faces))}
    owner = {}
    for i, f in enumerate(faces):
        for k in range(len(f)):
            owner[(f[k], f[(k + 1) % len(f)])] = i
    edges = set()
    for (u, v), i in owner.items():
        j = owner.get((v, u))
        assert j is not None
        if i != j:
            edges.add((names[min(i, j)], names[max(i, j)]))
    return graph(names, sorted(edges)), nodesets


def _facet_nodesets(Q: Polytope, mapping: dict[str, int]) -> list[frozenset]:
    inv = {v: u for u, v in mapping.items()}
    out = []
    for inc in Q.incidence:
        out.append(frozenset(inv[i] for i in _bits(inc)))
    return out
