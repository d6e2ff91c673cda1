"""Min-plus tropical polytopes spanned by the rows of a rational matrix.

A matrix C with rows c_1..c_m spans the tropical polytope

    T_C = { x in R^n : x_j = min_i (lambda_i + c_ij), lambda in R^m }

considered up to adding multiples of the all-ones vector.  T_C carries a
natural polyhedral-complex structure: it is the image of the bounded
subcomplex of the envelope

    E_C = { (y, z) in R^m x R^n : y_i + z_j <= c_ij },

which has lineality (1_m, -1_n); pinning y_1 = 0 makes it pointed.  The
0-cells of the bounded subcomplex are the pseudo-vertices; the generators
themselves reappear among them, and the ones that are not tropical
combinations of the others are the tropical vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, ValidationError
from .geom.graphs import Graph, graph
from .geom.polytope import Polyhedron, polyhedron_from_inequalities
from .rational import Vec
from .tightspan import BoundedComplex, bounded_subcomplex
from . import spring
from .scene import Scene, scene_from_embedding


def _matrix(rows: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    mat = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if not mat or not mat[0]:
        raise ValidationError("matrix must be nonempty")
    if any(len(r) != len(mat[0]) for r in mat):
        raise ValidationError("ragged matrix")
    return mat


def envelope(rows: Sequence[Sequence]) -> Polyhedron:
    """Pointed envelope of C in the chart y_1 = 0.

    Coordinates: (y_2, .., y_m, z_1, .., z_n); inequality rows
    y_i + z_j <= c_ij, with y_1 read as 0.
    """
    C = _matrix(rows)
    m, n = len(C), len(C[0])
    dim = (m - 1) + n
    ineqs = []
    for i in range(m):
        for j in range(n):
            a = [Fraction(0)] * dim
            if i > 0:
                a[i - 1] = Fraction(1)
            a[(m - 1) + j] = Fraction(1)
            ineqs.append((tuple(a), C[i][j]))
    return polyhedron_from_inequalities(ineqs, dim)


@dataclass(frozen=True)
class TropicalComplex:
    """Bounded subcomplex of the pinned envelope of C.

    Pseudo-vertices are stored in envelope coordinates; y_part/z_part
    split one into the generator side (with the pinned y_1 = 0 restored)
    and the point side.
    """

    rows: tuple[tuple[Fraction, ...], ...]
    complex: BoundedComplex

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def pseudo_vertices(self) -> tuple[Vec, ...]:
        return self.complex.vertices

    def y_part(self, v: Vec) -> Vec:
        return (Fraction(0),) + tuple(v[: self.m - 1])

    def z_part(self, v: Vec) -> Vec:
        return tuple(v[self.m - 1:])

    def generator_pseudo_vertex(self, i: int) -> Vec:
        """Envelope point whose z-part is the generator row c_i: the y-slack
        y_k = min_j (c_kj - c_ij), shifted along the lineality so y_1 = 0."""
        C = self.rows
        y = [min(C[k][j] - C[i][j] for j in range(self.n))
             for k in range(self.m)]
        yc = [yk - y[0] for yk in y]
        z = [C[i][j] + y[0] for j in range(self.n)]
        return tuple(yc[1:]) + tuple(z)

    def generator_indices(self) -> tuple[int | None, ...]:
        """Pseudo-vertex index of each generator row (None for a redundant
        generator sitting inside a higher cell)."""
        lookup = {v: k for k, v in enumerate(self.pseudo_vertices)}
        return tuple(lookup.get(self.generator_pseudo_vertex(i))
                     for i in range(self.m))


def tropical_complex(rows: Sequence[Sequence]) -> TropicalComplex:
    C = _matrix(rows)
    return TropicalComplex(C, bounded_subcomplex(envelope(C)))


def in_span(rows: Sequence[Sequence], x: Sequence) -> bool:
    """Exact membership of x in the row span, by residuation: with
    lambda_i = max_j (x_j - c_ij), x lies in the span iff
    min_i (lambda_i + c_ij) = x_j for every j."""
    C = _matrix(rows)
    xv = tuple(Fraction(t) for t in x)
    if len(xv) != len(C[0]):
        raise DimensionMismatch("point length does not match matrix width")
    lam = [max(xv[j] - C[i][j] for j in range(len(xv)))
           for i in range(len(C))]
    return all(min(lam[i] + C[i][j] for i in range(len(C))) == xv[j]
               for j in range(len(xv)))


def tropical_vertices(rows: Sequence[Sequence]) -> tuple[int, ...]:
    """Indices of the rows forming the unique minimal generating set: rows
    that are not tropical combinations of the other rows, counting rows
    equal up to an additive constant once (first occurrence kept)."""
    C = _matrix(rows)
    seen = set()
    keep = []
    for i, r in enumerate(C):
        proj = tuple(x - r[0] for x in r)
        if proj not in seen:
            seen.add(proj)
            keep.append(i)
    out = []
    for i in keep:
        others = [C[k] for k in keep if k != i]
        if not others or not in_span(others, C[i]):
            out.append(i)
    return tuple(out)


def tropical_cyclic(m: int, n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Products-of-indices matrix (m rows, n+1 columns) with entries i*j,
    i = 1..m and j = 0..n, spanning the tropical cyclic polytope with m
    vertices in dimension n."""
    if m < 1 or n < 1:
        raise ValidationError("need m, n >= 1")
    return tuple(tuple(Fraction(i * j) for j in range(n + 1))
                 for i in range(1, m + 1))


def triangle_example() -> tuple[tuple[Fraction, ...], ...]:
    """Three generators in the tropical plane whose span has a
    two-dimensional cell."""
    return _matrix([(1, 0, 0), (0, 1, 0), (0, Fraction(1, 4), 1)])


def skeleton_graph(tc: TropicalComplex) -> Graph:
    gen = set(tc.generator_indices())
    ids = {k: (f"g{k}" if k in gen else f"p{k}")
           for k in range(len(tc.pseudo_vertices))}
    kinds = {ids[k]: ("generator" if k in gen else "generic") for k in ids}
    nodes = [ids[k] for k in sorted(ids)]
    edges = [(ids[a], ids[b]) for a, b in tc.complex.edges()]
    return graph(nodes, edges, kinds=kinds)


def project_to_R3(tc: TropicalComplex, side: str = "last_n") -> dict[str, tuple]:
    """Exact coordinates for the pseudo-vertices on one side of the
    envelope: last_n keeps the z-part with z_1 normalized away, first_m the
    y-part without the pinned y_1.  Only defined up to 3 dimensions."""
    if side not in ("first_m", "last_n"):
        raise ValidationError(f"unknown side {side!r}")
    gen = set(tc.generator_indices())
    out = {}
    for k, v in enumerate(tc.pseudo_vertices):
        if side == "first_m":
            p = tuple(v[: tc.m - 1])
        else:
            z = tc.z_part(v)
            p = tuple(zj - z[0] for zj in z[1:])
        if len(p) > 3:
            raise DimensionMismatch(f"{side} projection has {len(p)} coordinates")
        nid = f"g{k}" if k in gen else f"p{k}"
        out[nid] = p
    return out


def visualize_tropical(rows: Sequence[Sequence], mode: str = "projection",
                       side: str = "last_n",
                       params: spring.SpringParams | None = None,
                       seed: int = 0) -> Scene:
    """Draw the pseudo-vertex complex: exact low-dimensional projection, or
    a spring embedding of its 1-skeleton; cell dimensions colour the edges."""
    if mode not in ("projection", "spring"):
        raise ValidationError(f"unknown mode {mode!r}")
    tc = tropical_complex(rows)
    G = skeleton_graph(tc)
    meta = {
        "kind": "tropical",
        "mode": mode,
        "max_dim": tc.complex.max_dim,
        "pseudo_vertices": len(tc.pseudo_vertices),
        "tropical_vertices": len(tropical_vertices(rows)),
    }
    ids = {k: u for k, u in enumerate(G.nodes)}
    classes = {(ids[a], ids[b]): d for (a, b), d in tc.complex.edge_dims.items()}
    if mode == "projection":
        pos = project_to_R3(tc, side)
        meta["side"] = side
        return scene_from_embedding(G, pos, edge_classes=classes, metadata=meta)
    if params is None:
        maxdeg = max((G.degree(u) for u in G.nodes), default=1)
        params = spring.SpringParams(
            seed=seed, step_scale=min(0.2, 3.0 / (2 * maxdeg)))
    st, converged = spring.run(G, params)
    meta["converged"] = converged
    meta["iterations"] = st.iteration
    return scene_from_embedding(G, st.positions(), edge_classes=classes,
                                metadata=meta)
