"""Standard polytope families.

All constructions are exact.  The permutohedron uses its closed-form facet
description (one facet per proper nonempty coordinate subset) restricted to
the chart of the sum hyperplane; this is cross-checked against the convex
hull path in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from ..errors import ValidationError
from ..rational import AffineChart, Vec, vdot, vec
from .polytope import Polytope, _facet_of, convex_hull, polytope_from_inequalities


def simplex(d: int) -> Polytope:
    """d-simplex: hull of the origin and the standard unit vectors."""
    if d < 0:
        raise ValidationError("dimension must be nonnegative")
    pts = [[0] * d]
    for i in range(d):
        e = [0] * d
        e[i] = 1
        pts.append(e)
    return convex_hull(pts)


def cube(d: int) -> Polytope:
    """0/1-cube in R^d."""
    if d < 0:
        raise ValidationError("dimension must be nonnegative")
    if d == 0:
        return convex_hull([()])
    pts = [[(m >> i) & 1 for i in range(d)] for m in range(1 << d)]
    return convex_hull(pts)


def cross_polytope(d: int) -> Polytope:
    """Hull of the positive and negative unit vectors (octahedron for d=3)."""
    if d < 1:
        raise ValidationError("dimension must be positive")
    pts = []
    for i in range(d):
        for s in (1, -1):
            e = [0] * d
            e[i] = s
            pts.append(e)
    return convex_hull(pts)


def permutohedron(n: int) -> Polytope:
    """Hull of all permutations of (1, ..., n); dimension n - 1.

    Lives in the hyperplane sum(x) = n(n+1)/2; facets correspond to proper
    nonempty subsets S via sum_{i in S} x_i >= |S|(|S|+1)/2, tight exactly at
    permutations mapping S onto {1, ..., |S|}.
    """
    if n < 2:
        raise ValidationError("need n >= 2")
    perms = list(permutations(range(1, n + 1)))
    total = Fraction(n * (n + 1), 2)
    origin = vec([total / n] * n)
    dirs = []
    for i in range(n - 1):
        e = [0] * n
        e[i] = 1
        e[n - 1] = -1
        dirs.append(e)
    chart = AffineChart(origin, dirs)
    coords = [chart.to_chart(vec(p)) for p in perms]

    facets = []
    incidence = []
    for size in range(1, n):
        for S in combinations(range(n), size):
            # -sum_{i in S} x_i <= -size(size+1)/2, pushed through the chart
            a_amb = [0] * n
            for i in S:
                a_amb[i] = -1
            b = -Fraction(size * (size + 1), 2)
            a_chart = tuple(vdot(vec(a_amb), u) for u in chart.basis)
            b_chart = b - vdot(vec(a_amb), chart.origin)
            facets.append(_facet_of(a_chart, b_chart))
            Sset = set(S)
            small = set(range(1, size + 1))
            mask = 0
            for k, p in enumerate(perms):
                if {p[i] for i in Sset} == small:
                    mask |= 1 << k
            incidence.append(mask)
    return Polytope(n - 1, tuple(coords), tuple(facets), tuple(incidence), chart)


def cyclic(d: int, n: int, ts: list | None = None) -> Polytope:
    """Cyclic polytope: hull of n points on the moment curve (t, t^2, ..., t^d)."""
    if n < d + 1:
        raise ValidationError("need at least d+1 points")
    if ts is None:
        ts = list(range(1, n + 1))
    ts = [Fraction(t) for t in ts]
    if len(ts) != n or any(ts[i] >= ts[i + 1] for i in range(n - 1)):
        raise ValidationError("parameters must be strictly increasing")
    pts = [[t ** k for k in range(1, d + 1)] for t in ts]
    return convex_hull(pts)


def klee_minty_cube(d: int) -> Polytope:
    """Goldfarb's deformed d-cube: 0 <= x_1 <= 1 and
    (1/3) x_i <= x_{i+1} <= 1 - (1/3) x_i for i < d."""
    if d < 1:
        raise ValidationError("dimension must be positive")
    ineqs: list[tuple[Vec, Fraction]] = []

    def e(i, c) -> list:
        row = [Fraction(0)] * d
        row[i] = Fraction(c)
        return row

    ineqs.append((tuple(e(0, -1)), Fraction(0)))
    ineqs.append((tuple(e(0, 1)), Fraction(1)))
    for i in range(d - 1):
        lo = e(i, Fraction(1, 3))
        lo[i + 1] = Fraction(-1)
        ineqs.append((tuple(lo), Fraction(0)))
        hi = e(i, Fraction(1, 3))
        hi[i + 1] = Fraction(1)
        ineqs.append((tuple(hi), Fraction(1)))
    return polytope_from_inequalities(ineqs, d)


def product(P: Polytope, Q: Polytope) -> Polytope:
    """Cartesian product; vertices are coordinate concatenations (P-vertex
    index varying slowest), facets are the padded facets of the factors."""
    dim = P.dim + Q.dim
    verts = []
    for vp in P.vertices:
        for vq in Q.vertices:
            verts.append(vp + vq)
    zp = (0,) * P.dim
    zq = (0,) * Q.dim
    facets = []
    incidence = []
    nq = Q.n_vertices
    for (a, b), inc in zip(P.facets, P.incidence):
        facets.append((a + zq, b))
        mask = 0
        for i in _bits_local(inc):
            mask |= ((1 << nq) - 1) << (i * nq)
        incidence.append(mask)
    for (a, b), inc in zip(Q.facets, Q.incidence):
        facets.append((zp + a, b))
        block = 0
        for j in _bits_local(inc):
            block |= 1 << j
        mask = 0
        for i in range(P.n_vertices):
            mask |= block << (i * nq)
        incidence.append(mask)
    return Polytope(dim, tuple(verts), tuple(facets), tuple(incidence), None)


def _bits_local(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
