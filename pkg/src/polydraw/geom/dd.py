"""Vertex and ray enumeration for rational polyhedra.

Two paths are provided:

* ``enumerate_brute`` checks every maximal-rank tight subset of inequalities
  with exact rank tests.  It is deliberately naive and serves as the
  correctness oracle.
* ``enumerate_polyhedron`` homogenizes to a pointed cone and runs the double
  description method with the combinatorial adjacency test.  This is the
  production path; it is tested against the oracle.

Inequalities are pairs (a, b) meaning a . x <= b, with rational entries.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..errors import EmptyPolyhedron, NotPointed
from ..rational import (
    IntVec,
    Vec,
    clear_denominators,
    gram_schmidt,
    int_rank,
    mat_rank,
    nullspace,
    primitive,
    solve,
    vdot,
    vec,
)

Ineq = tuple[Vec, Fraction]


def _int_rows(ineqs: Sequence[tuple[Sequence, object]]) -> list[IntVec]:
    """Homogenized primitive integer rows (b, -a): row . (1, x) >= 0 iff a.x <= b."""
    rows = []
    for a, b in ineqs:
        rows.append(clear_denominators((Fraction(b),) + tuple(-Fraction(ai) for ai in a)))
    return rows


def _initial_independent(rows: list[IntVec], d: int) -> list[int]:
    picked: list[int] = []
    for i, r in enumerate(rows):
        if int_rank([rows[j] for j in picked] + [r]) > len(picked):
            picked.append(i)
            if len(picked) == d:
                return picked
    raise NotPointed("inequality normals do not span; the feasible set contains a line")


def _inverse_columns(rows: list[Vec]) -> list[IntVec]:
    """Primitive integer columns of M^-1 for a square nonsingular M."""
    d = len(rows)
    cols = []
    for j in range(d):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(d)]
        x = solve(rows, rhs)
        assert x is not None
        cols.append(clear_denominators(x))
    return cols


def extreme_rays(int_rows: list[IntVec]) -> list[IntVec]:
    """Extreme rays of the pointed cone {x : M x >= 0}, M integral.

    Requires rank(M) = dim (pointedness); raises NotPointed otherwise.
    Returns primitive integer generators, one per extreme ray.
    """
    d = len(int_rows[0])
    init = _initial_independent(int_rows, d)
    m = len(int_rows)
    rays: list[IntVec] = []
    for col in _inverse_columns([vec(int_rows[i]) for i in init]):
        rays.append(primitive(col))

    def dot_row(i: int, r: IntVec) -> int:
        return sum(a * x for a, x in zip(int_rows[i], r))

    # active-constraint bitmask per ray, over processed rows only
    processed = 0
    for i in init:
        processed |= 1 << i
    active: list[int] = []
    for r in rays:
        mask = 0
        for i in init:
            if dot_row(i, r) == 0:
                mask |= 1 << i
        active.append(mask)

    remaining = [i for i in range(m) if not (processed >> i) & 1]
    for i in remaining:
        vals = [dot_row(i, r) for r in rays]
        if all(v >= 0 for v in vals):
            processed |= 1 << i
            for k, v in enumerate(vals):
                if v == 0:
                    active[k] |= 1 << i
            continue
        pos = [k for k, v in enumerate(vals) if v > 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not pos and not zero:
            rays, active = [], []
            break
        new_rays: list[IntVec] = []
        new_active: list[int] = []
        for p in pos:
            ap = active[p]
            for n in neg:
                common = ap & active[n]
                if common.bit_count() < d - 2:
                    continue
                adjacent = True
                for t in range(len(rays)):
                    if t == p or t == n:
                        continue
                    if common & ~active[t] == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = tuple(vals[p] * rn - vals[n] * rp
                             for rp, rn in zip(rays[p], rays[n]))
                comb = primitive(comb)
                mask = 0
                pm = processed | (1 << i)
                for j in range(m):
                    if (pm >> j) & 1 and dot_row(j, comb) == 0:
                        mask |= 1 << j
                new_rays.append(comb)
                new_active.append(mask)
        keep = pos + zero
        processed |= 1 << i
        rays2, active2 = [], []
        for k in keep:
            rays2.append(rays[k])
            active2.append(active[k] | ((1 << i) if vals[k] == 0 else 0))
        rays2.extend(new_rays)
        active2.extend(new_active)
        rays, active = rays2, active2
    return rays


def enumerate_polyhedron(ineqs: Sequence[tuple[Sequence, object]],
                         dim: int) -> tuple[list[Vec], list[IntVec]]:
    """All vertices and extreme rays of {x in R^dim : a.x <= b for (a, b) in ineqs}.

    Raises EmptyPolyhedron when infeasible and NotPointed when the feasible
    set contains a line (no vertices exist).
    """
    if dim == 0:
        for a, b in ineqs:
            if Fraction(b) < 0:
                raise EmptyPolyhedron("0-dimensional system infeasible")
        return [()], []
    a_rows = [clear_denominators(a) for a, _ in ineqs if not all(Fraction(x) == 0 for x in a)]
    if int_rank(a_rows) < dim:
        _check_lineality_feasible(ineqs, dim)
        raise NotPointed("feasible set contains a line")
    rows = _int_rows(ineqs)
    rows.append((1,) + (0,) * dim)  # homogenization: x0 >= 0
    rays_h = extreme_rays(rows)
    verts: list[Vec] = []
    rays: list[IntVec] = []
    for r in rays_h:
        if r[0] > 0:
            x0 = Fraction(r[0])
            verts.append(tuple(Fraction(x) / x0 for x in r[1:]))
        elif r[0] == 0:
            rays.append(primitive(r[1:]))
    if not verts:
        raise EmptyPolyhedron("inequality system is infeasible")
    return verts, rays


def _check_lineality_feasible(ineqs, dim: int) -> None:
    """Distinguish 'empty' from 'not pointed' when normals do not span.

    Substitutes x = B u for a basis B of the normals' span and enumerates the
    reduced (pointed) system; emptiness propagates.
    """
    for a, b in ineqs:
        if all(Fraction(x) == 0 for x in a) and Fraction(b) < 0:
            raise EmptyPolyhedron("contradictory trivial constraint")
    basis = gram_schmidt([a for a, _ in ineqs])
    if not basis:
        # no effective constraints: whole space, certainly not pointed
        return
    reduced = []
    for a, b in ineqs:
        av = vec(a)
        reduced.append((tuple(vdot(av, u) for u in basis), Fraction(b)))
    enumerate_polyhedron(reduced, len(basis))  # raises EmptyPolyhedron if infeasible


def enumerate_brute(ineqs: Sequence[tuple[Sequence, object]],
                    dim: int) -> tuple[list[Vec], list[IntVec]]:
    """Oracle enumeration: exhaustive tight-subset search with exact rank tests.

    Vertices: every dim-subset of constraints with independent normals whose
    unique solution satisfies the whole system.  Rays: extreme rays of the
    recession cone found the same way one dimension down, kept only if some
    vertex exists and the ray direction is feasible.  Exponential; use only
    on small systems.
    """
    ineqs = [(vec(a), Fraction(b)) for a, b in ineqs]
    verts: set[Vec] = set()
    for idxs in combinations(range(len(ineqs)), dim):
        rows = [ineqs[i][0] for i in idxs]
        if mat_rank(rows) < dim:
            continue
        x = solve(rows, [ineqs[i][1] for i in idxs])
        if x is None:
            continue
        if all(vdot(a, x) <= b for a, b in ineqs):
            verts.add(x)
    if not verts:
        a_rows = [clear_denominators(a) for a, _ in ineqs]
        if int_rank(a_rows) < dim:
            _check_lineality_feasible(ineqs, dim)
            raise NotPointed("feasible set contains a line")
        raise EmptyPolyhedron("inequality system is infeasible")
    rays: set[IntVec] = set()
    if dim == 1:
        for sgn in (1, -1):
            if all(sgn * a[0] <= 0 for a, _ in ineqs):
                rays.add((sgn,))
    else:
        for idxs in combinations(range(len(ineqs)), dim - 1):
            rows = [ineqs[i][0] for i in idxs]
            if mat_rank(rows) < dim - 1:
                continue
            kern = nullspace(rows, ncols=dim)
            if len(kern) != 1:
                continue
            for sgn in (1, -1):
                r = tuple(sgn * x for x in kern[0])
                if all(vdot(a, r) <= 0 for a, _ in ineqs):
                    rays.add(clear_denominators(r))
    return sorted(verts), sorted(rays)
