"""Exact linear algebra over the rationals.

Vectors are plain tuples of ``fractions.Fraction``; direction vectors and
hyperplane normals are kept as primitive integer tuples (content 1) wherever
possible so that the hot loops run on machine integers.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


def vec(xs: Iterable) -> Vec:
    return tuple(Fraction(x) for x in xs)


def vadd(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(s, u: Sequence) -> Vec:
    return tuple(s * a for a in u)


def vdot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v, strict=True))


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def primitive(u: Sequence[int]) -> IntVec:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = 0
    for a in u:
        g = gcd(g, a)
    if g <= 1:
        return tuple(u)
    return tuple(a // g for a in u)


def clear_denominators(u: Sequence) -> IntVec:
    """Scale a rational vector by a positive rational into a primitive integer vector."""
    fr = [Fraction(a) for a in u]
    lcm = 1
    for a in fr:
        d = a.denominator
        lcm = lcm // gcd(lcm, d) * d
    return primitive(tuple(int(a * lcm) for a in fr))


def mat_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a matrix given as a sequence of rational rows."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    col = 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = 1 / prow[col]
        for i in range(rank + 1, len(m)):
            f = m[i][col] * inv
            if f:
                ri = m[i]
                for j in range(col, ncols):
                    ri[j] -= f * prow[j]
        rank += 1
        col += 1
    return rank


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss-style) elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    col = 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        pv = prow[col]
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            if f:
                ri = m[i]
                for j in range(col, ncols):
                    ri[j] = ri[j] * pv - f * prow[j]
                # keep entries from blowing up
                g = 0
                for a in ri:
                    g = gcd(g, a)
                if g > 1:
                    for j in range(ncols):
                        ri[j] //= g
        rank += 1
        col += 1
    return rank


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for no points, 0 for a single point)."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    return mat_rank([vsub(p, p0) for p in pts[1:]])


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """One solution of A x = b, or None if inconsistent.

    If the system is underdetermined an arbitrary solution (free variables
    set to zero) is returned.
    """
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs, strict=True)]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = 1 / prow[col]
        for j in range(col, ncols + 1):
            prow[j] *= inv
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                ri = m[i]
                for j in range(col, ncols + 1):
                    ri[j] -= f * prow[j]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(m)):
        if m[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = m[r][ncols]
    return tuple(x)


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vec]:
    """Basis of {x : A x = 0}."""
    rows = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty system")
        ncols = len(rows[0])
    m = [r[:] for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = 1 / prow[col]
        for j in range(col, ncols):
            prow[j] *= inv
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                ri = m[i]
                for j in range(col, ncols):
                    ri[j] -= f * prow[j]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(tuple(v))
    return basis


def gram_schmidt(vectors: Sequence[Sequence]) -> list[Vec]:
    """Orthogonal (not normalized) rational basis of the span.

    Dependent inputs are skipped, so the result is always a basis.
    """
    basis: list[Vec] = []
    for v in vectors:
        w = vec(v)
        for u in basis:
            w = vsub(w, vscale(vdot(w, u) / vdot(u, u), u))
        if not is_zero(w):
            basis.append(tuple(clear_denominators(w)))  # keep entries small
    return [vec(u) for u in basis]


class AffineChart:
    """Rational chart of an affine subspace: x = origin + sum_i c_i * basis_i.

    The basis is orthogonal (pairwise perpendicular, not unit length), so the
    chart coordinates of a point p in the subspace are exact:
    c_i = (p - origin) . basis_i / (basis_i . basis_i).
    ``axis_scales`` gives the float lengths of the basis vectors, used by
    exporters to turn chart coordinates into a similarity-faithful picture.
    """

    def __init__(self, origin: Sequence, directions: Sequence[Sequence]):
        self.origin: Vec = vec(origin)
        self.basis: list[Vec] = gram_schmidt(directions)
        self._norms2 = [vdot(u, u) for u in self.basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_chart(self, p: Sequence) -> Vec:
        d = vsub(vec(p), self.origin)
        return tuple(vdot(d, u) / n2 for u, n2 in zip(self.basis, self._norms2))

    def to_ambient(self, c: Sequence) -> Vec:
        x = self.origin
        for ci, u in zip(c, self.basis, strict=True):
            if ci:
                x = vadd(x, vscale(Fraction(ci), u))
        return x

    def contains(self, p: Sequence) -> bool:
        return vec(p) == self.to_ambient(self.to_chart(p))

    def axis_scales(self) -> list[float]:
        return [float(n2) ** 0.5 for n2 in self._norms2]

    def __eq__(self, other) -> bool:
        return (isinstance(other, AffineChart)
                and self.origin == other.origin and self.basis == other.basis)

    def __repr__(self) -> str:
        return f"AffineChart(dim={self.dim}, ambient={len(self.origin)})"


def affine_chart_of(points: Sequence[Sequence]) -> AffineChart:
    """Chart of the affine hull of a point set."""
    pts = [vec(p) for p in points]
    if not pts:
        raise ValueError("no points")
    return AffineChart(pts[0], [vsub(p, pts[0]) for p in pts[1:]])
