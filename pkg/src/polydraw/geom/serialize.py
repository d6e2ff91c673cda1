"""JSON (de)serialization for polytopes and polyhedra.

Rationals travel as exact strings ("3", "-7/2"); keys are emitted sorted so
equal objects serialize to identical bytes.  Embedded (lower-dimensional)
polytopes carry their chart under "embedding" so round-trips are bit-exact.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ..errors import ValidationError
from ..rational import AffineChart, vec
from .polytope import Polyhedron, Polytope, _facet_of, convex_hull


def _fr(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"bad rational {s!r}: {e}") from None


def _vec_out(v) -> list[str]:
    return [str(Fraction(x)) for x in v]


def polytope_to_dict(P: Polytope) -> dict:
    out = {
        "dim": P.dim,
        "vertices": [_vec_out(v) for v in P.vertices],
        "inequalities": [{"a": _vec_out(a), "b": str(b)} for a, b in P.facets],
        "rays": [],
    }
    if P.embedding is not None:
        out["embedding"] = {
            "origin": _vec_out(P.embedding.origin),
            "basis": [_vec_out(u) for u in P.embedding.basis],
        }
    return out


def polytope_from_dict(data: dict) -> Polytope:
    try:
        dim = int(data["dim"])
        verts = [tuple(_fr(x) for x in v) for v in data["vertices"]]
        ineqs = [(tuple(_fr(x) for x in row["a"]), _fr(row["b"]))
                 for row in data["inequalities"]]
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed polytope data: {e}") from None
    if data.get("rays"):
        raise ValidationError("polytope data must not carry rays")
    facets = tuple(_facet_of(a, b) for a, b in ineqs)
    incidence = []
    from ..rational import vdot

    for a, b in facets:
        m = 0
        for i, v in enumerate(verts):
            if vdot(a, v) == b:
                m |= 1 << i
        incidence.append(m)
    embedding = None
    if "embedding" in data:
        emb = data["embedding"]
        origin = vec([_fr(x) for x in emb["origin"]])
        basis = [vec([_fr(x) for x in u]) for u in emb["basis"]]
        embedding = AffineChart(origin, basis)
        if embedding.basis != basis:
            raise ValidationError("embedding basis must be orthogonal and independent")
    P = Polytope(dim, tuple(verts), facets, tuple(incidence), embedding)
    _validate_polytope(P)
    return P


def _validate_polytope(P: Polytope) -> None:
    if any(len(v) != P.dim for v in P.vertices):
        raise ValidationError("vertex/dim mismatch")
    if any(len(a) != P.dim for a, _ in P.facets):
        raise ValidationError("inequality/dim mismatch")
    for v in P.vertices:
        if not P.contains(v):
            raise ValidationError("vertex violates an inequality")
    # both descriptions must define the same polytope
    Q = convex_hull(P.vertices)
    if Q.dim != P.dim:
        raise ValidationError("vertices do not span the stated dimension")
    if set(Q.facets) != set(P.facets):
        raise ValidationError("inequalities are not the facets of the vertex hull")


def polytope_to_json(P: Polytope) -> str:
    return json.dumps(polytope_to_dict(P), sort_keys=True, indent=1)


def polytope_from_json(text: str) -> Polytope:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"bad JSON: {e}") from None
    return polytope_from_dict(data)


def polyhedron_to_dict(Q: Polyhedron) -> dict:
    return {
        "dim": Q.dim,
        "vertices": [_vec_out(v) for v in Q.vertices],
        "inequalities": [{"a": _vec_out(a), "b": str(b)} for a, b in Q.inequalities],
        "rays": [_vec_out(r) for r in Q.rays],
    }


def polyhedron_to_json(Q: Polyhedron) -> str:
    return json.dumps(polyhedron_to_dict(Q), sort_keys=True, indent=1)
