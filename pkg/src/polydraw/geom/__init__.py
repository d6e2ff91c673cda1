"""Exact polytope kernel: enumeration, hulls, lattices, graphs, families."""

from .dd import enumerate_brute, enumerate_polyhedron
from .graphs import (Graph, graph, graph_from_dict, graph_to_dict,
                     is_connected, is_isomorphic, k_connected, to_networkx)
from .lattice import (
    FaceLattice,
    dual_graph_of,
    f_vector,
    face_lattice,
    faces_of_dim,
    graph_of,
    is_simple,
)
from .polytope import (
    Polyhedron,
    Polytope,
    convex_hull,
    faces_of_polyhedron,
    polar,
    polyhedron_from_inequalities,
    polytope_from_inequalities,
)
from .serialize import (
    polyhedron_to_dict,
    polyhedron_to_json,
    polytope_from_dict,
    polytope_from_json,
    polytope_to_dict,
    polytope_to_json,
)
from .standard import (
    cross_polytope,
    cube,
    cyclic,
    klee_minty_cube,
    permutohedron,
    product,
    simplex,
)

__all__ = [
    "Graph", "FaceLattice", "Polyhedron", "Polytope",
    "convex_hull", "cross_polytope", "cube", "cyclic", "dual_graph_of",
    "enumerate_brute", "enumerate_polyhedron", "f_vector", "face_lattice",
    "faces_of_dim", "faces_of_polyhedron", "graph",
    "graph_from_dict",
    "graph_to_dict", "graph_of",
    "is_connected", "is_isomorphic", "is_simple", "k_connected",
    "klee_minty_cube", "permutohedron", "polar", "polyhedron_from_inequalities",
    "polyhedron_to_dict", "polyhedron_to_json", "polytope_from_dict",
    "polytope_from_json", "polytope_from_inequalities", "polytope_to_dict",
    "polytope_to_json", "product", "simplex", "to_networkx",
]
