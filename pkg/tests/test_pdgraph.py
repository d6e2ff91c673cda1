"""Primal-dual graphs of simplicial complexes: construction invariants,
triangulations, embedding quality statistics."""

import json
import random

import pytest

from polydraw import pdgraph as pg
from polydraw import spring
from polydraw.errors import ValidationError
from polydraw.geom.graphs import is_isomorphic, graph


def complete_graph_on(nodes):
    return graph(nodes, [(a, b) for i, a in enumerate(nodes)
                         for b in nodes[i + 1:]])


def test_complex_validation():
    with pytest.raises(ValidationError):
        pg.simplicial_complex(["a", "a"], [["a"]])
    with pytest.raises(ValidationError):
        pg.simplicial_complex(["a", "b"], [["a", "z"]])
    with pytest.raises(ValidationError):
        pg.simplicial_complex(["a", "b", "c"],
                              [["a", "b", "c"], ["a", "b"]])
    with pytest.raises(ValidationError):
        pg.simplicial_complex(["a", "b"], [["a", "b"], ["b", "a"]])


def test_f_vector_closure():
    K = pg.tetrahedron_boundary()
    assert K.f_vector() == (4, 6, 4)
    K2 = pg.simplicial_complex(list("abcd"), [["a", "b", "c"], ["c", "d"]])
    assert K2.f_vector() == (4, 4, 1)
    assert not K2.is_pure
    assert K.is_pure


def test_triangle_counts():
    K = pg.simplicial_complex(list("abc"), [["a", "b", "c"]])
    pd = pg.build_pd_graph(K)
    assert pd.counts() == {"primal": 3, "dual": 0, "artificial": 3}
    assert not pd.non_manifold


def test_tetrahedron_boundary_dual_is_complete():
    pd = pg.build_pd_graph(pg.tetrahedron_boundary())
    assert pd.counts() == {"primal": 6, "dual": 6, "artificial": 12}
    dual_nodes = [u for u in pd.graph.nodes if u.startswith("d:")]
    dual_edges = [e for e in pd.graph.edges
                  if pd.edge_kinds[e] == "dual"]
    D = graph(dual_nodes, dual_edges)
    assert is_isomorphic(D, complete_graph_on(["0", "1", "2", "3"]))


def test_node_and_edge_count_identities():
    for K in (pg.tetrahedron_boundary(), pg.cube4_triangulation(),
              pg.genus2_solid()):
        pd = pg.build_pd_graph(K)
        f = K.f_vector()
        counts = pd.counts()
        assert len(pd.graph.nodes) == f[0] + len(K.facets)
        assert counts["primal"] == f[1]
        assert counts["artificial"] == sum(len(F) for F in K.facets)


def test_cube4_triangulation_f_vector():
    K = pg.cube4_triangulation()
    assert K.f_vector() == (16, 57, 86, 60, 16)
    assert K.is_pure
    assert len(K.facets[0]) == 5  # 4-simplices


def test_cube4_pd_graph_counts():
    pd = pg.build_pd_graph(pg.cube4_triangulation())
    assert len(pd.graph.nodes) == 32
    c = pd.counts()
    assert c["primal"] == 57
    assert c["artificial"] == 80
    assert c["dual"] == 20
    assert not pd.non_manifold


def test_genus2_solid_shape():
    K = pg.genus2_solid()
    f = K.f_vector()
    assert len(K.facets) == 78
    assert f[0] == 48
    assert K.is_pure and len(K.facets[0]) == 4
    # Euler characteristic of a genus-2 handlebody is -1
    assert f[0] - f[1] + f[2] - f[3] == -1


def test_kuhn_cells_tile_the_unit_cube():
    cells = pg.kuhn_cells((0, 0, 0))
    assert len(cells) == 6
    assert all(len(c) == 4 for c in cells)
    corners = {v for c in cells for v in c}
    assert "0,0,0" in corners and "1,1,1" in corners
    assert len({frozenset(c) for c in cells}) == 6


def test_non_manifold_ridge_becomes_a_dual_clique():
    # three triangles share the edge ab
    K = pg.simplicial_complex(
        list("abcde"),
        [["a", "b", "c"], ["a", "b", "d"], ["a", "b", "e"]])
    pd = pg.build_pd_graph(K)
    assert pd.non_manifold
    dual_edges = [e for e in pd.graph.edges if pd.edge_kinds[e] == "dual"]
    assert len(dual_edges) == 3  # clique on the three cofacets


def test_pd_lengths_table_and_validation():
    pd = pg.build_pd_graph(pg.tetrahedron_boundary())
    lengths = pg.pd_lengths(pd, 1.0, 0.5, 0.2)
    for e, l in lengths.items():
        assert l == {"primal": 1.0, "dual": 0.5, "artificial": 0.2}[
            pd.edge_kinds[e]]
    with pytest.raises(ValidationError):
        pg.pd_lengths(pd, 1.0, 0.0, 0.2)


def test_complex_from_json_and_off_text():
    K1 = pg.complex_from_text(json.dumps(
        {"vertices": ["a", "b", "c"], "facets": [["a", "b", "c"]]}))
    assert K1.f_vector() == (3, 3, 1)
    off = "OFF\n4 2 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n"
    K2 = pg.complex_from_text(off)
    assert K2.f_vector()[0] == 4
    assert len(K2.facets) == 2


def test_single_tetrahedron_dual_sits_inside():
    K = pg.simplicial_complex(list("abcd"), [["a", "b", "c", "d"]])
    pd = pg.build_pd_graph(K)
    st, converged = pg.embed_pd(pd, pg.pd_lengths(pd, 1.0, 1.0, 0.3))
    assert converged
    assert pg.dual_containment_fraction(pd, st.positions()) == 1.0


def test_two_tetrahedra_duals_sit_inside():
    K = pg.simplicial_complex(list("abcde"),
                              [["a", "b", "c", "d"], ["b", "c", "d", "e"]])
    pd = pg.build_pd_graph(K)
    st, converged = pg.embed_pd(pd)
    assert converged
    assert pg.dual_containment_fraction(pd, st.positions()) == 1.0


def test_short_artificial_edges_center_the_duals():
    """Pulling dual nodes toward their facets' vertices beats giving the
    artificial ties the same slack as the real edges."""
    K = pg.genus2_solid()
    pd = pg.build_pd_graph(K)
    params = spring.SpringParams(seed=0, delta_rep=0.1, step_scale=0.05,
                                 max_iters=4000, threshold=1e-5)
    tight, _ = pg.embed_pd(pd, pg.pd_lengths(pd, 1.0, 0.5, 0.2), params)
    slack, _ = pg.embed_pd(pd, pg.pd_lengths(pd, 1.0, 0.5, 1.0), params)
    f_tight = pg.dual_containment_fraction(pd, tight.positions())
    f_slack = pg.dual_containment_fraction(pd, slack.positions())
    assert f_tight >= 0.30
    assert f_tight - f_slack >= 0.25


def test_visualize_pd_metadata_and_kinds():
    pd = pg.build_pd_graph(pg.tetrahedron_boundary())
    s = pg.visualize_pd(pd, seed=1)
    assert s.metadata["kind"] == "pdgraph"
    assert s.metadata["counts"] == pd.counts()
    assert 0.0 <= s.metadata["dual_containment"] <= 1.0
    kinds = {e.kind for e in s.edges}
    assert kinds == {"primal", "dual", "artificial"}
    s2 = pg.visualize_pd(pd, seed=1, hide_artificial=True)
    assert {e.kind for e in s2.edges} == {"primal", "dual"}
    assert len(s2.nodes) == len(s.nodes)


def test_visualize_pd_is_deterministic():
    from polydraw.scene import scene_to_json
    pd = pg.build_pd_graph(pg.tetrahedron_boundary())
    assert (scene_to_json(pg.visualize_pd(pd, seed=4))
            == scene_to_json(pg.visualize_pd(pd, seed=4)))
