"""Scene container and exporters: validation, JSON round trip, SVG/OBJ."""

import pytest

from polydraw import rubber
from polydraw.errors import DimensionMismatch, ValidationError
from polydraw.geom.lattice import graph_of
from polydraw.geom.standard import cube
from polydraw.scene import (Scene, SceneEdge, SceneNode, color_for_class,
                            export_obj, export_scene, export_svg,
                            scene_from_dict, scene_from_json,
                            scene_from_polytope, scene_to_dict, scene_to_json)


def flat_scene():
    nodes = (SceneNode("a", (0.0, 0.0)), SceneNode("b", (1.0, 0.0)),
             SceneNode("c", (0.0, 1.0), label="C", kind="taxon"))
    edges = (SceneEdge("a", "b"), SceneEdge("b", "c", kind="dual",
                                            color="#ff0000"))
    return Scene(nodes, edges, faces=(("a", "b", "c"),),
                 metadata={"kind": "demo"})


def test_scene_validation():
    with pytest.raises(ValidationError):
        Scene((SceneNode("a", (0.0, 0.0)), SceneNode("a", (1.0, 0.0))), ())
    with pytest.raises(ValidationError):
        Scene((SceneNode("a", (0.0, 0.0)), SceneNode("b", (1.0, 0.0, 2.0))),
              ())
    with pytest.raises(ValidationError):
        Scene((SceneNode("a", (0.0,)),), ())
    with pytest.raises(ValidationError):
        Scene((SceneNode("a", (0.0, 0.0)),), (SceneEdge("a", "zz"),))
    with pytest.raises(ValidationError):
        Scene((SceneNode("a", (0.0, 0.0)),), (), faces=(("a", "zz"),))


def test_json_round_trip_preserves_everything():
    s = flat_scene()
    t = scene_from_json(scene_to_json(s))
    assert t.nodes == s.nodes
    assert t.edges == s.edges
    assert t.faces == s.faces
    assert t.metadata == s.metadata


def test_malformed_scene_data_is_rejected():
    with pytest.raises(ValidationError):
        scene_from_json("{nope")
    with pytest.raises(ValidationError):
        scene_from_dict({"nodes": [{"id": "a"}], "edges": []})


def test_scene_from_polytope_matches_combinatorics():
    s = scene_from_polytope(cube(3))
    assert len(s.nodes) == 8
    assert len(s.edges) == 12
    assert len(s.faces) == 6
    with pytest.raises(DimensionMismatch):
        scene_from_polytope(cube(4))


def test_svg_export_of_flat_scene():
    text = export_svg(flat_scene())
    assert text.startswith("<svg")
    assert text.count("<circle") == 3
    assert text.count("<line") == 2
    assert "#ff0000" in text


def test_svg_needs_camera_for_solid_scenes():
    Q, _ = rubber.realize_graph(graph_of(cube(3)))
    s = scene_from_polytope(Q)
    with pytest.raises(DimensionMismatch):
        export_svg(s)
    cam = Scene(s.nodes, s.edges, s.faces,
                {**s.metadata, "camera": [[1, 0, 0], [0, 1, 0]]})
    assert export_svg(cam).startswith("<svg")
    bad = Scene(s.nodes, s.edges, s.faces, {**s.metadata, "camera": [[1, 0]]})
    with pytest.raises(DimensionMismatch):
        export_svg(bad)


def test_obj_export_counts():
    Q, _ = rubber.realize_graph(graph_of(cube(3)))
    s = scene_from_polytope(Q)
    obj = export_obj(s)
    lines = obj.splitlines()
    assert sum(l.startswith("v ") for l in lines) == 8
    assert sum(l.startswith("f ") for l in lines) == 6
    # every edge lies on a face, so no standalone polyline records
    assert sum(l.startswith("l ") for l in lines) == 0


def test_obj_export_keeps_faceless_edges_as_polylines():
    s = Scene((SceneNode("a", (0.0, 0.0)), SceneNode("b", (1.0, 0.0))),
              (SceneEdge("a", "b"),))
    lines = export_obj(s).splitlines()
    assert sum(l.startswith("l ") for l in lines) == 1


def test_export_scene_dispatch_and_bytes():
    s = flat_scene()
    assert export_scene(s, "json").startswith(b"{")
    assert export_scene(s, "svg").startswith(b"<svg")
    assert isinstance(export_scene(s, "obj"), bytes)
    with pytest.raises(ValidationError):
        export_scene(s, "gif")
    assert export_scene(s, "json") == export_scene(s, "json")
    assert export_scene(s, "svg") == export_scene(s, "svg")


def test_color_classes_are_stable_and_distinct():
    assert color_for_class(None) is None
    cs = [color_for_class(k) for k in range(4)]
    assert len(set(cs)) == 4
    assert color_for_class(2) == color_for_class(2)
