"""HTTP service: command endpoints, session routing, structured errors,
log replay."""

import pytest
from fastapi.testclient import TestClient

from polydraw import service
from polydraw.geom.lattice import graph_of
from polydraw.geom.standard import cross_polytope, cube, permutohedron
from polydraw.spring import SpringParams


def schlegel_client(P=None, facet=0):
    P = P if P is not None else cross_polytope(3)
    sessions = {"default": service.SchlegelSession(P, facet)}
    return TestClient(service.create_app(sessions))


def spring_client():
    G = graph_of(cube(3))
    sessions = {"default": service.SpringSession(
        G, SpringParams(seed=0, step_scale=0.2))}
    return TestClient(service.create_app(sessions))


def both_client():
    sessions = {
        "schlegel": service.SchlegelSession(permutohedron(4), 0),
        "spring": service.SpringSession(graph_of(cube(3)),
                                        SpringParams(step_scale=0.2)),
    }
    return TestClient(service.create_app(sessions))


def test_sessions_listing_and_scene_shape():
    c = both_client()
    assert c.get("/sessions").json() == {"schlegel": "schlegel",
                                         "spring": "spring"}
    r = c.get("/scene", params={"session": "schlegel"})
    assert r.status_code == 200
    body = r.json()
    assert body["session_kind"] == "schlegel"
    assert {"scene", "state", "session_kind"} <= set(body)
    assert len(body["scene"]["nodes"]) == 24


def test_sole_session_needs_no_name():
    c = schlegel_client()
    assert c.get("/scene").status_code == 200


def test_unknown_session_is_404():
    c = both_client()
    assert c.get("/scene", params={"session": "nope"}).status_code == 404
    # with two sessions and no "default", a bare request cannot resolve
    assert c.get("/scene").status_code == 404


def test_zoom_accepts_floats_and_fraction_strings():
    c = schlegel_client()
    r = c.post("/schlegel/zoom", json={"zeta": 0.25})
    assert r.status_code == 200
    assert r.json()["state"]["zoom"] == 0.25
    r = c.post("/schlegel/zoom", json={"zeta": "1/3"})
    assert r.status_code == 200
    assert r.json()["state"]["zoom_exact"] == "1/3"


def test_invalid_zoom_is_structured_409_and_state_survives():
    c = schlegel_client()
    before = c.get("/scene").json()["state"]
    r = c.post("/schlegel/zoom", json={"zeta": 2.0})
    assert r.status_code == 409
    body = r.json()
    assert body["error"] == "invalid viewpoint"
    assert "detail" in body
    after = c.get("/scene").json()["state"]
    assert after == before
    # the rejected command is not logged
    assert c.get("/log").json()["commands"] == []


def test_select_facet_switches_base_and_ambiguity_is_reported():
    P = cube(3)
    c = schlegel_client(P)
    mask = P.incidence[3]
    marked = [i for i in range(P.n_vertices) if (mask >> i) & 1]
    r = c.post("/schlegel/select_facet", json={"marked": marked})
    assert r.status_code == 200
    assert r.json()["state"]["facet"] == 3
    r = c.post("/schlegel/select_facet", json={"marked": [0]})
    assert r.status_code == 409
    assert r.json()["error"] == "ambiguous facet"


def test_drag_requires_exactly_one_payload_arm():
    c = schlegel_client()
    r = c.post("/schlegel/drag", json={"vertex": 0})
    assert r.status_code == 409
    assert r.json()["error"] == "validation"
    r = c.post("/schlegel/drag",
               json={"vertex": 0, "displacement": [0.01, 0.01],
                     "target": [0.0, 0.0]})
    assert r.status_code == 409


def test_facet_vertex_drag_and_nonfacet_drag():
    P = cube(3)
    c = schlegel_client(P, facet=0)
    base = P.incidence[0]
    on = [i for i in range(8) if (base >> i) & 1]
    off = [i for i in range(8) if not (base >> i) & 1]
    r = c.post("/schlegel/drag",
               json={"vertex": on[0], "displacement": ["1/50", "1/50"]})
    assert r.status_code == 200
    r = c.get("/scene")
    pos = {n["id"]: n["position"] for n in r.json()["scene"]["nodes"]}
    r = c.post("/schlegel/drag",
               json={"vertex": off[0], "target": ["1/4", "1/4"]})
    assert r.status_code == 200
    assert len(c.get("/log").json()["commands"]) == 2


def test_wrong_chart_dimension_is_rejected():
    c = schlegel_client(cube(3))
    r = c.post("/schlegel/drag",
               json={"vertex": 1, "target": [0.1, 0.1, 0.1]})
    assert r.status_code == 409
    assert r.json()["error"] == "dimension mismatch"


def test_kind_gating_rejects_foreign_commands():
    c = both_client()
    r = c.post("/spring/step", params={"session": "schlegel"},
               json={"count": 1})
    assert r.status_code == 400
    r = c.post("/schlegel/zoom", params={"session": "spring"},
               json={"zeta": 0.5})
    assert r.status_code == 400


def test_request_models_reject_unknown_fields():
    c = schlegel_client()
    r = c.post("/schlegel/zoom", json={"zeta": 0.5, "extra": 1})
    assert r.status_code == 422


def test_spring_step_advances_and_params_update():
    c = spring_client()
    r = c.post("/spring/step", json={"count": 10})
    assert r.status_code == 200
    assert r.json()["state"]["iteration"] == 10
    r = c.post("/spring/params", json={"delta_rep": 0.05})
    assert r.status_code == 200
    assert r.json()["state"]["params"]["delta_rep"] == 0.05
    # untouched parameters keep their values
    assert r.json()["state"]["params"]["step_scale"] == 0.2
    r = c.post("/spring/step", json={"count": 0})
    assert r.status_code == 422
    r = c.post("/spring/step", json={"count": 1000000})
    assert r.status_code == 422


def test_log_replay_reproduces_the_scene():
    from fractions import Fraction as F
    from polydraw import schlegel as sch
    P = permutohedron(4)
    st = sch.initial_state(P, 0, zoom=F(2, 5))
    dia = sch.diagram(st)
    base = P.incidence[0]
    v = next(i for i in range(P.n_vertices) if not (base >> i) & 1)
    target = [str(x + F(1, 50)) for x in dia.positions[v]]

    c1 = schlegel_client(P, 0)
    cmds = [("zoom", {"zeta": "2/5"}),
            ("drag", {"vertex": v, "target": target}),
            ("zoom", {"zeta": "7/10"})]
    for op, payload in cmds:
        r = c1.post(f"/schlegel/{op}", json=payload)
        assert r.status_code == 200
    log = c1.get("/log").json()["commands"]
    assert [e["op"] for e in log] == ["zoom", "drag", "zoom"]
    final = c1.get("/scene").json()["scene"]

    c2 = schlegel_client(permutohedron(4), 0)
    for entry in log:
        r = c2.post(f"/schlegel/{entry['op']}", json=entry["payload"])
        assert r.status_code == 200
    assert c2.get("/scene").json()["scene"] == final
