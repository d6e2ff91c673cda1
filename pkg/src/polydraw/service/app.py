"""HTTP service exposing interactive drawing sessions.

A server hosts named sessions, each wrapping either a Schlegel diagram of a
polytope or a running spring embedding of a graph.  Every mutating command
is validated, applied under the session's lock, appended to the command log,
and answered with the full scene plus a state summary; rejected commands
leave the state untouched and map domain errors onto structured 409
payloads.  Replaying a session's log against a fresh server reproduces the
final scene byte for byte.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Mapping

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse

from ..errors import DimensionMismatch, PolydrawError, ValidationError
from ..geom.graphs import Graph
from ..geom.polytope import Polytope
from .. import schlegel as sg
from .. import spring
from ..rational import vadd, vscale, vsub
from ..scene import Scene, scene_from_embedding, scene_to_dict
from .models import (
    DragRequest,
    SelectFacetRequest,
    SpringParamsRequest,
    StepRequest,
    ZoomRequest,
)


def _frac(x) -> Fraction:
    # floats convert exactly (their binary value), strings may be "p/q"
    return Fraction(x)


class SchlegelSession:
    kind = "schlegel"

    def __init__(self, P: Polytope, facet: int = 0, zoom=None):
        self.polytope = P
        self.state = sg.initial_state(P, facet,
                                      None if zoom is None else Fraction(zoom))
        self.lock = threading.Lock()
        self.log: list[dict] = []
        self.scene: Scene = sg.scene_of(self.state)

    def summary(self) -> dict:
        return self.state.summary()

    def apply(self, op: str, payload: dict) -> None:
        if op == "select_facet":
            req = SelectFacetRequest(**payload)
            facet = sg.select_facet(self.polytope, req.marked)
            self.state = sg.initial_state(self.polytope, facet)
        elif op == "zoom":
            req = ZoomRequest(**payload)
            self.state = sg.set_zoom(self.state, _frac(req.zeta))
        elif op == "drag":
            req = DragRequest(**payload)
            if (req.displacement is None) == (req.target is None):
                raise ValidationError(
                    "drag takes exactly one of displacement or target")
            ch = sg.facet_chart(self.polytope, self.state.facet)
            if req.displacement is not None:
                c = [_frac(x) for x in req.displacement]
                if len(c) != len(ch.basis):
                    raise DimensionMismatch(
                        f"displacement needs {len(ch.basis)} chart coordinates")
                d = vsub(ch.to_ambient(c), ch.origin)
                self.state = sg.drag_facet_vertex(self.state, req.vertex, d)
            else:
                c = [_frac(x) for x in req.target]
                if len(c) != len(ch.basis):
                    raise DimensionMismatch(
                        f"target needs {len(ch.basis)} chart coordinates")
                self.state = sg.drag_nonfacet_vertex(self.state, req.vertex, c)
        else:
            raise ValidationError(f"unknown schlegel command {op!r}")
        self.scene = sg.scene_of(self.state)


class SpringSession:
    kind = "spring"

    def __init__(self, G: Graph, params: spring.SpringParams | None = None,
                 objective: Mapping[str, float] | None = None,
                 lengths: Mapping | None = None):
        self.graph = G
        self.params = params or spring.SpringParams()
        self.objective = dict(objective) if objective else None
        self.state = spring.init_state(G, self.params, lengths)
        self.lock = threading.Lock()
        self.log: list[dict] = []
        self.scene = self._render()

    def _render(self) -> Scene:
        meta = {
            "kind": "spring",
            "state": self.summary(),
        }
        return scene_from_embedding(self.graph, self.state.positions(),
                                    metadata=meta)

    def summary(self) -> dict:
        p = self.params
        return {
            "iteration": self.state.iteration,
            "fluctuation": self.state.fluctuation(),
            "params": {
                "delta_rep": p.delta_rep,
                "delta_visc": p.delta_visc,
                "delta_lin": p.delta_lin,
                "rest_length": p.rest_length,
                "step_scale": p.step_scale,
                "threshold": p.threshold,
                "seed": p.seed,
            },
            "objective": self.objective,
        }

    def apply(self, op: str, payload: dict) -> None:
        if op == "params":
            req = SpringParamsRequest(**payload)
            changes = {k: v for k, v in req.model_dump().items()
                       if v is not None}
            self.params = self.params.replace(**changes)
        elif op == "step":
            req = StepRequest(**payload)
            st = self.state
            for _ in range(req.count):
                st = spring.step(st, self.params, self.objective)
            self.state = st
        else:
            raise ValidationError(f"unknown spring command {op!r}")
        self.scene = self._render()


SCHLEGEL_OPS = ("select_facet", "zoom", "drag")
SPRING_OPS = ("params", "step")


def create_app(sessions: Mapping[str, SchlegelSession | SpringSession]) -> FastAPI:
    from fastapi.middleware.cors import CORSMiddleware

    app = FastAPI(title="polydraw", version="0.1.0")
    # the browser viewer may be served from a different origin than the API
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    registry = dict(sessions)
    if not registry:
        raise ValidationError("need at least one session")

    def get_session(name: str | None):
        if name is None:
            if len(registry) == 1:
                return next(iter(registry.values()))
            name = "default"
        s = registry.get(name)
        if s is None:
            raise HTTPException(status_code=404,
                                detail=f"no session named {name!r}")
        return s

    @app.exception_handler(PolydrawError)
    async def domain_error(request, exc: PolydrawError):
        return JSONResponse(status_code=409,
                            content={"error": exc.code, "detail": str(exc)})

    def respond(s) -> dict:
        return {"scene": scene_to_dict(s.scene), "state": s.summary(),
                "session_kind": s.kind}

    def run_command(s, op: str, payload: dict) -> dict:
        allowed = SCHLEGEL_OPS if s.kind == "schlegel" else SPRING_OPS
        if op not in allowed:
            raise HTTPException(
                status_code=400,
                detail=f"{op} is not a {s.kind} command")
        with s.lock:
            s.apply(op, payload)   # on error the state is left unchanged
            s.log.append({"op": op, "payload": payload})
        return respond(s)

    @app.get("/sessions")
    def list_sessions():
        return {name: s.kind for name, s in sorted(registry.items())}

    @app.get("/scene")
    def get_scene(session: str | None = Query(default=None)):
        return respond(get_session(session))

    @app.get("/log")
    def get_log(session: str | None = Query(default=None)):
        s = get_session(session)
        return {"commands": list(s.log)}

    @app.post("/schlegel/select_facet")
    def select_facet(req: SelectFacetRequest,
                     session: str | None = Query(default=None)):
        return run_command(get_session(session), "select_facet",
                           req.model_dump())

    @app.post("/schlegel/zoom")
    def zoom(req: ZoomRequest, session: str | None = Query(default=None)):
        return run_command(get_session(session), "zoom", req.model_dump())

    @app.post("/schlegel/drag")
    def drag(req: DragRequest, session: str | None = Query(default=None)):
        return run_command(get_session(session), "drag",
                           req.model_dump(exclude_none=True))

    @app.post("/spring/params")
    def spring_params(req: SpringParamsRequest,
                      session: str | None = Query(default=None)):
        return run_command(get_session(session), "params",
                           req.model_dump(exclude_none=True))

    @app.post("/spring/step")
    def spring_step(req: StepRequest,
                    session: str | None = Query(default=None)):
        return run_command(get_session(session), "step", req.model_dump())

    return app
